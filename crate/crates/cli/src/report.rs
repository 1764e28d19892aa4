//! Batch reports and their aggregates.

use serde::{Deserialize, Serialize};

use ganav_core::planner::PlannerSettings;
use ganav_core::sim::{EpisodeResult, Outcome, ScenarioKind};

/// Per-scenario summary line of a batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub name: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub time_to_goal: f64,
    pub freezing_count: usize,
    pub cycles: usize,
    pub violations: usize,
    pub path_length: f64,
    pub min_pedestrian_distance: f64,
    pub min_obstacle_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_t_init: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_t_opt: Option<f64>,
}

impl EpisodeSummary {
    pub fn new(r: &EpisodeResult, timing: bool) -> Self {
        Self {
            name: r.name.clone(),
            seed: r.seed,
            outcome: r.outcome,
            time_to_goal: r.time_to_goal,
            freezing_count: r.freezing_count,
            cycles: r.cycles.len(),
            violations: r.violations(),
            path_length: r.path_length,
            min_pedestrian_distance: finite_or(r.min_pedestrian_distance, -1.0),
            min_obstacle_distance: finite_or(r.min_obstacle_distance, -1.0),
            mean_t_init: timing.then(|| r.mean_t_init()),
            mean_t_opt: timing.then(|| r.mean_t_opt()),
        }
    }
}

fn finite_or(x: f64, fallback: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        fallback
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub scenarios: usize,
    pub reached: usize,
    pub collided: usize,
    pub timeout: usize,
    pub success_rate: f64,
    /// Mean over reached episodes; `None` when none arrived.
    pub mean_time_to_goal: Option<f64>,
    pub total_freezing: usize,
    pub total_violations: usize,
    /// Per-cycle means over all cycles of the batch (with `--timing`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_t_init: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_t_opt: Option<f64>,
}

impl Aggregates {
    pub fn compute(results: &[EpisodeResult], timing: bool) -> Self {
        let count = |o: Outcome| results.iter().filter(|r| r.outcome == o).count();
        let reached = count(Outcome::Reached);
        let arrivals: Vec<f64> = results.iter().filter(|r| r.outcome == Outcome::Reached).map(|r| r.time_to_goal).collect();
        let cycle_mean = |f: fn(&ganav_core::sim::CycleRecord) -> f64| {
            let xs: Vec<f64> = results.iter().flat_map(|r| r.cycles.iter().map(f)).collect();
            if xs.is_empty() {
                0.0
            } else {
                xs.iter().sum::<f64>() / xs.len() as f64
            }
        };
        Self {
            scenarios: results.len(),
            reached,
            collided: count(Outcome::Collided),
            timeout: count(Outcome::Timeout),
            success_rate: if results.is_empty() { 0.0 } else { reached as f64 / results.len() as f64 },
            mean_time_to_goal: (!arrivals.is_empty()).then(|| arrivals.iter().sum::<f64>() / arrivals.len() as f64),
            total_freezing: results.iter().map(|r| r.freezing_count).sum(),
            total_violations: results.iter().map(|r| r.violations()).sum(),
            mean_t_init: timing.then(|| cycle_mean(|c| c.t_init)),
            mean_t_opt: timing.then(|| cycle_mean(|c| c.t_opt)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub kind: ScenarioKind,
    pub dense: bool,
    pub seeds: Vec<u64>,
    pub ablations: Vec<String>,
    pub settings: PlannerSettings,
    pub aggregates: Aggregates,
    pub episodes: Vec<EpisodeSummary>,
}

impl BatchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable one-row table.
    pub fn table(&self) -> String {
        let a = &self.aggregates;
        let label = if self.ablations.is_empty() { "full".to_string() } else { format!("ablate:{}", self.ablations.join("+")) };
        let ms = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{:.1}", v * 1e3));
        let mut out = String::new();
        out.push_str("config               n  T_init[ms]  T_opt[ms]  T_goal[s]  R_goal  freezing  collided  timeout\n");
        out.push_str(&format!(
            "{:<18} {:>3}  {:>10}  {:>9}  {:>9}  {:>5.0}%  {:>8}  {:>8}  {:>7}\n",
            label,
            a.scenarios,
            ms(a.mean_t_init),
            ms(a.mean_t_opt),
            a.mean_time_to_goal.map_or("-".to_string(), |t| format!("{t:.1}")),
            a.success_rate * 100.0,
            a.total_freezing,
            a.collided,
            a.timeout
        ));
        out
    }
}
