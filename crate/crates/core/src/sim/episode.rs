//! The receding-horizon loop and its metrics.

use serde::{Deserialize, Serialize};

use super::agents::{step_pedestrians, step_robot, Pedestrian, RobotState};
use super::scenario::ScenarioConfig;
use super::sense::{sense, SensedMaps, World};
use super::shapes::distance_to;
use super::SimError;
use crate::optimize::PedestrianPrediction;
use crate::planner::{plan_cycle, PlanOutput, PlanStatus, PlannerSettings, PlanningInput};
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Reached,
    Collided,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    pub time: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
    pub omega: f64,
    pub status: PlanStatus,
    pub frozen: bool,
    pub num_groups: usize,
    pub num_goal_lines: usize,
    pub num_candidates: usize,
    pub num_feasible: usize,
    /// Total time of the selected band.
    pub band_time: Option<f64>,
    pub violations: usize,
    /// Wall-clock seconds; zero when timing is stripped.
    pub t_init: f64,
    pub t_opt: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub name: String,
    pub seed: u64,
    pub outcome: Outcome,
    /// Time of arrival, or the elapsed time for other outcomes.
    pub time_to_goal: f64,
    pub freezing_count: usize,
    pub path_length: f64,
    pub min_obstacle_distance: f64,
    pub min_pedestrian_distance: f64,
    pub final_position: Point,
    pub cycles: Vec<CycleRecord>,
}

impl EpisodeResult {
    pub fn mean_t_init(&self) -> f64 {
        mean(self.cycles.iter().map(|c| c.t_init))
    }

    pub fn mean_t_opt(&self) -> f64 {
        mean(self.cycles.iter().map(|c| c.t_opt))
    }

    pub fn violations(&self) -> usize {
        self.cycles.iter().map(|c| c.violations).sum()
    }

    /// Copy with wall-clock fields zeroed, for byte-stable reports.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.cycles {
            c.t_init = 0.0;
            c.t_opt = 0.0;
        }
        r
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// State handed to an observer after each planning cycle.
pub struct CycleView<'a> {
    pub cycle: usize,
    pub time: f64,
    pub robot: &'a RobotState,
    pub pedestrians: &'a [Pedestrian],
    pub maps: &'a SensedMaps,
    pub plan: &'a PlanOutput,
}

pub fn run_scenario(cfg: &ScenarioConfig, settings: &PlannerSettings) -> Result<EpisodeResult, SimError> {
    run_scenario_with(cfg, settings, |_| true)
}

/// Runs the episode, calling `observer` after every planning cycle; the
/// run stops early when it returns `false`.
pub fn run_scenario_with(
    cfg: &ScenarioConfig,
    settings: &PlannerSettings,
    mut observer: impl FnMut(&CycleView<'_>) -> bool,
) -> Result<EpisodeResult, SimError> {
    cfg.validate()?;
    settings.optimizer.validate().map_err(SimError::Invalid)?;
    let mut settings = settings.clone();
    settings.limits.radius = cfg.robot.radius + settings.safety_margin.max(0.0);
    settings.limits.v_max = cfg.robot.v_max;
    settings.limits.omega_max = cfg.robot.omega_max;
    settings.limits.a_max = cfg.robot.a_max;

    let path = cfg.path();
    let mut world = World::new(cfg.shapes.clone(), cfg.pedestrians.clone());
    let mut robot = cfg.robot.initial_state();
    let spc = cfg.steps_per_cycle();
    let max_steps = (cfg.timeout / cfg.dt).ceil() as usize;
    let window = cfg.local_map_side * 0.5 + 1.0;

    let mut cmd = (0.0, 0.0);
    let mut cycles = Vec::new();
    let mut outcome = Outcome::Timeout;
    let mut time = 0.0;
    let mut path_length = 0.0;
    let mut min_obs = f64::INFINITY;
    let mut min_ped = f64::INFINITY;

    for step in 0..max_steps {
        if step % spc == 0 {
            let pos = robot.pose.position();
            let maps = sense(&world, pos, cfg.local_map_side, cfg.resolution, settings.extended_factor);
            let pedestrians = world
                .pedestrians
                .iter()
                .filter(|p| (p.position.x - pos.x).abs() <= window && (p.position.y - pos.y).abs() <= window)
                .map(|p| PedestrianPrediction { position: p.position, velocity: p.velocity, radius: p.radius })
                .collect();
            let input = PlanningInput {
                local: &maps.local,
                static_local: &maps.static_local,
                extended: Some(&maps.extended),
                robot: robot.pose,
                robot_speed: robot.v,
                global_goal: cfg.global_goal,
                global_path: &path,
                pedestrians,
            };
            let plan = plan_cycle(&input, &settings);
            let frozen = plan.selected.is_none();
            cmd = if frozen { (0.0, 0.0) } else { plan.command };
            cycles.push(CycleRecord {
                cycle: cycles.len(),
                time,
                x: robot.pose.x,
                y: robot.pose.y,
                theta: robot.pose.theta,
                v: robot.v,
                omega: robot.omega,
                status: plan.status,
                frozen,
                num_groups: plan.groups.len(),
                num_goal_lines: plan.lines.len(),
                num_candidates: plan.candidates.len(),
                num_feasible: plan.bands.iter().filter(|b| b.feasible).count(),
                band_time: plan.selected_band().map(|b| b.total_time),
                violations: plan.violations,
                t_init: plan.t_init,
                t_opt: plan.t_opt,
            });
            if frozen {
                log::debug!("cycle {} frozen: {:?}", cycles.len() - 1, plan.status);
            }
            let view = CycleView { cycle: cycles.len() - 1, time, robot: &robot, pedestrians: &world.pedestrians, maps: &maps, plan: &plan };
            if !observer(&view) {
                break;
            }
        }

        let before = robot.pose.position();
        robot = step_robot(&robot, cmd, cfg.dt);
        world.pedestrians = step_pedestrians(&world.pedestrians, &world.primitives, cfg.dt, &cfg.social_force);
        time = (step + 1) as f64 * cfg.dt;
        let pos = robot.pose.position();
        path_length += before.distance(pos);

        let d_obs = distance_to(&world.primitives, pos);
        let d_ped = world.pedestrians.iter().map(|p| pos.distance(p.position) - p.radius).fold(f64::INFINITY, f64::min);
        min_obs = min_obs.min(d_obs);
        min_ped = min_ped.min(d_ped);
        if d_obs < robot.radius || d_ped < robot.radius {
            outcome = Outcome::Collided;
            break;
        }
        if pos.distance(cfg.global_goal) <= cfg.goal_tolerance {
            outcome = Outcome::Reached;
            break;
        }
    }

    let freezing_count = cycles.iter().filter(|c| c.frozen).count();
    Ok(EpisodeResult {
        name: cfg.name.clone(),
        seed: cfg.seed,
        outcome,
        time_to_goal: time,
        freezing_count,
        path_length,
        min_obstacle_distance: min_obs,
        min_pedestrian_distance: min_ped,
        final_position: robot.pose.position(),
        cycles,
    })
}
