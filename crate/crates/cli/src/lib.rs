//! Command implementations behind the `ganav` binary.

pub mod render;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use ganav_core::planner::PlannerSettings;
use ganav_core::sim::{
    run_scenario, run_scenario_with, scenario_generator, EpisodeResult, GenCounts, Outcome, ScenarioConfig, ScenarioKind,
    SimError,
};

pub use render::render_svg;
pub use report::{Aggregates, BatchReport, EpisodeSummary};

/// Errors mapped to process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input (file, flags, scenario); exit code 2.
    #[error("{0}")]
    Input(String),
    /// Runtime failure; exit code 1.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::GenerationFailed { .. } => CliError::Failure(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Failure(format!("{}: {e}", path.display()))
}

/// Mechanisms that can be switched off for A/B comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ablation {
    GoalLines,
    Convexify,
    OrientationLimit,
}

impl Ablation {
    pub fn name(self) -> &'static str {
        match self {
            Ablation::GoalLines => "goal-lines",
            Ablation::Convexify => "convexify",
            Ablation::OrientationLimit => "orientation-limit",
        }
    }

    pub fn apply(self, s: &mut PlannerSettings) {
        match self {
            Ablation::GoalLines => s.goal_lines = false,
            Ablation::Convexify => s.convexify = false,
            Ablation::OrientationLimit => s.orientation_limit = false,
        }
    }
}

impl std::str::FromStr for Ablation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "goal-lines" => Ok(Self::GoalLines),
            "convexify" => Ok(Self::Convexify),
            "orientation-limit" => Ok(Self::OrientationLimit),
            _ => Err(format!("unknown ablation '{s}' (expected goal-lines, convexify or orientation-limit)")),
        }
    }
}

pub fn load_settings(path: Option<&Path>) -> Result<PlannerSettings, CliError> {
    let Some(path) = path else { return Ok(PlannerSettings::default()) };
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Record<'a> {
    Cycle(&'a ganav_core::sim::CycleRecord),
    Summary(&'a EpisodeSummary),
}

/// One JSON line per cycle followed by the summary line.
pub fn episode_jsonl(r: &EpisodeResult, timing: bool) -> String {
    let r = if timing { r.clone() } else { r.without_timing() };
    let mut out = String::new();
    for c in &r.cycles {
        out.push_str(&serde_json::to_string(&Record::Cycle(c)).expect("record serializes"));
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(&Record::Summary(&EpisodeSummary::new(&r, timing))).expect("record serializes"));
    out.push('\n');
    out
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub strict: bool,
    pub render_every: Option<usize>,
    pub out: PathBuf,
    pub timing: bool,
    pub settings: PlannerSettings,
}

/// Runs one scenario file; returns the result and the exit code.
pub fn cmd_run(scenario: &Path, opts: &RunOptions) -> Result<(EpisodeResult, i32), CliError> {
    let cfg = ScenarioConfig::load(scenario)?;
    fs::create_dir_all(&opts.out).map_err(|e| io_err(&opts.out, e))?;
    let mut write_err = None;
    let result = run_scenario_with(&cfg, &opts.settings, |view| {
        if let Some(n) = opts.render_every.filter(|&n| n > 0) {
            let k = view.cycle + 1;
            if k % n == 0 {
                let path = opts.out.join(format!("frame_{k:06}.svg"));
                if let Err(e) = fs::write(&path, render_svg(view)) {
                    write_err = Some(io_err(&path, e));
                    return false;
                }
            }
        }
        true
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    let path = opts.out.join("episode.jsonl");
    fs::write(&path, episode_jsonl(&result, opts.timing)).map_err(|e| io_err(&path, e))?;
    let code = if opts.strict && result.outcome != Outcome::Reached { 1 } else { 0 };
    Ok((result, code))
}

#[derive(Clone, Debug)]
pub struct BatchOptions {
    pub kind: ScenarioKind,
    pub n: usize,
    pub seed: u64,
    pub ablate: Vec<Ablation>,
    pub jobs: usize,
    pub timing: bool,
    /// Static scenes crowded with T- and X-shapes.
    pub dense: bool,
    /// Episode records (JSON lines) for every scenario, in seed order.
    pub records: Option<PathBuf>,
    pub settings: PlannerSettings,
}

pub fn batch_configs(kind: ScenarioKind, n: usize, seed: u64, dense: bool) -> Result<Vec<ScenarioConfig>, CliError> {
    let counts = if dense && kind == ScenarioKind::Static { GenCounts::dense_tx() } else { GenCounts::for_kind(kind) };
    (0..n as u64).map(|i| scenario_generator(seed + i, kind, &counts).map_err(CliError::from)).collect()
}

/// Runs `n` generated scenarios with seeds `seed..seed+n`.
pub fn cmd_batch(opts: &BatchOptions) -> Result<(BatchReport, Vec<EpisodeResult>), CliError> {
    if opts.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let mut settings = opts.settings.clone();
    let mut ablate = opts.ablate.clone();
    ablate.sort();
    ablate.dedup();
    for a in &ablate {
        a.apply(&mut settings);
    }
    let configs = batch_configs(opts.kind, opts.n, opts.seed, opts.dense)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let results: Vec<EpisodeResult> = pool.install(|| {
        configs
            .par_iter()
            .map(|cfg| {
                let r = run_scenario(cfg, &settings);
                if let Ok(r) = &r {
                    log::info!("{}: {:?} in {:.1}s, {} frozen", r.name, r.outcome, r.time_to_goal, r.freezing_count);
                }
                r
            })
            .collect::<Result<_, _>>()
    })?;
    let results: Vec<EpisodeResult> = if opts.timing { results } else { results.iter().map(|r| r.without_timing()).collect() };
    if let Some(path) = &opts.records {
        let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
        for r in &results {
            f.write_all(episode_jsonl(r, opts.timing).as_bytes()).map_err(|e| io_err(path, e))?;
        }
    }
    let report = BatchReport {
        kind: opts.kind,
        dense: opts.dense,
        seeds: configs.iter().map(|c| c.seed).collect(),
        ablations: ablate.iter().map(|a| a.name().to_string()).collect(),
        settings,
        aggregates: Aggregates::compute(&results, opts.timing),
        episodes: results.iter().map(|r| EpisodeSummary::new(r, opts.timing)).collect(),
    };
    Ok((report, results))
}

/// SVG of the scene at planning cycle `cycle` (0-based).
pub fn cmd_render(scenario: &Path, cycle: usize, settings: &PlannerSettings) -> Result<String, CliError> {
    let cfg = ScenarioConfig::load(scenario)?;
    let mut svg = None;
    let result = run_scenario_with(&cfg, settings, |view| {
        if view.cycle == cycle {
            svg = Some(render_svg(view));
            return false;
        }
        true
    })?;
    svg.ok_or_else(|| CliError::Input(format!("cycle {cycle} is beyond the episode end ({} cycles)", result.cycles.len())))
}

pub fn cmd_gen(kind: ScenarioKind, seed: u64, dense: bool, out: &Path) -> Result<ScenarioConfig, CliError> {
    let cfg = batch_configs(kind, 1, seed, dense)?.remove(0);
    fs::write(out, cfg.to_toml()).map_err(|e| io_err(out, e))?;
    Ok(cfg)
}
