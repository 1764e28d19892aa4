//! One planning cycle: grid stage, goal lines, topology, initialization and
//! band optimization.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::goal_lines::{init_goal_line, prune_dead_ends, split_goal_lines, GoalContext, GoalLine};
use crate::grid::{build_groups, inflate, ClearanceField, GridIndex, ObstacleGroup, OccupancyGrid};
use crate::init::{
    dedup_by_h_signature, derive_trajectories, h_signature, search_group_trajectories, shorten_at_junction,
    CandidateTrajectory, SearchParams,
};
use crate::optimize::{
    check_band, evaluate_and_select, first_command, goal_line_residual, optimize_band, PedestrianPrediction, Scene,
};
use crate::topology::{build_topology, group_voronoi, TopologyGraph, VoronoiGraph};
use crate::{Band, Limits, Params, Point, Pose};

/// Tunables of the planning cycle. The three mechanism switches exist for
/// A/B comparisons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerSettings {
    /// Use goal lines; when off the endpoint is the local goal point.
    pub goal_lines: bool,
    /// Use max-convex boundaries; when off the raw rings are used.
    pub convexify: bool,
    pub orientation_limit: bool,
    pub father_visit: bool,
    pub alpha: f64,
    /// Cap on the goal-line extension as a fraction of the map side.
    pub d_max_fraction: f64,
    pub min_goal_line_length: f64,
    /// Side factor of the extended map used for dead-end pruning.
    pub extended_factor: usize,
    pub max_results: usize,
    pub max_depth: usize,
    pub angle_limit_deg: f64,
    /// Candidates handed to the optimizer per cycle (shortest first).
    pub max_candidates: usize,
    /// Static clearance field cap, meters.
    pub field_cap: f64,
    /// Added to the robot radius when the simulator configures the planner,
    /// absorbing rasterization and tracking error, meters.
    pub safety_margin: f64,
    pub limits: Limits,
    pub optimizer: Params,
}

impl Default for PlannerSettings {
    fn default() -> Self {
        Self {
            goal_lines: true,
            convexify: true,
            orientation_limit: true,
            father_visit: true,
            alpha: 0.2,
            d_max_fraction: 0.45,
            min_goal_line_length: 0.6,
            extended_factor: 2,
            max_results: 8,
            max_depth: 5,
            angle_limit_deg: 100.0,
            max_candidates: 4,
            field_cap: 2.0,
            safety_margin: 0.05,
            limits: Limits::default(),
            optimizer: Params::default(),
        }
    }
}

/// Sensor-side inputs of one cycle, all in world coordinates.
#[derive(Clone, Debug)]
pub struct PlanningInput<'a> {
    /// Local map with static obstacles and pedestrians.
    pub local: &'a OccupancyGrid,
    /// Same frame with static obstacles only (optimizer clearance field).
    pub static_local: &'a OccupancyGrid,
    /// Extended map for dead-end pruning; `None` skips pruning.
    pub extended: Option<&'a OccupancyGrid>,
    pub robot: Pose,
    pub robot_speed: f64,
    pub global_goal: Point,
    pub global_path: &'a [Point],
    pub pedestrians: Vec<PedestrianPrediction<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Ok,
    NoTopologyPath,
    NoFeasibleBand,
}

/// Everything produced by one cycle (kept for rendering and metrics).
#[derive(Clone, Debug)]
pub struct PlanOutput {
    pub planning_grid: OccupancyGrid,
    pub groups: Vec<ObstacleGroup>,
    pub lines: Vec<GoalLine>,
    pub voronoi: VoronoiGraph,
    pub graph: TopologyGraph,
    pub candidates: Vec<CandidateTrajectory>,
    pub bands: Vec<Band>,
    pub selected: Option<usize>,
    pub command: (f64, f64),
    pub status: PlanStatus,
    pub pruning_skipped: bool,
    /// Optimizer invariant violations found by [`audit_bands`].
    pub violations: usize,
    /// Wall-clock seconds for topology + initialization.
    pub t_init: f64,
    /// Wall-clock seconds for optimizing all bands of the cycle.
    pub t_opt: f64,
}

impl PlanOutput {
    pub fn selected_band(&self) -> Option<&Band> {
        self.selected.map(|i| &self.bands[i])
    }
}

/// Inflated planning grid with the robot's own footprint cleared so the
/// robot cell can always reach free space; truly occupied cells stay.
pub fn planning_grid(local: &OccupancyGrid, robot: Point, radius: f64) -> OccupancyGrid {
    let mut g = inflate(local, radius);
    let rc = local.world_to_cell(robot);
    let r = (radius / local.resolution()).ceil() as i32 + 1;
    for dy in -r..=r {
        for dx in -r..=r {
            let c = rc.offset(dx, dy);
            if local.contains(c) && !local.is_occupied(c) && local.cell_center(c).distance(robot) <= radius + local.resolution() {
                g.set(c, false);
            }
        }
    }
    g
}

fn nearest_border_cell(grid: &OccupancyGrid, target: GridIndex) -> GridIndex {
    let border = grid.border_loop();
    *border.iter().min_by_key(|c| (c.dist_sq(target), **c)).unwrap()
}

/// Goal lines of the cycle and whether pruning was skipped.
pub fn goal_lines_for(input: &PlanningInput<'_>, settings: &PlannerSettings) -> (Vec<GoalLine>, bool) {
    let local = input.local;
    let robot = input.robot.position();
    let side = local.width().max(local.height()) as f64 * local.resolution();
    let extended_frame = crate::goal_lines::extended_frame(local, settings.extended_factor.max(2));
    let extended = input.extended.unwrap_or(&extended_frame);
    let ctx = GoalContext::from_path(
        input.global_path,
        robot,
        input.global_goal,
        local,
        extended,
        settings.alpha,
        settings.d_max_fraction * side,
    );
    if ctx.goal_inside_map {
        let cell = init_goal_line(&ctx, local, robot, input.global_goal).cells[0];
        return (vec![GoalLine::point(0, cell, local)], false);
    }
    let point_goal = || vec![GoalLine::point(0, nearest_border_cell(local, local.world_to_cell(ctx.local_goal)), local)];
    if !settings.goal_lines {
        return (point_goal(), false);
    }
    let full = init_goal_line(&ctx, local, robot, input.global_goal);
    let lines = split_goal_lines(&full.cells, local, settings.limits.radius, settings.min_goal_line_length);
    if lines.is_empty() {
        log::debug!("no usable goal line; falling back to the local goal point");
        return (point_goal(), false);
    }
    match input.extended {
        Some(ext) => {
            let pruned = prune_dead_ends(&lines, local, ext, &ctx);
            if pruned.lines.is_empty() {
                (lines, pruned.pruning_skipped)
            } else {
                (pruned.lines, pruned.pruning_skipped)
            }
        }
        None => (lines, false),
    }
}

/// Topology + trajectory initialization on a prepared planning grid.
pub fn initialize(
    grid: &OccupancyGrid,
    robot: Point,
    local_goal_dir: Point,
    lines: &[GoalLine],
    settings: &PlannerSettings,
) -> (Vec<ObstacleGroup>, VoronoiGraph, TopologyGraph, Vec<CandidateTrajectory>) {
    let groups = build_groups(grid, settings.convexify);
    let voronoi = group_voronoi(&groups, grid);
    let robot_cell = grid.world_to_cell(robot);
    let graph = build_topology(robot_cell, &groups, lines, &voronoi, grid);
    let search = SearchParams {
        max_results: settings.max_results,
        max_depth: settings.max_depth,
        reference: local_goal_dir,
        angle_limit: settings.angle_limit_deg.to_radians(),
        father_visit: settings.father_visit,
        orientation_limit: settings.orientation_limit,
    };
    let gts = search_group_trajectories(&graph, lines, &search);
    let mut cands = Vec::new();
    for gt in &gts {
        for t in derive_trajectories(gt, &graph, &groups, lines, grid) {
            let mut t = shorten_at_junction(&t, grid);
            t.h_signature = h_signature(&t, &groups, grid);
            cands.push(t);
        }
    }
    let mut cands = dedup_by_h_signature(cands);
    cands.truncate(settings.max_candidates.max(1));
    (groups, voronoi, graph, cands)
}

/// Runs one full planning cycle.
pub fn plan_cycle(input: &PlanningInput<'_>, settings: &PlannerSettings) -> PlanOutput {
    let robot = input.robot.position();
    let t0 = Instant::now();
    let (lines, pruning_skipped) = goal_lines_for(input, settings);
    let grid = planning_grid(input.local, robot, settings.limits.radius);
    let goal_ref = lines.first().map_or(input.global_goal, |l| l.endpoints.0.lerp(l.endpoints.1, 0.5));
    let (groups, voronoi, graph, candidates) = initialize(&grid, robot, goal_ref - robot, &lines, settings);
    let t_init = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let field = ClearanceField::new(input.static_local, settings.field_cap);
    let scene = Scene {
        field: Some(&field),
        pedestrians: input.pedestrians.clone(),
        start_heading: input.robot.theta,
        start_speed: input.robot_speed,
    };
    let bands: Vec<Band> = candidates
        .iter()
        .map(|c| {
            let mut seed = c.waypoints.clone();
            seed[0] = robot;
            if seed.len() < 2 {
                seed.push(robot);
            }
            let line = lines.iter().find(|l| l.id == c.goal_line_id).unwrap_or(&lines[0]);
            let ends = if settings.goal_lines { line.endpoints } else { (*seed.last().unwrap(), *seed.last().unwrap()) };
            optimize_band(&seed, ends, line.id, &scene, &settings.limits, &settings.optimizer)
        })
        .collect();
    let t_opt = t1.elapsed().as_secs_f64();

    let selected = evaluate_and_select(&bands).map(|b| bands.iter().position(|x| std::ptr::eq(x, b)).unwrap());
    let status = if candidates.is_empty() {
        PlanStatus::NoTopologyPath
    } else if selected.is_none() {
        PlanStatus::NoFeasibleBand
    } else {
        PlanStatus::Ok
    };
    let violations = audit_bands(&bands, &lines, &scene, settings);
    let command = selected.map_or((0.0, 0.0), |i| first_command(&bands[i], &settings.limits));
    PlanOutput {
        planning_grid: grid,
        groups,
        lines,
        voronoi,
        graph,
        candidates,
        bands,
        selected,
        command,
        status,
        pruning_skipped,
        violations,
        t_init,
        t_opt,
    }
}

/// Counts optimizer invariant violations: objective increases between
/// consecutive trace records of one (stage, outer) pass, and feasible bands
/// whose endpoint is off its goal line or that fail the kinematic and
/// clearance checks.
pub fn audit_bands(bands: &[Band], lines: &[GoalLine], scene: &Scene<'_, f64>, settings: &PlannerSettings) -> usize {
    let mut n = 0;
    for b in bands {
        n += b
            .trace
            .windows(2)
            .filter(|w| {
                (w[0].stage, w[0].outer) == (w[1].stage, w[1].outer)
                    && w[1].objective > w[0].objective + 1e-9 * w[0].objective.abs().max(1.0)
            })
            .count();
        if !b.feasible {
            continue;
        }
        if let Some(l) = lines.iter().find(|l| l.id == b.goal_line_id) {
            if goal_line_residual(b.end(), l.endpoints.0, l.endpoints.1) > 1e-3 {
                n += 1;
            }
        }
        if !check_band(b, scene, &settings.limits).feasible() {
            n += 1;
        }
    }
    n
}
