//! Scenario files, the seeded generator and the global path search.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::agents::{Pedestrian, RobotState, SocialForce};
use super::shapes::{distance_to, rasterize_primitives, Primitive, Shape, ShapeKind};
use super::SimError;
use crate::grid::{inflate, segment_free, GridIndex, OccupancyGrid};
use crate::{Point, Pose};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotConfig {
    pub start: Pose,
    pub radius: f64,
    pub v_max: f64,
    pub omega_max: f64,
    pub a_max: f64,
}

impl Default for RobotConfig {
    fn default() -> Self {
        Self { start: Pose::default(), radius: 0.3, v_max: 1.0, omega_max: 1.5, a_max: 1.0 }
    }
}

impl RobotConfig {
    pub fn initial_state(&self) -> RobotState {
        RobotState {
            pose: self.start,
            v: 0.0,
            omega: 0.0,
            radius: self.radius,
            v_max: self.v_max,
            omega_max: self.omega_max,
            a_max: self.a_max,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub world_min: Point,
    pub world_max: Point,
    #[serde(default = "defaults::dt")]
    pub dt: f64,
    #[serde(default = "defaults::planning_period")]
    pub planning_period: f64,
    #[serde(default = "defaults::timeout")]
    pub timeout: f64,
    #[serde(default = "defaults::local_map_side")]
    pub local_map_side: f64,
    #[serde(default = "defaults::resolution")]
    pub resolution: f64,
    #[serde(default = "defaults::goal_tolerance")]
    pub goal_tolerance: f64,
    pub robot: RobotConfig,
    pub global_goal: Point,
    /// Empty means the straight segment from start to goal.
    #[serde(default)]
    pub global_path: Vec<Point>,
    #[serde(default)]
    pub social_force: SocialForce,
    #[serde(default)]
    pub shapes: Vec<Shape>,
    #[serde(default)]
    pub pedestrians: Vec<Pedestrian>,
}

mod defaults {
    pub fn dt() -> f64 {
        0.05
    }
    pub fn planning_period() -> f64 {
        0.2
    }
    pub fn timeout() -> f64 {
        100.0
    }
    pub fn local_map_side() -> f64 {
        12.0
    }
    pub fn resolution() -> f64 {
        0.05
    }
    pub fn goal_tolerance() -> f64 {
        0.3
    }
}

impl ScenarioConfig {
    /// A config with defaults for everything but the geometry.
    pub fn new(world_min: Point, world_max: Point, start: Pose, goal: Point) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: String::new(),
            seed: 0,
            world_min,
            world_max,
            dt: defaults::dt(),
            planning_period: defaults::planning_period(),
            timeout: defaults::timeout(),
            local_map_side: defaults::local_map_side(),
            resolution: defaults::resolution(),
            goal_tolerance: defaults::goal_tolerance(),
            robot: RobotConfig { start, ..RobotConfig::default() },
            global_goal: goal,
            global_path: Vec::new(),
            social_force: SocialForce::default(),
            shapes: Vec::new(),
            pedestrians: Vec::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        let cfg: Self = toml::from_str(text).map_err(|e| SimError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn primitives(&self) -> Vec<Primitive> {
        self.shapes.iter().flat_map(|s| s.primitives()).collect()
    }

    pub fn steps_per_cycle(&self) -> usize {
        (self.planning_period / self.dt).round().max(1.0) as usize
    }

    /// The configured global path, or start-goal when none is given.
    pub fn path(&self) -> Vec<Point> {
        if self.global_path.len() >= 2 {
            self.global_path.clone()
        } else {
            vec![self.robot.start.position(), self.global_goal]
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::Invalid(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        if !(self.dt > 0.0) || !(self.planning_period >= self.dt) || !(self.timeout > 0.0) {
            return bad("dt, planning_period and timeout must be positive with planning_period >= dt".into());
        }
        if !(self.resolution > 0.0) || !(self.local_map_side >= 10.0 * self.resolution) {
            return bad("resolution must be positive and the local map at least 10 cells wide".into());
        }
        if !(self.world_min.x < self.world_max.x && self.world_min.y < self.world_max.y) {
            return bad("world_min must be below world_max".into());
        }
        let r = &self.robot;
        if !(r.radius > 0.0 && r.v_max > 0.0 && r.omega_max > 0.0 && r.a_max > 0.0) {
            return bad("robot radius and limits must be positive".into());
        }
        for s in &self.shapes {
            s.validate().map_err(SimError::Invalid)?;
        }
        for p in &self.pedestrians {
            p.validate().map_err(SimError::Invalid)?;
        }
        let prims = self.primitives();
        if distance_to(&prims, r.start.position()) < r.radius {
            return bad("robot start overlaps a static obstacle".into());
        }
        if distance_to(&prims, self.global_goal) <= 0.0 {
            return bad("global goal lies inside a static obstacle".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Static,
    Dynamic,
}

impl std::str::FromStr for ScenarioKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "static" => Ok(Self::Static),
            "dynamic" => Ok(Self::Dynamic),
            _ => Err(format!("unknown scenario kind '{s}' (expected static or dynamic)")),
        }
    }
}

/// Population ranges for the generator (inclusive).
#[derive(Clone, Debug, PartialEq)]
pub struct GenCounts {
    pub shapes: (usize, usize),
    pub pedestrians: (usize, usize),
    pub kinds: Vec<ShapeKind>,
    /// Minimum free gap between placements' bounding disks, meters.
    pub shape_gap: f64,
    /// Shapes per placement (inclusive range); more than one forms an
    /// overlapping cluster.
    pub cluster: (usize, usize),
}

impl GenCounts {
    pub fn for_kind(kind: ScenarioKind) -> Self {
        match kind {
            ScenarioKind::Static => {
                Self { shapes: (8, 15), pedestrians: (0, 0), kinds: ShapeKind::ALL.to_vec(), shape_gap: 1.2, cluster: (1, 1) }
            }
            ScenarioKind::Dynamic => Self { shapes: (0, 0), pedestrians: (8, 20), kinds: ShapeKind::ALL.to_vec(), shape_gap: 1.2, cluster: (1, 1) },
        }
    }

    /// Static scenes crowded with clusters of overlapping T- and X-shapes.
    pub fn dense_tx() -> Self {
        Self { shapes: (10, 14), pedestrians: (0, 0), kinds: vec![ShapeKind::T, ShapeKind::X], shape_gap: 1.0, cluster: (2, 3) }
    }
}

const WORLD: (f64, f64) = (36.0, 24.0);
const MAX_ATTEMPTS: usize = 5000;
const LAYOUT_ATTEMPTS: usize = 20;

fn random_shape(rng: &mut ChaCha8Rng, kind: ShapeKind, at: Point) -> Shape {
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    match kind {
        ShapeKind::Line => Shape::bar(kind, at.x, at.y, theta, rng.gen_range(2.0..5.0), rng.gen_range(0.1..0.25)),
        ShapeKind::Rectangle => Shape::bar(kind, at.x, at.y, theta, rng.gen_range(1.0..3.0), rng.gen_range(0.6..2.0)),
        ShapeKind::Circle => Shape::circle(at.x, at.y, rng.gen_range(0.4..1.2)),
        ShapeKind::T | ShapeKind::X => Shape::bar(kind, at.x, at.y, theta, rng.gen_range(1.8..3.2), rng.gen_range(0.25..0.45)),
    }
}

/// Seeded scenario: start on the left, goal on the right more than 30 m
/// away, shapes and/or pedestrians in between. Layouts without a global
/// path are redrawn a bounded number of times.
pub fn scenario_generator(seed: u64, kind: ScenarioKind, counts: &GenCounts) -> Result<ScenarioConfig, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..LAYOUT_ATTEMPTS {
        if let Some(mut cfg) = try_layout(&mut rng, counts) {
            cfg.seed = seed;
            cfg.name = format!(
                "{}-{seed}",
                match kind {
                    ScenarioKind::Static => "static",
                    ScenarioKind::Dynamic => "dynamic",
                }
            );
            cfg.validate()?;
            return Ok(cfg);
        }
    }
    Err(SimError::GenerationFailed { seed })
}

fn try_layout(rng: &mut ChaCha8Rng, counts: &GenCounts) -> Option<ScenarioConfig> {
    let (w, h) = WORLD;
    let start = Point::new(2.5, rng.gen_range(9.0..15.0));
    let goal = Point::new(w - 2.5, rng.gen_range(9.0..15.0));
    let mut cfg = ScenarioConfig::new(Point::zero(), Point::new(w, h), Pose::new(start.x, start.y, 0.0), goal);
    cfg.robot.start.theta = (goal - start).angle();
    if counts.kinds.is_empty() && counts.shapes.1 > 0 {
        return None;
    }

    let n_places = rng.gen_range(counts.shapes.0..=counts.shapes.1);
    let mut placed: Vec<(Point, f64)> = Vec::new();
    let mut attempts = 0;
    while placed.len() < n_places {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return None;
        }
        let at = Point::new(rng.gen_range(5.5..w - 5.5), rng.gen_range(2.0..h - 2.0));
        let k = rng.gen_range(counts.cluster.0.max(1)..=counts.cluster.1.max(1));
        let group: Vec<Shape> = (0..k)
            .map(|i| {
                let kind = counts.kinds[rng.gen_range(0..counts.kinds.len())];
                let off = if i == 0 { Point::zero() } else { Point::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)) };
                random_shape(rng, kind, at + off)
            })
            .collect();
        let r = group.iter().map(|s| s.center().distance(at) + s.bounding_radius()).fold(0.0, f64::max);
        let clear_ends = at.distance(start) > r + 2.0 && at.distance(goal) > r + 2.0;
        let spaced = placed.iter().all(|&(c, rc)| c.distance(at) > r + rc + counts.shape_gap);
        if clear_ends && spaced {
            placed.push((at, r));
            cfg.shapes.extend(group);
        }
    }

    let n_peds = rng.gen_range(counts.pedestrians.0..=counts.pedestrians.1);
    let prims = cfg.primitives();
    attempts = 0;
    while cfg.pedestrians.len() < n_peds {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return None;
        }
        let x = rng.gen_range(6.0..w - 4.0);
        let (a, b) = if rng.gen_bool(0.7) {
            // Crossing the start-goal corridor.
            (
                Point::new(x + rng.gen_range(-3.0..3.0), rng.gen_range(1.0..6.0)),
                Point::new(x + rng.gen_range(-3.0..3.0), rng.gen_range(h - 6.0..h - 1.0)),
            )
        } else {
            let y = rng.gen_range(8.0..16.0);
            (Point::new(rng.gen_range(5.0..12.0), y), Point::new(rng.gen_range(w - 10.0..w - 3.0), y + rng.gen_range(-2.0..2.0)))
        };
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let pos = a.lerp(b, rng.gen_range(0.1..0.9));
        let speed = rng.gen_range(0.3..0.5);
        let radius = 0.3;
        let clear = pos.distance(start) > 3.0
            && pos.distance(goal) > 1.5
            && distance_to(&prims, pos) > radius + 0.2
            && cfg.pedestrians.iter().all(|p| p.position.distance(pos) > 1.0);
        if clear {
            cfg.pedestrians.push(Pedestrian {
                position: pos,
                velocity: (b - pos).normalized() * speed,
                goal: b,
                radius,
                desired_speed: speed,
                waypoints: vec![a, b],
            });
        }
    }

    cfg.global_path = global_path(&cfg, 0.1)?;
    Some(cfg)
}

/// Static obstacles of the whole world at `resolution`, inflated by the robot
/// radius plus a 0.1 m margin.
pub fn static_world_grid(cfg: &ScenarioConfig, resolution: f64) -> OccupancyGrid {
    let size = cfg.world_max - cfg.world_min;
    let w = (size.x / resolution).ceil() as usize;
    let h = (size.y / resolution).ceil() as usize;
    let mut g = OccupancyGrid::new(w, h, resolution, cfg.world_min).expect("positive resolution");
    rasterize_primitives(&mut g, &cfg.primitives());
    inflate(&g, cfg.robot.radius + 0.1)
}

/// 8-connected A* from start to goal over the inflated static map,
/// string-pulled to a sparse polyline. `None` when no path exists.
pub fn global_path(cfg: &ScenarioConfig, resolution: f64) -> Option<Vec<Point>> {
    let mut grid = static_world_grid(cfg, resolution);
    let s = grid.world_to_cell(cfg.robot.start.position());
    let g = grid.world_to_cell(cfg.global_goal);
    if !grid.contains(s) || !grid.contains(g) {
        return None;
    }
    grid.set(s, false);
    grid.set(g, false);
    let cells = astar(&grid, s, g)?;
    let mut out = vec![cfg.robot.start.position()];
    let mut i = 0;
    while i + 1 < cells.len() {
        let mut j = i + 1;
        while j + 1 < cells.len() && segment_free(&grid, cells[i], cells[j + 1]) {
            j += 1;
        }
        if j + 1 < cells.len() {
            out.push(grid.cell_center(cells[j]));
        }
        i = j;
    }
    out.push(cfg.global_goal);
    Some(out)
}

fn astar(grid: &OccupancyGrid, s: GridIndex, g: GridIndex) -> Option<Vec<GridIndex>> {
    let h = |c: GridIndex| {
        let (dx, dy) = ((c.x - g.x).abs() as u64, (c.y - g.y).abs() as u64);
        10 * dx.max(dy) + 4 * dx.min(dy)
    };
    let n = grid.width() * grid.height();
    let mut cost = vec![u64::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    cost[grid.linear(s)] = 0;
    heap.push(Reverse((h(s), 0u64, grid.linear(s))));
    while let Some(Reverse((_, c, i))) = heap.pop() {
        if c > cost[i] {
            continue;
        }
        let cell = grid.index_of(i);
        if cell == g {
            let mut path = vec![cell];
            let mut k = i;
            while parent[k] != usize::MAX {
                k = parent[k];
                path.push(grid.index_of(k));
            }
            path.reverse();
            return Some(path);
        }
        for nb in cell.neighbors8() {
            if !grid.contains(nb) || grid.is_occupied(nb) {
                continue;
            }
            let step = if nb.x != cell.x && nb.y != cell.y { 14 } else { 10 };
            let j = grid.linear(nb);
            if c + step < cost[j] {
                cost[j] = c + step;
                parent[j] = i;
                heap.push(Reverse((c + step + h(nb), c + step, j)));
            }
        }
    }
    None
}
