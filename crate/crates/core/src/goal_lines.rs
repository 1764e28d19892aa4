//! Goal lines: free runs of local-map border cells that replace the single
//! local goal point as trajectory endpoints.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::geom::{closest_point_on_segment, point_segment_distance};
use crate::grid::{GridIndex, OccupancyGrid};
use crate::Point;

/// A straight run of free border cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalLine {
    pub id: usize,
    pub cells: Vec<GridIndex>,
    /// World centres of the first and last cell.
    pub endpoints: (Point, Point),
}

impl GoalLine {
    pub fn new(id: usize, cells: Vec<GridIndex>, grid: &OccupancyGrid) -> Self {
        assert!(!cells.is_empty(), "goal line needs at least one cell");
        let endpoints = (grid.cell_center(cells[0]), grid.cell_center(*cells.last().unwrap()));
        Self { id, cells, endpoints }
    }

    /// Line collapsed to a single world point (point-goal limit).
    pub fn point(id: usize, cell: GridIndex, grid: &OccupancyGrid) -> Self {
        Self::new(id, vec![cell], grid)
    }

    pub fn contains(&self, c: GridIndex) -> bool {
        self.cells.contains(&c)
    }

    pub fn length(&self) -> f64 {
        self.endpoints.0.distance(self.endpoints.1)
    }
}

/// Inputs derived from the global path for one planning cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct GoalContext {
    pub global_path: Vec<Point>,
    /// Global path exit through the border of the local map.
    pub local_goal: Point,
    /// Global path exit through the border of the extended map.
    pub extended_goal: Point,
    pub alpha: f64,
    pub d_max: f64,
    /// The global path ends inside the local map.
    pub goal_inside_map: bool,
}

impl GoalContext {
    /// Locates the local and extended goals on the two map borders.
    pub fn from_path(
        global_path: &[Point],
        robot: Point,
        global_goal: Point,
        local: &OccupancyGrid,
        extended: &OccupancyGrid,
        alpha: f64,
        d_max: f64,
    ) -> Self {
        let exit = path_exit_point(global_path, robot, local.world_min(), local.world_max());
        let ext_exit = path_exit_point(global_path, robot, extended.world_min(), extended.world_max());
        Self {
            global_path: global_path.to_vec(),
            local_goal: exit.unwrap_or(global_goal),
            extended_goal: ext_exit.unwrap_or(global_goal),
            alpha,
            d_max,
            goal_inside_map: exit.is_none(),
        }
    }

    /// `D = min(alpha * |robot - goal|, D_max)`.
    pub fn extension(&self, robot: Point, global_goal: Point) -> f64 {
        (self.alpha * robot.distance(global_goal)).min(self.d_max)
    }
}

fn inside(p: Point, lo: Point, hi: Point) -> bool {
    p.x >= lo.x && p.y >= lo.y && p.x < hi.x && p.y < hi.y
}

/// First point where the path, followed from the projection of `from` onto
/// its nearest segment, leaves the axis-aligned box `[lo, hi)`. `None` if it
/// ends inside.
pub fn path_exit_point(path: &[Point], from: Point, lo: Point, hi: Point) -> Option<Point> {
    match path.len() {
        0 => return None,
        1 => return (!inside(path[0], lo, hi)).then(|| segment_box_exit(from, path[0], lo, hi)),
        _ => {}
    }
    let seg = (0..path.len() - 1)
        .min_by(|&a, &b| {
            point_segment_distance(from, path[a], path[a + 1]).total_cmp(&point_segment_distance(from, path[b], path[b + 1]))
        })
        .unwrap();
    let foot = closest_point_on_segment(from, path[seg], path[seg + 1]);
    let mut prev = if inside(foot, lo, hi) { foot } else { from };
    for &p in &path[seg + 1..] {
        if inside(prev, lo, hi) && !inside(p, lo, hi) {
            return Some(segment_box_exit(prev, p, lo, hi));
        }
        prev = p;
    }
    None
}

/// Exit point of a segment starting inside the box.
fn segment_box_exit(a: Point, b: Point, lo: Point, hi: Point) -> Point {
    let d = b - a;
    let mut t: f64 = 1.0;
    let eps = 1e-9;
    if d.x > 0.0 {
        t = t.min((hi.x - eps - a.x) / d.x);
    } else if d.x < 0.0 {
        t = t.min((lo.x - a.x) / d.x);
    }
    if d.y > 0.0 {
        t = t.min((hi.y - eps - a.y) / d.y);
    } else if d.y < 0.0 {
        t = t.min((lo.y - a.y) / d.y);
    }
    a + d * t.clamp(0.0, 1.0)
}

/// Result of the initial goal-line construction.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialGoalLine {
    /// Border cells in border-loop order, centred on the local goal.
    pub cells: Vec<GridIndex>,
    pub goal_inside_map: bool,
}

fn nearest_border_index(border: &[GridIndex], target: GridIndex) -> usize {
    border
        .iter()
        .enumerate()
        .min_by_key(|(i, c)| (c.dist_sq(target), *i))
        .map(|(i, _)| i)
        .expect("non-empty border")
}

/// Border cells within `D` of the local goal along the border perimeter, in
/// both directions. Occupancy is not consulted. When the global goal lies
/// inside the map the line is its cell alone.
pub fn init_goal_line(ctx: &GoalContext, grid: &OccupancyGrid, robot: Point, global_goal: Point) -> InitialGoalLine {
    let border = grid.border_loop();
    if ctx.goal_inside_map {
        let g = grid.world_to_cell(global_goal);
        let g = GridIndex::new(g.x.clamp(0, grid.width() as i32 - 1), g.y.clamp(0, grid.height() as i32 - 1));
        return InitialGoalLine { cells: vec![g], goal_inside_map: true };
    }
    let k = nearest_border_index(&border, grid.world_to_cell(ctx.local_goal));
    let d = ctx.extension(robot, global_goal);
    let per_side = ((d / grid.resolution()) + 1e-9).floor() as usize;
    let per_side = per_side.min((border.len().saturating_sub(1)) / 2);
    let n = border.len();
    let cells = (0..=2 * per_side).map(|j| border[(k + n + j - per_side) % n]).collect();
    InitialGoalLine { cells, goal_inside_map: false }
}

/// Clearance of a cell: distance to the nearest occupied cell centre minus
/// half a cell, searched within `reach` meters.
fn cell_clearance(grid: &OccupancyGrid, c: GridIndex, reach: f64) -> f64 {
    let r = (reach / grid.resolution()).ceil() as i32 + 1;
    let mut best = f64::INFINITY;
    for dy in -r..=r {
        for dx in -r..=r {
            let n = c.offset(dx, dy);
            if grid.is_occupied(n) {
                let d = ((dx * dx + dy * dy) as f64).sqrt() * grid.resolution() - 0.5 * grid.resolution();
                best = best.min(d);
            }
        }
    }
    best.max(0.0)
}

/// Splits the full line into maximal straight runs of cells that are free
/// with clearance at least `inflation`; runs shorter than `min_length`
/// meters are discarded. Runs also break at map corners so that every line
/// is a straight segment. Ids are assigned in border order.
pub fn split_goal_lines(full_line: &[GridIndex], grid: &OccupancyGrid, inflation: f64, min_length: f64) -> Vec<GoalLine> {
    let usable = |c: GridIndex| {
        grid.contains(c) && !grid.is_occupied(c) && (inflation <= 0.0 || cell_clearance(grid, c, inflation) >= inflation)
    };
    let mut runs: Vec<Vec<GridIndex>> = Vec::new();
    let mut cur: Vec<GridIndex> = Vec::new();
    for (i, &c) in full_line.iter().enumerate() {
        if !usable(c) {
            if !cur.is_empty() {
                runs.push(std::mem::take(&mut cur));
            }
            continue;
        }
        cur.push(c);
        // A change of direction after this cell marks a map corner.
        if i > 0 && i + 1 < full_line.len() {
            let a = full_line[i - 1];
            let b = full_line[i + 1];
            if (c.x - a.x, c.y - a.y) != (b.x - c.x, b.y - c.y) {
                runs.push(std::mem::take(&mut cur));
            }
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs.into_iter()
        .filter(|r| r.len() as f64 * grid.resolution() + 1e-9 >= min_length)
        .enumerate()
        .map(|(id, cells)| GoalLine::new(id, cells, grid))
        .collect()
}

/// Outcome of dead-end pruning.
#[derive(Clone, Debug, PartialEq)]
pub struct PruneResult {
    pub lines: Vec<GoalLine>,
    /// `true` when the extended goal was occupied and no pruning happened.
    pub pruning_skipped: bool,
}

/// Keeps the goal lines whose cells share a free-space component of the
/// extended map with the extended goal.
///
/// The component is flooded (8-connected) over free cells of `extended`
/// that lie outside the interior of `local` (the border ring of `local`
/// stays in) and on the half of the extended map facing the extended goal.
pub fn prune_dead_ends(lines: &[GoalLine], local: &OccupancyGrid, extended: &OccupancyGrid, ctx: &GoalContext) -> PruneResult {
    let goal_cell = extended.world_to_cell(ctx.extended_goal);
    let goal_cell = GridIndex::new(
        goal_cell.x.clamp(0, extended.width() as i32 - 1),
        goal_cell.y.clamp(0, extended.height() as i32 - 1),
    );
    if extended.is_occupied(goal_cell) {
        log::warn!("extended goal {goal_cell} is occupied; keeping all {} goal lines", lines.len());
        return PruneResult { lines: lines.to_vec(), pruning_skipped: true };
    }
    let center = extended.world_center();
    let facing = ctx.extended_goal - center;
    let in_region = |c: GridIndex| -> bool {
        if !extended.contains(c) || extended.is_occupied(c) {
            return false;
        }
        let p = extended.cell_center(c);
        if (p - center).dot(facing) < 0.0 {
            return false;
        }
        let lc = local.world_to_cell(p);
        !(local.contains(lc) && !local.is_border(lc))
    };
    let mut reached = vec![false; extended.width() * extended.height()];
    let mut queue = VecDeque::new();
    let mut on_line = vec![false; extended.width() * extended.height()];
    let mut line_cells: Vec<Vec<GridIndex>> = Vec::with_capacity(lines.len());
    for l in lines {
        let cells: Vec<GridIndex> = l.cells.iter().map(|&c| extended.world_to_cell(local.cell_center(c))).collect();
        for &c in &cells {
            if extended.contains(c) {
                on_line[extended.linear(c)] = true;
            }
        }
        line_cells.push(cells);
    }
    let allowed = |c: GridIndex| {
        in_region(c) || (extended.contains(c) && on_line[extended.linear(c)] && !extended.is_occupied(c))
    };
    if allowed(goal_cell) {
        reached[extended.linear(goal_cell)] = true;
        queue.push_back(goal_cell);
    }
    while let Some(c) = queue.pop_front() {
        for n in c.neighbors8() {
            if extended.contains(n) && !reached[extended.linear(n)] && allowed(n) {
                reached[extended.linear(n)] = true;
                queue.push_back(n);
            }
        }
    }
    let kept = lines
        .iter()
        .zip(&line_cells)
        .filter(|(_, cells)| cells.iter().any(|&c| extended.contains(c) && reached[extended.linear(c)]))
        .map(|(l, _)| l.clone())
        .collect();
    PruneResult { lines: kept, pruning_skipped: false }
}

/// Concentric map `factor` times the side of `local`, same resolution.
pub fn extended_frame(local: &OccupancyGrid, factor: usize) -> OccupancyGrid {
    let w = local.width() * factor;
    let h = local.height() * factor;
    let c = local.world_center();
    let half = Point::new(w as f64, h as f64) * (0.5 * local.resolution());
    OccupancyGrid::new(w, h, local.resolution(), c - half).expect("valid extended grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_for(grid: &OccupancyGrid, ext: &OccupancyGrid, robot: Point, goal: Point, alpha: f64, d_max: f64) -> GoalContext {
        GoalContext::from_path(&[robot, goal], robot, goal, grid, ext, alpha, d_max)
    }

    /// 240x240 map at 0.05 m centred on the origin.
    fn local_map() -> OccupancyGrid {
        OccupancyGrid::new(240, 240, 0.05, Point::new(-6.0, -6.0)).unwrap()
    }

    #[test]
    fn extension_scales_then_saturates() {
        let grid = local_map();
        let ext = extended_frame(&grid, 2);
        let robot = Point::zero();
        let goal = Point::new(10.0, 0.0);
        let ctx = ctx_for(&grid, &ext, robot, goal, 0.2, 4.0);
        assert!((ctx.extension(robot, goal) - 2.0).abs() < 1e-12);
        let line = init_goal_line(&ctx, &grid, robot, goal);
        assert_eq!(line.cells.len(), 81, "40 cells each way plus the centre");
        let far = Point::new(50.0, 0.0);
        let ctx = ctx_for(&grid, &ext, robot, far, 0.2, 4.0);
        assert_eq!(ctx.extension(robot, far), 4.0);
        assert_eq!(init_goal_line(&ctx, &grid, robot, far).cells.len(), 161);
    }

    #[test]
    fn goal_line_wraps_map_corner() {
        let grid = local_map();
        let ext = extended_frame(&grid, 2);
        let robot = Point::zero();
        let goal = Point::new(20.0, 20.0);
        let ctx = ctx_for(&grid, &ext, robot, goal, 0.2, 1.0);
        let line = init_goal_line(&ctx, &grid, robot, goal);
        assert_eq!(line.cells.len(), 41);
        // Perimeter-walk oracle: the centre is the top-right corner cell and
        // 20 steps each way land on the top row and the right column.
        let corner = GridIndex::new(239, 239);
        assert_eq!(line.cells[20], corner);
        assert_eq!(line.cells[0], GridIndex::new(219, 239));
        assert_eq!(line.cells[40], GridIndex::new(239, 219));
        for w in line.cells.windows(2) {
            assert_eq!(w[0].chebyshev(w[1]), 1);
        }
    }

    #[test]
    fn goal_inside_map_is_flagged() {
        let grid = local_map();
        let ext = extended_frame(&grid, 2);
        let ctx = ctx_for(&grid, &ext, Point::zero(), Point::new(3.0, 0.0), 0.2, 4.0);
        let line = init_goal_line(&ctx, &grid, Point::zero(), Point::new(3.0, 0.0));
        assert!(line.goal_inside_map);
        assert_eq!(line.cells, vec![GridIndex::new(180, 120)]);
    }

    #[test]
    fn split_without_obstacles_keeps_whole_straight_line() {
        let grid = local_map();
        let full: Vec<_> = (100..141).map(|y| GridIndex::new(239, y)).collect();
        let lines = split_goal_lines(&full, &grid, 0.3, 0.6);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].cells, full);
    }

    #[test]
    fn blob_on_border_splits_line() {
        let mut grid = local_map();
        for y in 118..123 {
            for x in 235..240 {
                grid.set(GridIndex::new(x, y), true);
            }
        }
        let full: Vec<_> = (80..161).map(|y| GridIndex::new(239, y)).collect();
        let lines = split_goal_lines(&full, &grid, 0.3, 0.6);
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|l| l.cells.iter().all(|c| !(112..=128).contains(&c.y))));
    }

    #[test]
    fn narrow_gap_is_discarded() {
        // Run-length oracle: obstacles leave a single free border cell.
        let mut grid = OccupancyGrid::empty(60, 60, 0.05);
        for y in 0..60 {
            if y != 30 {
                grid.set(GridIndex::new(59, y), true);
            }
        }
        let full: Vec<_> = (0..60).map(|y| GridIndex::new(59, y)).collect();
        assert!(split_goal_lines(&full, &grid, 0.0, 0.6).is_empty());
        assert!(split_goal_lines(&full, &grid, 0.3, 0.6).is_empty());
    }
}
