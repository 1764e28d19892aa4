//! Trajectory initialization: group-level search, 2^n derivation,
//! shortening and homotopy deduplication.

mod derive;
mod search;

pub use derive::{derive_trajectories, shorten_at_junction, ARC_STRIDE};
pub use search::{edge_heuristic, search_group_trajectories, GroupLevelTrajectory, SearchParams};

use crate::geom::winding_angle;
use crate::goal_lines::GoalLine;
use crate::grid::{GridIndex, ObstacleGroup, OccupancyGrid};
use crate::topology::Direction;
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaypointKind {
    /// Robot, goal cell, or a boundary/connection junction.
    Key,
    Arc,
    Segment,
}

/// A concrete collision-free polyline from the robot to a goal-line cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateTrajectory {
    pub waypoints: Vec<Point>,
    /// Grid cell of every waypoint.
    pub cells: Vec<GridIndex>,
    pub kinds: Vec<WaypointKind>,
    /// Visited groups with their detour direction.
    pub groups: Vec<(usize, Direction)>,
    /// One entry per group of the scene; empty until computed.
    pub h_signature: Vec<i8>,
    pub length: f64,
    pub goal_line_id: usize,
}

/// Goal cell nearest to `c`, with its line id. Lines are straight runs, so
/// the projection onto the run gives the nearest cell; ties go to the
/// lower line id.
pub fn nearest_goal_cell(c: GridIndex, lines: &[GoalLine]) -> Option<(GridIndex, usize)> {
    let mut best: Option<(i64, GridIndex, usize)> = None;
    for l in lines {
        let n = l.cells.len();
        let a = l.cells[0];
        let b = l.cells[n - 1];
        let k = if n == 1 {
            0
        } else {
            let (dx, dy) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
            let t = ((c.x - a.x) as f64 * dx + (c.y - a.y) as f64 * dy) / (dx * dx + dy * dy);
            (t.clamp(0.0, 1.0) * (n - 1) as f64).round() as usize
        };
        // Check the neighbours of the projected index too (rounding).
        for kk in k.saturating_sub(1)..=(k + 1).min(n - 1) {
            let g = l.cells[kk];
            let d = c.dist_sq(g);
            if best.map_or(true, |(bd, _, bl)| d < bd || (d == bd && l.id < bl)) {
                best = Some((d, g, l.id));
            }
        }
    }
    best.map(|(_, g, l)| (g, l))
}

/// Per-group passage side from the winding angle of the waypoints about
/// each group centroid: `+1` at `>= pi/2` (counterclockwise), `-1` at
/// `<= -pi/2`, else `0`.
pub fn h_signature(t: &CandidateTrajectory, groups: &[ObstacleGroup], grid: &OccupancyGrid) -> Vec<i8> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    groups
        .iter()
        .map(|g| {
            let mut center = g.centroid(grid);
            if t.waypoints.iter().any(|p| p.distance(center) < 1e-9) {
                log::warn!("group {} centroid lies on a waypoint; shifting by half a cell", g.id);
                center += Point::new(0.5, 0.5) * grid.resolution();
            }
            let w = winding_angle(&t.waypoints, center);
            if w >= half_pi {
                1
            } else if w <= -half_pi {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Keeps the shortest trajectory of every signature class. The sort is
/// stable, so equal lengths keep derivation order.
pub fn dedup_by_h_signature(mut ts: Vec<CandidateTrajectory>) -> Vec<CandidateTrajectory> {
    ts.sort_by(|a, b| a.length.total_cmp(&b.length));
    let mut seen: Vec<Vec<i8>> = Vec::new();
    ts.into_iter()
        .filter(|t| {
            if seen.contains(&t.h_signature) {
                false
            } else {
                seen.push(t.h_signature.clone());
                true
            }
        })
        .collect()
}
