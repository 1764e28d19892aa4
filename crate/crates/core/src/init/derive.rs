//! Expansion of group-level trajectories into concrete candidates.

use crate::goal_lines::GoalLine;
use crate::grid::{bresenham, segment_free, GridIndex, ObstacleGroup, OccupancyGrid};
use crate::topology::{Direction, NodeId, TopologyGraph};
use crate::Point;

use super::search::GroupLevelTrajectory;
use super::{nearest_goal_cell, CandidateTrajectory, WaypointKind};

/// Arc and segment cells kept as waypoints: every `ARC_STRIDE`-th cell,
/// plus any cell needed to keep consecutive chords collision-free.
pub const ARC_STRIDE: usize = 3;

struct PathBuilder<'a> {
    grid: &'a OccupancyGrid,
    cells: Vec<GridIndex>,
    kinds: Vec<WaypointKind>,
}

impl<'a> PathBuilder<'a> {
    fn new(grid: &'a OccupancyGrid, start: GridIndex) -> Self {
        Self { grid, cells: vec![start], kinds: vec![WaypointKind::Key] }
    }

    fn push(&mut self, c: GridIndex, kind: WaypointKind) {
        if *self.cells.last().unwrap() == c {
            if kind == WaypointKind::Key {
                *self.kinds.last_mut().unwrap() = kind;
            }
            return;
        }
        self.cells.push(c);
        self.kinds.push(kind);
    }

    /// Appends a chain of 8-adjacent cells starting next to the current
    /// end, decimated greedily; the last cell becomes a key waypoint.
    fn chain(&mut self, chain: &[GridIndex], kind: WaypointKind) {
        let mut since = 0;
        for (i, &c) in chain.iter().enumerate() {
            if i + 1 == chain.len() {
                self.push(c, WaypointKind::Key);
                break;
            }
            since += 1;
            let last = *self.cells.last().unwrap();
            if since >= ARC_STRIDE || !segment_free(self.grid, last, chain[i + 1]) {
                self.push(c, kind);
                since = 0;
            }
        }
    }

    fn segment_to(&mut self, c: GridIndex) {
        let from = *self.cells.last().unwrap();
        let line = bresenham(from, c);
        self.chain(&line[1..], WaypointKind::Segment);
    }

    fn arc(&mut self, ring: &[GridIndex], from: usize, to: usize, dir: Direction) {
        let n = ring.len();
        let steps = arc_steps(from, to, dir, n);
        let chain: Vec<GridIndex> = (1..=steps).map(|k| ring[advance(from, k as i64 * dir.sign() as i64, n)]).collect();
        self.chain(&chain, WaypointKind::Arc);
    }
}

fn advance(pos: usize, delta: i64, n: usize) -> usize {
    (pos as i64 + delta).rem_euclid(n as i64) as usize
}

/// Number of ring steps from `from` to `to` walking in `dir` (clockwise is
/// increasing ring index).
fn arc_steps(from: usize, to: usize, dir: Direction, n: usize) -> usize {
    match dir {
        Direction::Cw => (to as i64 - from as i64).rem_euclid(n as i64) as usize,
        Direction::Ccw => (from as i64 - to as i64).rem_euclid(n as i64) as usize,
    }
}

fn usable(grid: &OccupancyGrid, c: GridIndex) -> bool {
    grid.contains(c) && !grid.is_occupied(c)
}

/// Slides a ring position in `dir` while the cell stays visible from `from`.
fn slide_entry(grid: &OccupancyGrid, from: GridIndex, ring: &[GridIndex], start: usize, dir: Direction) -> usize {
    let n = ring.len();
    let mut pos = start;
    for _ in 1..n {
        let next = advance(pos, dir.sign() as i64, n);
        let c = ring[next];
        if !usable(grid, c) || !segment_free(grid, from, c) {
            break;
        }
        pos = next;
    }
    pos
}

/// First ring cell at or after `start` (walking in `dir`) whose nearest
/// goal cell is visible.
fn scan_exit(
    grid: &OccupancyGrid,
    ring: &[GridIndex],
    start: usize,
    dir: Direction,
    lines: &[GoalLine],
) -> Option<(usize, GridIndex, usize)> {
    let n = ring.len();
    (0..n).map(|k| advance(start, k as i64 * dir.sign() as i64, n)).find_map(|q| {
        let c = ring[q];
        if !usable(grid, c) {
            return None;
        }
        let (g, lid) = nearest_goal_cell(c, lines)?;
        segment_free(grid, c, g).then_some((q, g, lid))
    })
}

fn finish(b: PathBuilder<'_>, groups: Vec<(usize, Direction)>, goal_line_id: usize) -> CandidateTrajectory {
    let waypoints: Vec<Point> = b.cells.iter().map(|&c| b.grid.cell_center(c)).collect();
    let length = crate::geom::polyline_length(&waypoints);
    CandidateTrajectory {
        waypoints,
        cells: b.cells,
        kinds: b.kinds,
        groups,
        h_signature: Vec::new(),
        length,
        goal_line_id,
    }
}

/// All `2^n` detour-direction assignments of `gt`, in assignment order
/// (bit `m` of the index set means group `m` is passed counterclockwise).
pub fn derive_trajectories(
    gt: &GroupLevelTrajectory,
    graph: &TopologyGraph,
    groups: &[ObstacleGroup],
    lines: &[GoalLine],
    grid: &OccupancyGrid,
) -> Vec<CandidateTrajectory> {
    let robot = graph.robot_cell;
    let gs = gt.groups();
    let n = gs.len();
    if n == 0 {
        let Some(e) = graph.edge(NodeId::Robot, NodeId::Goal) else {
            return Vec::new();
        };
        let mut b = PathBuilder::new(grid, robot);
        b.segment_to(e.shortest.to);
        return vec![finish(b, Vec::new(), e.shortest.goal_line.unwrap_or(0))];
    }
    let Some(entry) = graph.edge(NodeId::Robot, NodeId::Group(gs[0])) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(1 << n);
    'assign: for k in 0..(1usize << n) {
        let dirs: Vec<Direction> =
            (0..n).map(|m| if (k >> m) & 1 == 0 { Direction::Cw } else { Direction::Ccw }).collect();
        let mut b = PathBuilder::new(grid, robot);
        let ring0 = groups[gs[0]].planning_boundary();
        let mut pos = slide_entry(grid, robot, ring0, entry.shortest.to_pos.unwrap(), dirs[0]);
        b.segment_to(ring0[pos]);
        for m in 0..n {
            let ring = groups[gs[m]].planning_boundary();
            if m + 1 < n {
                let Some(cs) = graph.edge(NodeId::Group(gs[m]), NodeId::Group(gs[m + 1])) else {
                    continue 'assign;
                };
                let s = cs.for_directions(dirs[m], dirs[m + 1]);
                b.arc(ring, pos, s.from_pos.unwrap(), dirs[m]);
                b.segment_to(s.to);
                pos = s.to_pos.unwrap();
                continue;
            }
            let goal_line = if let Some((q, g, lid)) = scan_exit(grid, ring, pos, dirs[m], lines) {
                b.arc(ring, pos, q, dirs[m]);
                b.segment_to(g);
                lid
            } else {
                let Some(ge) = graph.edge(NodeId::Group(gs[m]), NodeId::Goal) else {
                    continue 'assign;
                };
                b.arc(ring, pos, ge.shortest.from_pos.unwrap(), dirs[m]);
                b.segment_to(ge.shortest.to);
                ge.shortest.goal_line.unwrap_or(0)
            };
            let seq = gs.iter().copied().zip(dirs.iter().copied()).collect();
            out.push(finish(b, seq, goal_line));
            continue 'assign;
        }
    }
    out
}

/// Replaces the waypoints around every junction with a collision-free
/// chord found by two alternating cursors bounded by the neighbouring
/// junctions.
pub fn shorten_at_junction(t: &CandidateTrajectory, grid: &OccupancyGrid) -> CandidateTrajectory {
    let mut cells = t.cells.clone();
    let mut kinds = t.kinds.clone();
    let mut i = 1;
    while i + 1 < cells.len() {
        if kinds[i] != WaypointKind::Key {
            i += 1;
            continue;
        }
        let lo = (0..i).rev().find(|&k| kinds[k] == WaypointKind::Key).unwrap_or(0);
        let hi = (i + 1..cells.len()).find(|&k| kinds[k] == WaypointKind::Key).unwrap_or(cells.len() - 1);
        let (mut b, mut f) = (i, i);
        loop {
            let mut moved = false;
            if b > lo && segment_free(grid, cells[b - 1], cells[f]) {
                b -= 1;
                moved = true;
            }
            if f < hi && segment_free(grid, cells[b], cells[f + 1]) {
                f += 1;
                moved = true;
            }
            if !moved {
                break;
            }
        }
        if f > b + 1 {
            cells.drain(b + 1..f);
            kinds.drain(b + 1..f);
            kinds[b] = WaypointKind::Key;
            kinds[b + 1] = WaypointKind::Key;
            i = b + 2;
        } else {
            i += 1;
        }
    }
    let waypoints: Vec<Point> = cells.iter().map(|&c| grid.cell_center(c)).collect();
    let length = crate::geom::polyline_length(&waypoints);
    CandidateTrajectory { waypoints, cells, kinds, length, ..t.clone() }
}
