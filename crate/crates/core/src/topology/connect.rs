//! Connections between robot, obstacle groups and goal lines.

use std::fmt;

use crate::goal_lines::GoalLine;
use crate::grid::{segment_free, GridIndex, ObstacleGroup, OccupancyGrid};

use super::voronoi::VoronoiGraph;

/// Graph node: the robot, an obstacle group, or the (single) goal node
/// standing for all goal lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Robot,
    Group(usize),
    Goal,
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Robot => write!(f, "robot"),
            NodeId::Group(i) => write!(f, "g{i}"),
            NodeId::Goal => write!(f, "goal"),
        }
    }
}

/// Detour direction around a group; clockwise is `+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Cw,
    Ccw,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Cw => 1,
            Direction::Ccw => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Direction::Cw => Direction::Ccw,
            Direction::Ccw => Direction::Cw,
        }
    }
}

/// A directed grid segment with its attachment positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub from: GridIndex,
    pub to: GridIndex,
    /// Ring index of `from` on the source group's planning boundary.
    pub from_pos: Option<usize>,
    /// Ring index of `to` on the target group's planning boundary.
    pub to_pos: Option<usize>,
    /// Goal line reached by `to`, for goal connections.
    pub goal_line: Option<usize>,
    /// Shrinking failed and the segment fell back to the shortest one.
    pub degenerate: bool,
}

impl Segment {
    pub fn length_cells(&self) -> f64 {
        self.from.dist(self.to)
    }

    pub fn length(&self, resolution: f64) -> f64 {
        self.length_cells() * resolution
    }

    pub fn reversed(&self) -> Self {
        Self {
            from: self.to,
            to: self.from,
            from_pos: self.to_pos,
            to_pos: self.from_pos,
            goal_line: None,
            degenerate: self.degenerate,
        }
    }
}

/// Connection set between two nodes. Robot and goal edges only carry
/// `shortest`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionSet {
    pub from: NodeId,
    pub to: NodeId,
    pub shortest: Segment,
    pub cw_cw: Option<Segment>,
    pub ccw_ccw: Option<Segment>,
    pub cw_ccw: Option<Segment>,
    pub ccw_cw: Option<Segment>,
}

impl ConnectionSet {
    pub fn single(from: NodeId, to: NodeId, shortest: Segment) -> Self {
        Self { from, to, shortest, cw_cw: None, ccw_ccw: None, cw_ccw: None, ccw_cw: None }
    }

    /// Segment to use when leaving `from` in direction `a` and going around
    /// `to` in direction `b`. Falls back to `shortest`.
    pub fn for_directions(&self, a: Direction, b: Direction) -> &Segment {
        let s = match (a, b) {
            (Direction::Cw, Direction::Cw) => &self.cw_cw,
            (Direction::Ccw, Direction::Ccw) => &self.ccw_ccw,
            (Direction::Cw, Direction::Ccw) => &self.cw_ccw,
            (Direction::Ccw, Direction::Cw) => &self.ccw_cw,
        };
        s.as_ref().unwrap_or(&self.shortest)
    }

    /// `(kind, segment)` for every present segment, `shortest` first.
    pub fn segments(&self) -> Vec<(&'static str, &Segment)> {
        let mut out = vec![("shortest", &self.shortest)];
        for (k, s) in [
            ("cw_cw", &self.cw_cw),
            ("ccw_ccw", &self.ccw_ccw),
            ("cw_ccw", &self.cw_ccw),
            ("ccw_cw", &self.ccw_cw),
        ] {
            if let Some(s) = s {
                out.push((k, s));
            }
        }
        out
    }
}

/// Signed ring offset of `pos` relative to `base`, in `(-n/2, n/2]`.
pub fn ring_offset(pos: usize, base: usize, n: usize) -> i64 {
    let n = n as i64;
    let mut d = (pos as i64 - base as i64).rem_euclid(n);
    if d > n / 2 {
        d -= n;
    }
    d
}

fn ring_step(pos: usize, delta: i64, n: usize) -> usize {
    (pos as i64 + delta).rem_euclid(n as i64) as usize
}

/// Links `i -> j` through the Voronoi generator pairs. `None` when no ridge
/// sample links the two groups.
pub fn connect_groups(
    gi: &ObstacleGroup,
    gj: &ObstacleGroup,
    voronoi: &VoronoiGraph,
    grid: &OccupancyGrid,
) -> Option<ConnectionSet> {
    assert_ne!(gi.id, gj.id, "connect_groups needs two distinct groups");
    let pairs = voronoi.links_between(gi.id, gj.id);
    if pairs.is_empty() {
        return None;
    }
    // Tie-break on (lower id ring pos, higher id ring pos) so that i->j and
    // j->i select the same pair.
    let canon = |p: &(GridIndex, usize, GridIndex, usize)| {
        if gi.id < gj.id {
            (p.0.dist_sq(p.2), p.1, p.3)
        } else {
            (p.0.dist_sq(p.2), p.3, p.1)
        }
    };
    let best = *pairs.iter().min_by_key(|p| canon(p)).unwrap();
    let ri = gi.planning_boundary();
    let rj = gj.planning_boundary();
    let (ni, nj) = (ri.len(), rj.len());
    let (base_i, base_j) = (best.1, best.3);
    let shortest = Segment {
        from: best.0,
        to: best.2,
        from_pos: Some(base_i),
        to_pos: Some(base_j),
        goal_line: None,
        degenerate: false,
    };

    let key_i = |p: &(GridIndex, usize, GridIndex, usize)| (ring_offset(p.1, base_i, ni), p.1);
    let key_j = |p: &(GridIndex, usize, GridIndex, usize)| (ring_offset(p.3, base_j, nj), p.3);
    let plus_i = pairs.iter().min_by_key(|p| key_i(p)).unwrap().1;
    let minus_i = pairs.iter().max_by_key(|p| (ring_offset(p.1, base_i, ni), std::cmp::Reverse(p.1))).unwrap().1;
    let plus_j = pairs.iter().min_by_key(|p| key_j(p)).unwrap().3;
    let minus_j = pairs.iter().max_by_key(|p| (ring_offset(p.3, base_j, nj), std::cmp::Reverse(p.3))).unwrap().3;

    let shrink = |si: usize, sj: usize| shrink_segment(ri, rj, si, sj, base_i, base_j, grid, &shortest);
    Some(ConnectionSet {
        from: NodeId::Group(gi.id),
        to: NodeId::Group(gj.id),
        shortest,
        cw_cw: Some(shrink(plus_i, minus_j)),
        ccw_ccw: Some(shrink(minus_i, plus_j)),
        cw_ccw: Some(shrink(plus_i, plus_j)),
        ccw_cw: Some(shrink(minus_i, minus_j)),
    })
}

/// Walks the endpoints alternately (i side first) one ring cell toward the
/// shortest attachments until the chord is collision-free.
#[allow(clippy::too_many_arguments)]
pub fn shrink_segment(
    ri: &[GridIndex],
    rj: &[GridIndex],
    start_i: usize,
    start_j: usize,
    base_i: usize,
    base_j: usize,
    grid: &OccupancyGrid,
    fallback: &Segment,
) -> Segment {
    let (ni, nj) = (ri.len(), rj.len());
    let usable = |c: GridIndex| grid.contains(c) && !grid.is_occupied(c);
    let (mut pi, mut pj) = (start_i, start_j);
    let mut turn_i = true;
    loop {
        if usable(ri[pi]) && usable(rj[pj]) && segment_free(grid, ri[pi], rj[pj]) {
            return Segment {
                from: ri[pi],
                to: rj[pj],
                from_pos: Some(pi),
                to_pos: Some(pj),
                goal_line: None,
                degenerate: false,
            };
        }
        let di = ring_offset(pi, base_i, ni);
        let dj = ring_offset(pj, base_j, nj);
        if di == 0 && dj == 0 {
            return Segment { degenerate: true, ..*fallback };
        }
        let step_i = if turn_i { di != 0 } else { dj == 0 };
        if step_i {
            pi = ring_step(pi, -di.signum(), ni);
        } else {
            pj = ring_step(pj, -dj.signum(), nj);
        }
        turn_i = !turn_i;
    }
}

/// Shortest collision-free segment from `robot` to the group's planning
/// boundary. Ties go to the lower ring index.
pub fn connect_robot(robot: GridIndex, group: &ObstacleGroup, grid: &OccupancyGrid) -> Option<Segment> {
    let ring = group.planning_boundary();
    let mut cand: Vec<(i64, usize)> = ring
        .iter()
        .enumerate()
        .filter(|(_, &c)| grid.contains(c) && !grid.is_occupied(c))
        .map(|(i, &c)| (robot.dist_sq(c), i))
        .collect();
    cand.sort_unstable();
    cand.dedup_by_key(|c| c.1);
    cand.into_iter().find(|&(_, i)| segment_free(grid, robot, ring[i])).map(|(_, i)| Segment {
        from: robot,
        to: ring[i],
        from_pos: None,
        to_pos: Some(i),
        goal_line: None,
        degenerate: false,
    })
}

/// Lower bound (in cells) on the distance from `c` to any cell of the line.
fn line_lower_bound(c: GridIndex, line: &GoalLine) -> f64 {
    let a = line.cells[0];
    let b = *line.cells.last().unwrap();
    let p = crate::Point::new(c.x as f64, c.y as f64);
    let pa = crate::Point::new(a.x as f64, a.y as f64);
    let pb = crate::Point::new(b.x as f64, b.y as f64);
    crate::geom::point_segment_distance(p, pa, pb)
}

/// Globally shortest collision-free segment from any of `sources` (with
/// their ring positions) to any goal-line cell. Ties go to the lower line
/// id, then lower source position, then lower cell index on the line.
pub fn connect_cells_to_goal(
    sources: &[(GridIndex, Option<usize>)],
    lines: &[GoalLine],
    grid: &OccupancyGrid,
) -> Option<Segment> {
    let mut order: Vec<(f64, usize)> = sources
        .iter()
        .enumerate()
        .filter(|(_, (c, _))| grid.contains(*c) && !grid.is_occupied(*c))
        .map(|(k, (c, _))| {
            let lb = lines.iter().map(|l| line_lower_bound(*c, l)).fold(f64::INFINITY, f64::min);
            (lb, k)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    // Incumbent key: (dist_sq, line id, source pos, cell index).
    let mut best: Option<((i64, usize, usize, usize), Segment)> = None;
    let mut targets: Vec<(i64, usize, usize)> = Vec::new();
    for (lb, k) in order {
        let (src, pos) = sources[k];
        if let Some((key, _)) = &best {
            // 1e-6 absorbs the float lower bound vs integer distance.
            if lb * lb > key.0 as f64 + 1e-6 {
                break;
            }
        }
        targets.clear();
        for l in lines {
            for (ci, &c) in l.cells.iter().enumerate() {
                let d = src.dist_sq(c);
                if best.as_ref().map_or(true, |(key, _)| d <= key.0) {
                    targets.push((d, l.id, ci));
                }
            }
        }
        targets.sort_unstable();
        let pos_key = pos.unwrap_or(k);
        for &(d, lid, ci) in &targets {
            let key = (d, lid, pos_key, ci);
            if best.as_ref().is_some_and(|(bk, _)| *bk <= key) {
                break;
            }
            let line = lines.iter().find(|l| l.id == lid).unwrap();
            let cell = line.cells[ci];
            if segment_free(grid, src, cell) {
                let seg = Segment {
                    from: src,
                    to: cell,
                    from_pos: pos,
                    to_pos: None,
                    goal_line: Some(lid),
                    degenerate: false,
                };
                best = Some((key, seg));
                break;
            }
        }
    }
    best.map(|(_, s)| s)
}

/// Shortest collision-free segment from the group's planning boundary to
/// any goal-line cell.
pub fn connect_goal(group: &ObstacleGroup, lines: &[GoalLine], grid: &OccupancyGrid) -> Option<Segment> {
    let sources: Vec<(GridIndex, Option<usize>)> =
        group.planning_boundary().iter().enumerate().map(|(i, &c)| (c, Some(i))).collect();
    connect_cells_to_goal(&sources, lines, grid)
}
