//! Obstacle clustering and max-convex boundary extraction.

use std::collections::HashMap;

use super::bresenham;
use super::contour::trace_outer;
use super::map::{GridIndex, OccupancyGrid};
use super::mask::{bounding_box, CellMask};
use super::morph::{close_box, extents};
use crate::Point;

/// Minimum number of free 8-neighbours (in the closed layer) for a shared
/// boundary cell to qualify as a corner.
pub const CORNER_MIN_FREE: usize = 4;

/// A maximal 8-connected obstacle component with its boundary rings.
///
/// Rings are clockwise (y up) and may contain cells one step outside the
/// local map when the group touches the map border.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstacleGroup {
    pub id: usize,
    /// Sorted by `(x, y)`.
    pub obstacle_cells: Vec<GridIndex>,
    pub raw_boundary: Vec<GridIndex>,
    /// Sorted by `(x, y)`; empty until [`close_group`] runs.
    pub closed_obstacles: Vec<GridIndex>,
    pub closed_boundary: Vec<GridIndex>,
    pub corners: Vec<GridIndex>,
    pub convex_boundary: Vec<GridIndex>,
    obstacle_mask: CellMask,
    closed_mask: Option<CellMask>,
}

impl ObstacleGroup {
    fn from_cells(id: usize, cells: Vec<GridIndex>) -> Self {
        let obstacle_mask = CellMask::from_cells(&cells, 0);
        let raw_boundary = trace_outer(&obstacle_mask.dilate8());
        let mut obstacle_cells = cells;
        obstacle_cells.sort_unstable();
        Self {
            id,
            obstacle_cells,
            raw_boundary,
            closed_obstacles: Vec::new(),
            closed_boundary: Vec::new(),
            corners: Vec::new(),
            convex_boundary: Vec::new(),
            obstacle_mask,
            closed_mask: None,
        }
    }

    pub fn contains_obstacle(&self, c: GridIndex) -> bool {
        self.obstacle_mask.contains(c)
    }

    /// Occupancy of the group's closed layer `M_i'`, if computed.
    pub fn closed_layer(&self) -> Option<&CellMask> {
        self.closed_mask.as_ref()
    }

    pub fn bbox(&self) -> (GridIndex, GridIndex) {
        bounding_box(&self.obstacle_cells).expect("group has cells")
    }

    /// Mean of the obstacle cell centres in world coordinates.
    pub fn centroid(&self, grid: &OccupancyGrid) -> Point {
        let n = self.obstacle_cells.len() as f64;
        let (sx, sy) = self
            .obstacle_cells
            .iter()
            .fold((0.0, 0.0), |(sx, sy), c| (sx + c.x as f64, sy + c.y as f64));
        grid.cell_center(GridIndex::new(0, 0))
            + Point::new(sx / n, sy / n) * grid.resolution()
    }

    /// Boundary used for planning: convex if computed, raw otherwise.
    pub fn planning_boundary(&self) -> &[GridIndex] {
        if self.convex_boundary.is_empty() {
            &self.raw_boundary
        } else {
            &self.convex_boundary
        }
    }
}

/// Clusters occupied cells into maximal 8-connected groups.
///
/// Group ids follow the row-major order of each group's first cell.
pub fn cluster_groups(grid: &OccupancyGrid) -> Vec<ObstacleGroup> {
    let mut label = vec![u32::MAX; grid.width() * grid.height()];
    let mut groups = Vec::new();
    let mut stack = Vec::new();
    for start in grid.iter_indices() {
        let si = grid.linear(start);
        if !grid.cells()[si] || label[si] != u32::MAX {
            continue;
        }
        let id = groups.len();
        let mut cells = Vec::new();
        label[si] = id as u32;
        stack.push(start);
        while let Some(c) = stack.pop() {
            cells.push(c);
            for n in c.neighbors8() {
                if grid.is_occupied(n) {
                    let ni = grid.linear(n);
                    if label[ni] == u32::MAX {
                        label[ni] = id as u32;
                        stack.push(n);
                    }
                }
            }
        }
        groups.push(ObstacleGroup::from_cells(id, cells));
    }
    groups
}

/// Closes the group with a solid kernel spanning its x/y extents and traces
/// the closed boundary.
pub fn close_group(mut group: ObstacleGroup) -> ObstacleGroup {
    let (kx, ky) = extents(&group.obstacle_cells);
    let closed = if kx == 1 && ky == 1 {
        group.obstacle_mask.clone()
    } else {
        close_box(&group.obstacle_mask, kx, ky)
    };
    debug_assert!(group.obstacle_cells.iter().all(|&c| closed.contains(c)));
    group.closed_obstacles = closed.to_sorted_vec();
    group.closed_boundary = trace_outer(&closed.dilate8());
    group.closed_mask = Some(closed);
    group
}

/// Cells on both the raw and the closed ring with at least
/// [`CORNER_MIN_FREE`] free neighbours in the closed layer, in raw ring order.
pub fn corner_set(group: &ObstacleGroup) -> Vec<GridIndex> {
    let Some(layer) = group.closed_mask.as_ref() else {
        return Vec::new();
    };
    let closed_ring = CellMask::from_cells(&group.closed_boundary, 0);
    let mut seen = std::collections::HashSet::new();
    group
        .raw_boundary
        .iter()
        .copied()
        .filter(|&c| closed_ring.contains(c))
        .filter(|&c| c.neighbors8().iter().filter(|&&n| !layer.contains(n)).count() >= CORNER_MIN_FREE)
        .filter(|&c| seen.insert(c))
        .collect()
}

/// First-occurrence position of each cell of a ring.
fn ring_positions(ring: &[GridIndex]) -> HashMap<GridIndex, usize> {
    let mut pos = HashMap::with_capacity(ring.len());
    for (i, &c) in ring.iter().enumerate() {
        pos.entry(c).or_insert(i);
    }
    pos
}

/// Ring cells from position `from` (inclusive) forward to `to` (exclusive),
/// wrapping; a full loop when `from == to`.
fn ring_segment(ring: &[GridIndex], from: usize, to: usize) -> impl Iterator<Item = GridIndex> + '_ {
    let n = ring.len();
    let len = if to > from { to - from } else { to + n - from };
    (0..len).map(move |k| ring[(from + k) % n])
}

/// Owner lookups shared by the max-convex construction and its consumers.
pub struct GroupIndex {
    /// Group id of each occupied cell (grid-linear), `u32::MAX` if free.
    obstacle_owner: Vec<u32>,
    /// Groups whose raw ring passes through each cell.
    raw_owners: HashMap<GridIndex, Vec<usize>>,
}

impl GroupIndex {
    pub fn new(groups: &[ObstacleGroup], grid: &OccupancyGrid) -> Self {
        let mut obstacle_owner = vec![u32::MAX; grid.width() * grid.height()];
        let mut raw_owners: HashMap<GridIndex, Vec<usize>> = HashMap::new();
        for g in groups {
            for &c in &g.obstacle_cells {
                if grid.contains(c) {
                    obstacle_owner[grid.linear(c)] = g.id as u32;
                }
            }
            for &c in &g.raw_boundary {
                let owners = raw_owners.entry(c).or_default();
                if owners.last() != Some(&g.id) && !owners.contains(&g.id) {
                    owners.push(g.id);
                }
            }
        }
        Self { obstacle_owner, raw_owners }
    }

    pub fn obstacle_owner(&self, grid: &OccupancyGrid, c: GridIndex) -> Option<usize> {
        if !grid.contains(c) {
            return None;
        }
        let o = self.obstacle_owner[grid.linear(c)];
        (o != u32::MAX).then_some(o as usize)
    }

    /// `true` when `c` is an obstacle cell or raw-boundary cell of any group
    /// other than `own`.
    pub fn blocks_other(&self, grid: &OccupancyGrid, own: usize, c: GridIndex) -> bool {
        if self.obstacle_owner(grid, c).is_some_and(|o| o != own) {
            return true;
        }
        self.raw_owners.get(&c).is_some_and(|v| v.iter().any(|&g| g != own))
    }
}

/// Splices closed-boundary segments into each group's ring wherever the
/// chord between consecutive corners is clear of every other group.
///
/// A segment is taken from the closed ring only if (a) the Bresenham chord
/// between its corners avoids other groups' obstacle and raw-boundary cells
/// and (b) none of the segment's own cells is occupied in `grid`; otherwise
/// the raw segment is kept. Groups with fewer than two corners keep their
/// raw ring.
pub fn max_convex_boundary(groups: &mut [ObstacleGroup], grid: &OccupancyGrid) {
    let index = GroupIndex::new(groups, grid);
    for g in groups.iter_mut() {
        g.convex_boundary = convexify_one(g, grid, &index);
    }
}

fn convexify_one(g: &ObstacleGroup, grid: &OccupancyGrid, index: &GroupIndex) -> Vec<GridIndex> {
    if g.corners.len() < 2 || g.closed_boundary.is_empty() {
        return g.raw_boundary.clone();
    }
    let raw_pos = ring_positions(&g.raw_boundary);
    let closed_pos = ring_positions(&g.closed_boundary);
    let corner_closed: Vec<usize> = g.corners.iter().map(|c| closed_pos[c]).collect();
    // Corners must appear in the same cyclic order on both rings.
    let descents = (0..corner_closed.len())
        .filter(|&j| corner_closed[(j + 1) % corner_closed.len()] <= corner_closed[j])
        .count();
    if descents > 1 {
        log::debug!("group {}: corner order differs between rings, keeping raw ring", g.id);
        return g.raw_boundary.clone();
    }
    let m = g.corners.len();
    let mut out = Vec::with_capacity(g.raw_boundary.len());
    for j in 0..m {
        let a = g.corners[j];
        let b = g.corners[(j + 1) % m];
        let closed_seg: Vec<GridIndex> =
            ring_segment(&g.closed_boundary, closed_pos[&a], closed_pos[&b]).collect();
        let chord_clear = bresenham::segment_avoids(a, b, |c| index.blocks_other(grid, g.id, c));
        let cells_clear = closed_seg
            .iter()
            .all(|&c| !grid.is_occupied(c) && index.obstacle_owner(grid, c).is_none());
        if chord_clear && cells_clear {
            out.extend(closed_seg);
        } else {
            out.extend(ring_segment(&g.raw_boundary, raw_pos[&a], raw_pos[&b]));
        }
    }
    out
}

/// Runs the full grid stage: cluster, close, corners and (optionally)
/// max-convex boundaries. With `convexify == false` the convex boundary
/// is a copy of the raw ring.
pub fn build_groups(grid: &OccupancyGrid, convexify: bool) -> Vec<ObstacleGroup> {
    let groups = cluster_groups(grid);
    if !convexify {
        return groups
            .into_iter()
            .map(|mut g| {
                g.convex_boundary = g.raw_boundary.clone();
                g
            })
            .collect();
    }
    let mut groups: Vec<_> = groups
        .into_iter()
        .map(|g| {
            let mut g = close_group(g);
            g.corners = corner_set(&g);
            g
        })
        .collect();
    max_convex_boundary(&mut groups, grid);
    groups
}
