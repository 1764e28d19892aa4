//! Nearest-source propagation over the grid (brushfire with Euclidean
//! source tracking) and the obstacle clearance field built on it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::map::{GridIndex, OccupancyGrid};
use crate::Point;

pub const NONE: u32 = u32::MAX;

/// For every reached cell: the index of its nearest source and the squared
/// cell distance to it.
#[derive(Clone, Debug)]
pub struct Propagation {
    pub source: Vec<u32>,
    pub dist_sq: Vec<i64>,
}

/// Multi-source propagation restricted to cells where `passable` holds.
///
/// Each cell inherits the source of the neighbour that reached it with the
/// smallest Euclidean distance to that source; ties go to the lower source
/// index. Propagation stops at `max_dist_sq`.
pub fn propagate(
    grid: &OccupancyGrid,
    sources: &[GridIndex],
    passable: impl Fn(usize) -> bool,
    max_dist_sq: i64,
) -> Propagation {
    let n = grid.width() * grid.height();
    let mut source = vec![NONE; n];
    let mut dist_sq = vec![i64::MAX; n];
    let mut heap = BinaryHeap::new();
    for (si, &s) in sources.iter().enumerate() {
        if !grid.contains(s) {
            continue;
        }
        let li = grid.linear(s);
        if source[li] == NONE || (dist_sq[li] == 0 && (si as u32) < source[li]) {
            source[li] = si as u32;
            dist_sq[li] = 0;
            heap.push(Reverse((0i64, li as u32, si as u32)));
        }
    }
    while let Some(Reverse((d, li, si))) = heap.pop() {
        let li = li as usize;
        if source[li] != si || dist_sq[li] != d {
            continue;
        }
        let c = grid.index_of(li);
        let src = sources[si as usize];
        for nb in c.neighbors8() {
            if !grid.contains(nb) {
                continue;
            }
            let ni = grid.linear(nb);
            if !passable(ni) {
                continue;
            }
            let nd = nb.dist_sq(src);
            if nd > max_dist_sq {
                continue;
            }
            if nd < dist_sq[ni] || (nd == dist_sq[ni] && si < source[ni]) {
                dist_sq[ni] = nd;
                source[ni] = si;
                heap.push(Reverse((nd, ni as u32, si)));
            }
        }
    }
    Propagation { source, dist_sq }
}

/// Marks every cell whose clearance (centre distance to the nearest
/// occupied cell centre minus half a cell) is below `radius`.
pub fn inflate(grid: &OccupancyGrid, radius: f64) -> OccupancyGrid {
    let mut out = grid.clone();
    let r_cells = radius / grid.resolution() + 0.5;
    let r = r_cells.ceil() as i32;
    let limit = r_cells * r_cells;
    let mut disk = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if ((dx * dx + dy * dy) as f64) < limit {
                disk.push((dx, dy));
            }
        }
    }
    // Only occupied cells with a free 8-neighbour can be nearest to a free cell.
    for c in grid.iter_indices() {
        if !grid.is_occupied(c) || c.neighbors8().iter().all(|&n| !grid.contains(n) || grid.is_occupied(n)) {
            continue;
        }
        for &(dx, dy) in &disk {
            let n = c.offset(dx, dy);
            if grid.contains(n) {
                out.set(n, true);
            }
        }
    }
    out
}

/// Distance from each cell to the nearest occupied cell, truncated at a cap.
#[derive(Clone, Debug)]
pub struct ClearanceField {
    grid_width: usize,
    grid_height: usize,
    resolution: f64,
    origin: Point,
    cap: f64,
    nearest: Vec<u32>,
    obstacles: Vec<GridIndex>,
}

impl ClearanceField {
    /// Builds the field; cells farther than `cap` meters from every obstacle
    /// report `cap`.
    pub fn new(grid: &OccupancyGrid, cap: f64) -> Self {
        // Only obstacle cells with a free 4-neighbour can be nearest to a free cell.
        let obstacles: Vec<GridIndex> = grid
            .iter_indices()
            .filter(|&c| {
                grid.is_occupied(c)
                    && [(0, 1), (1, 0), (0, -1), (-1, 0)].iter().any(|&(dx, dy)| {
                        let n = c.offset(dx, dy);
                        grid.contains(n) && !grid.is_occupied(n)
                    })
            })
            .collect();
        let cap_cells = (cap / grid.resolution()).ceil() as i64 + 1;
        let prop = propagate(grid, &obstacles, |_| true, cap_cells * cap_cells);
        Self {
            grid_width: grid.width(),
            grid_height: grid.height(),
            resolution: grid.resolution(),
            origin: grid.origin(),
            cap,
            nearest: prop.source,
            obstacles,
        }
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn half_cell(&self) -> f64 {
        0.5 * self.resolution
    }

    fn cell_center(&self, c: GridIndex) -> Point {
        Point::new(
            self.origin.x + (c.x as f64 + 0.5) * self.resolution,
            self.origin.y + (c.y as f64 + 0.5) * self.resolution,
        )
    }

    /// Nearest obstacle cell centre for the cell containing `p`, if any lies
    /// within the cap. Points outside the map report none.
    pub fn nearest_obstacle(&self, p: Point) -> Option<Point> {
        let cx = ((p.x - self.origin.x) / self.resolution).floor();
        let cy = ((p.y - self.origin.y) / self.resolution).floor();
        if cx < 0.0 || cy < 0.0 || cx >= self.grid_width as f64 || cy >= self.grid_height as f64 {
            return None;
        }
        let li = cy as usize * self.grid_width + cx as usize;
        let s = self.nearest[li];
        (s != NONE).then(|| self.cell_center(self.obstacles[s as usize]))
    }

    /// Distance from `p` to the nearest obstacle cell's centre minus half a
    /// cell, clamped to `[0, cap]`.
    pub fn clearance(&self, p: Point) -> f64 {
        match self.nearest_obstacle(p) {
            Some(o) => (p.distance(o) - 0.5 * self.resolution).clamp(0.0, self.cap),
            None => self.cap,
        }
    }
}
