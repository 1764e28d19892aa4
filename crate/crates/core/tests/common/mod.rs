//! Random grid fixtures and brute-force oracles for the grid stage.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use ganav_core::grid::{bresenham, GridIndex, ObstacleGroup, OccupancyGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CellSet = BTreeSet<GridIndex>;

pub fn g(x: i32, y: i32) -> GridIndex {
    GridIndex::new(x, y)
}

pub fn grid_with(w: usize, h: usize, cells: &[GridIndex]) -> OccupancyGrid {
    let mut grid = OccupancyGrid::empty(w, h, 0.05);
    for &c in cells {
        grid.set(c, true);
    }
    grid
}

/// Random grid of at most 32x32 cells with bars, L shapes, blocks and
/// random walks, so groups have concavities and close neighbours.
pub fn random_grid(seed: u64) -> OccupancyGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.gen_range(12..=32);
    let h = rng.gen_range(12..=32);
    let mut grid = OccupancyGrid::empty(w, h, 0.05);
    let objects = rng.gen_range(2..=7);
    for _ in 0..objects {
        let x0 = rng.gen_range(0..w as i32);
        let y0 = rng.gen_range(0..h as i32);
        let mut put = |c: GridIndex| {
            if grid.contains(c) {
                grid.set(c, true);
            }
        };
        match rng.gen_range(0..4) {
            0 => {
                let (bw, bh) = (rng.gen_range(1..=5), rng.gen_range(1..=4));
                for dx in 0..bw {
                    for dy in 0..bh {
                        put(GridIndex::new(x0 + dx, y0 + dy));
                    }
                }
            }
            1 => {
                let (a, b) = (rng.gen_range(2..=7), rng.gen_range(2..=7));
                let (sx, sy) = (if rng.gen_bool(0.5) { 1 } else { -1 }, if rng.gen_bool(0.5) { 1 } else { -1 });
                for k in 0..a {
                    put(GridIndex::new(x0 + sx * k, y0));
                }
                for k in 0..b {
                    put(GridIndex::new(x0, y0 + sy * k));
                }
            }
            2 => {
                // T or U shape.
                let a = rng.gen_range(3..=7);
                for k in 0..a {
                    put(GridIndex::new(x0 + k, y0));
                }
                if rng.gen_bool(0.5) {
                    for k in 1..a {
                        put(GridIndex::new(x0 + a / 2, y0 - k));
                    }
                } else {
                    for k in 1..a {
                        put(GridIndex::new(x0, y0 + k));
                        put(GridIndex::new(x0 + a - 1, y0 + k));
                    }
                }
            }
            _ => {
                let mut c = GridIndex::new(x0, y0);
                for _ in 0..rng.gen_range(3..=12) {
                    put(c);
                    c = c.offset(rng.gen_range(-1..=1), rng.gen_range(-1..=1));
                }
            }
        }
    }
    grid
}

/// Connected components by pairwise Chebyshev adjacency.
pub fn oracle_components(grid: &OccupancyGrid) -> Vec<CellSet> {
    let occ: Vec<GridIndex> = grid.iter_indices().filter(|&c| grid.is_occupied(c)).collect();
    let mut label: Vec<Option<usize>> = vec![None; occ.len()];
    let mut out = Vec::new();
    for s in 0..occ.len() {
        if label[s].is_some() {
            continue;
        }
        let id = out.len();
        let mut set = CellSet::new();
        let mut queue = VecDeque::from([s]);
        label[s] = Some(id);
        while let Some(i) = queue.pop_front() {
            set.insert(occ[i]);
            for j in 0..occ.len() {
                if label[j].is_none() && occ[i].chebyshev(occ[j]) == 1 {
                    label[j] = Some(id);
                    queue.push_back(j);
                }
            }
        }
        out.push(set);
    }
    out
}

/// Closing by a solid `kx x ky` rectangle, straight from the set
/// definitions of dilation and erosion.
pub fn oracle_close(cells: &CellSet, kx: i32, ky: i32) -> CellSet {
    let mut dil = CellSet::new();
    for c in cells {
        for dx in 0..kx {
            for dy in 0..ky {
                dil.insert(c.offset(dx, dy));
            }
        }
    }
    let (lo, hi) = bbox(&dil);
    let mut out = CellSet::new();
    for x in lo.x - kx..=hi.x {
        for y in lo.y - ky..=hi.y {
            let c = GridIndex::new(x, y);
            if (0..kx).all(|dx| (0..ky).all(|dy| dil.contains(&c.offset(dx, dy)))) {
                out.insert(c);
            }
        }
    }
    out
}

pub fn bbox(cells: &CellSet) -> (GridIndex, GridIndex) {
    let lo = GridIndex::new(cells.iter().map(|c| c.x).min().unwrap(), cells.iter().map(|c| c.y).min().unwrap());
    let hi = GridIndex::new(cells.iter().map(|c| c.x).max().unwrap(), cells.iter().map(|c| c.y).max().unwrap());
    (lo, hi)
}

pub fn kernel(cells: &CellSet) -> (i32, i32) {
    let (lo, hi) = bbox(cells);
    (hi.x - lo.x + 1, hi.y - lo.y + 1)
}

/// Cells of the 8-dilation of `cells` that touch (4-adjacency) the
/// unbounded component of its complement: the outer contour.
pub fn oracle_outer_boundary(cells: &CellSet) -> CellSet {
    let mut dil = CellSet::new();
    for c in cells {
        dil.insert(*c);
        dil.extend(c.neighbors8());
    }
    let (lo, hi) = bbox(&dil);
    let (lo, hi) = (lo.offset(-1, -1), hi.offset(1, 1));
    let inside = |c: GridIndex| c.x >= lo.x && c.y >= lo.y && c.x <= hi.x && c.y <= hi.y;
    let mut outside = CellSet::new();
    let mut queue = VecDeque::from([lo]);
    outside.insert(lo);
    while let Some(c) = queue.pop_front() {
        for (dx, dy) in [(0, 1), (1, 0), (0, -1), (-1, 0)] {
            let n = c.offset(dx, dy);
            if inside(n) && !dil.contains(&n) && outside.insert(n) {
                queue.push_back(n);
            }
        }
    }
    dil.into_iter()
        .filter(|c| [(0, 1), (1, 0), (0, -1), (-1, 0)].iter().any(|&(dx, dy)| outside.contains(&c.offset(dx, dy))))
        .collect()
}

pub fn is_ring(ring: &[GridIndex]) -> bool {
    let n = ring.len();
    n == 1 || (0..n).all(|i| ring[i].chebyshev(ring[(i + 1) % n]) == 1)
}

/// Shared ring cells with at least 4 free neighbours in the closed layer,
/// in raw ring order without repeats.
pub fn oracle_corners(raw: &[GridIndex], closed_ring: &[GridIndex], closed: &CellSet) -> Vec<GridIndex> {
    let mut out: Vec<GridIndex> = Vec::new();
    for &c in raw {
        if !closed_ring.contains(&c) || out.contains(&c) {
            continue;
        }
        let free = c.neighbors8().iter().filter(|n| !closed.contains(n)).count();
        if free >= 4 {
            out.push(c);
        }
    }
    out
}

fn ring_slice(ring: &[GridIndex], a: GridIndex, b: GridIndex) -> Vec<GridIndex> {
    let n = ring.len();
    let i = ring.iter().position(|&c| c == a).unwrap();
    let j = ring.iter().position(|&c| c == b).unwrap();
    let len = if j > i { j - i } else { j + n - i };
    (0..len).map(|k| ring[(i + k) % n]).collect()
}

/// Splices closed-ring segments between consecutive corners when the
/// corner chord avoids every other group's cells and raw ring and the
/// segment itself is free; raw segments otherwise.
pub fn oracle_convex(gi: &ObstacleGroup, groups: &[ObstacleGroup], grid: &OccupancyGrid) -> Vec<GridIndex> {
    let corners = &gi.corners;
    if corners.len() < 2 || gi.closed_boundary.is_empty() {
        return gi.raw_boundary.clone();
    }
    let closed_pos: Vec<usize> =
        corners.iter().map(|c| gi.closed_boundary.iter().position(|x| x == c).unwrap()).collect();
    let descents = (0..closed_pos.len()).filter(|&j| closed_pos[(j + 1) % closed_pos.len()] <= closed_pos[j]).count();
    if descents > 1 {
        return gi.raw_boundary.clone();
    }
    let other_blocks = |c: GridIndex| {
        groups.iter().any(|o| o.id != gi.id && (o.obstacle_cells.contains(&c) || o.raw_boundary.contains(&c)))
    };
    let occupied = |c: GridIndex| grid.contains(c) && grid.is_occupied(c);
    let mut out = Vec::new();
    for j in 0..corners.len() {
        let (a, b) = (corners[j], corners[(j + 1) % corners.len()]);
        let seg = ring_slice(&gi.closed_boundary, a, b);
        let chord_clear = !bresenham(a, b).into_iter().any(other_blocks);
        if chord_clear && !seg.iter().any(|&c| occupied(c)) {
            out.extend(seg);
        } else {
            out.extend(ring_slice(&gi.raw_boundary, a, b));
        }
    }
    out
}

/// Number of convex-boundary cells that are occupied in the grid.
pub fn convex_violations(groups: &[ObstacleGroup], grid: &OccupancyGrid) -> usize {
    groups
        .iter()
        .flat_map(|gr| gr.convex_boundary.iter())
        .filter(|&&c| grid.contains(c) && grid.is_occupied(c))
        .count()
}

/// Result of checking one grid against all grid-stage oracles.
#[derive(Debug, Default)]
pub struct GridReport {
    pub mismatches: Vec<String>,
    pub convex_violations: usize,
    pub groups: usize,
    /// Groups whose convex boundary differs from the raw ring.
    pub bridged: usize,
}

pub fn check_grid_stage(grid: &OccupancyGrid) -> GridReport {
    use ganav_core::grid::{build_groups, cluster_groups, close_group, corner_set};
    let mut rep = GridReport::default();
    let mut miss = |m: String| rep.mismatches.push(m);

    let groups = cluster_groups(grid);
    let got: BTreeSet<CellSet> = groups.iter().map(|gr| gr.obstacle_cells.iter().copied().collect()).collect();
    let want: BTreeSet<CellSet> = oracle_components(grid).into_iter().collect();
    if got != want {
        miss(format!("components differ: {} vs {}", got.len(), want.len()));
    }
    for gr in &groups {
        let cells: CellSet = gr.obstacle_cells.iter().copied().collect();
        let raw: CellSet = gr.raw_boundary.iter().copied().collect();
        if raw != oracle_outer_boundary(&cells) || !is_ring(&gr.raw_boundary) {
            miss(format!("group {}: raw boundary", gr.id));
        }
        let closed = close_group(gr.clone());
        let (kx, ky) = kernel(&cells);
        let want_closed = oracle_close(&cells, kx, ky);
        let got_closed: CellSet = closed.closed_obstacles.iter().copied().collect();
        if got_closed != want_closed {
            miss(format!("group {}: closing", gr.id));
        }
        if !cells.is_subset(&got_closed) {
            miss(format!("group {}: closing not extensive", gr.id));
        }
        let closed_ring: CellSet = closed.closed_boundary.iter().copied().collect();
        if closed_ring != oracle_outer_boundary(&want_closed) || !is_ring(&closed.closed_boundary) {
            miss(format!("group {}: closed boundary", gr.id));
        }
        if corner_set(&closed) != oracle_corners(&gr.raw_boundary, &closed.closed_boundary, &want_closed) {
            miss(format!("group {}: corners", gr.id));
        }
    }
    let full = build_groups(grid, true);
    for gr in &full {
        if gr.convex_boundary != oracle_convex(gr, &full, grid) {
            miss(format!("group {}: convex boundary", gr.id));
        }
        if !is_ring(&gr.convex_boundary) {
            miss(format!("group {}: convex boundary is not a ring", gr.id));
        }
    }
    rep.convex_violations = convex_violations(&full, grid);
    rep.groups = full.len();
    rep.bridged = full.iter().filter(|gr| gr.convex_boundary != gr.raw_boundary).count();
    rep
}
