use super::map::{GridIndex, OccupancyGrid};

/// Integer line rasterization from `a` to `b`, both inclusive.
///
/// The cell set is computed from the lexicographically smaller endpoint, so
/// `bresenham(b, a)` is exactly the reverse of `bresenham(a, b)`.
pub fn bresenham(a: GridIndex, b: GridIndex) -> Vec<GridIndex> {
    let mut out = Vec::with_capacity(a.chebyshev(b) as usize + 1);
    if a <= b {
        walk(a, b, |c| {
            out.push(c);
            true
        });
    } else {
        walk(b, a, |c| {
            out.push(c);
            true
        });
        out.reverse();
    }
    out
}

/// Visits the rasterized cells until `visit` returns `false`.
/// Returns `true` when the whole segment was visited.
pub fn walk(a: GridIndex, b: GridIndex, mut visit: impl FnMut(GridIndex) -> bool) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let dx = (hi.x - lo.x).abs();
    let dy = -(hi.y - lo.y).abs();
    let sx = if lo.x < hi.x { 1 } else { -1 };
    let sy = if lo.y < hi.y { 1 } else { -1 };
    let mut err = dx + dy;
    let (mut x, mut y) = (lo.x, lo.y);
    loop {
        if !visit(GridIndex::new(x, y)) {
            return false;
        }
        if x == hi.x && y == hi.y {
            return true;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// `true` when no rasterized cell of `a`-`b` is occupied in `grid`.
pub fn segment_free(grid: &OccupancyGrid, a: GridIndex, b: GridIndex) -> bool {
    walk(a, b, |c| !grid.is_occupied(c))
}

/// `true` when no rasterized cell satisfies `blocked`.
pub fn segment_avoids(a: GridIndex, b: GridIndex, mut blocked: impl FnMut(GridIndex) -> bool) -> bool {
    walk(a, b, |c| !blocked(c))
}
