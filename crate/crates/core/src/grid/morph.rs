//! Binary morphology with solid rectangular kernels.
//!
//! The kernel `[0, kx) x [0, ky)` is anchored at its lower-left cell; the
//! closing `(A + K) - K` does not depend on the anchor.

use super::map::GridIndex;
use super::mask::CellMask;

/// `{a + k : a in A, k in K}`.
pub fn dilate_box(a: &CellMask, kx: usize, ky: usize) -> CellMask {
    assert!(kx >= 1 && ky >= 1);
    let (kx, ky) = (kx as i32, ky as i32);
    let lo = a.min();
    let hi = a.max().offset(kx - 1, ky - 1);
    let w = (hi.x - lo.x + 1).max(0) as usize;
    let h = (hi.y - lo.y + 1).max(0) as usize;
    // Row pass: r(x, y) = exists bx in [0, kx): a(x - bx, y).
    let mut rows = vec![false; w * h];
    for y in 0..h {
        let mut run = 0i32;
        for x in 0..w {
            let c = lo.offset(x as i32, y as i32);
            if a.contains(c) {
                run = kx;
            }
            if run > 0 {
                rows[y * w + x] = true;
                run -= 1;
            }
        }
    }
    let mut out = CellMask::new(lo, hi);
    for x in 0..w {
        let mut run = 0i32;
        for y in 0..h {
            if rows[y * w + x] {
                run = ky;
            }
            if run > 0 {
                out.insert(lo.offset(x as i32, y as i32));
                run -= 1;
            }
        }
    }
    out
}

/// `{x : x + K subset of D}`.
pub fn erode_box(d: &CellMask, kx: usize, ky: usize) -> CellMask {
    assert!(kx >= 1 && ky >= 1);
    let (kx, ky) = (kx as i32, ky as i32);
    let lo = d.min();
    let hi = d.max();
    let w = (hi.x - lo.x + 1).max(0) as usize;
    let h = (hi.y - lo.y + 1).max(0) as usize;
    // Row pass: r(x, y) = all bx in [0, kx): d(x + bx, y). Scan right-to-left
    // counting consecutive set cells.
    let mut rows = vec![false; w * h];
    for y in 0..h {
        let mut streak = 0i32;
        for x in (0..w).rev() {
            if d.contains(lo.offset(x as i32, y as i32)) {
                streak += 1;
            } else {
                streak = 0;
            }
            rows[y * w + x] = streak >= kx;
        }
    }
    let mut out = CellMask::new(lo, hi);
    for x in 0..w {
        let mut streak = 0i32;
        for y in (0..h).rev() {
            if rows[y * w + x] {
                streak += 1;
            } else {
                streak = 0;
            }
            if streak >= ky {
                out.insert(lo.offset(x as i32, y as i32));
            }
        }
    }
    out
}

/// Morphological closing by the `kx x ky` solid rectangle.
pub fn close_box(a: &CellMask, kx: usize, ky: usize) -> CellMask {
    let closed = erode_box(&dilate_box(a, kx, ky), kx, ky);
    // Closing never leaves the bounding box of `a`; shrink the window back.
    let mut out = CellMask::new(a.min(), a.max());
    for c in closed.iter() {
        debug_assert!(c.x >= a.min().x && c.y >= a.min().y && c.x <= a.max().x && c.y <= a.max().y);
        if c.x <= a.max().x && c.y <= a.max().y && c.x >= a.min().x && c.y >= a.min().y {
            out.insert(c);
        }
    }
    out
}

/// Inclusive extent of a cell set along each axis, at least 1.
pub fn extents(cells: &[GridIndex]) -> (usize, usize) {
    match super::mask::bounding_box(cells) {
        Some((lo, hi)) => (((hi.x - lo.x + 1).max(1)) as usize, ((hi.y - lo.y + 1).max(1)) as usize),
        None => (1, 1),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn g(x: i32, y: i32) -> GridIndex {
        GridIndex::new(x, y)
    }

    /// Set-based dilate/erode straight from the definitions.
    fn oracle_close(cells: &BTreeSet<GridIndex>, kx: i32, ky: i32) -> BTreeSet<GridIndex> {
        let mut dil = BTreeSet::new();
        for c in cells {
            for bx in 0..kx {
                for by in 0..ky {
                    dil.insert(c.offset(bx, by));
                }
            }
        }
        let lo_x = dil.iter().map(|c| c.x).min().unwrap();
        let lo_y = dil.iter().map(|c| c.y).min().unwrap();
        let hi_x = dil.iter().map(|c| c.x).max().unwrap();
        let hi_y = dil.iter().map(|c| c.y).max().unwrap();
        let mut out = BTreeSet::new();
        for x in lo_x..=hi_x {
            for y in lo_y..=hi_y {
                if (0..kx).all(|bx| (0..ky).all(|by| dil.contains(&g(x + bx, y + by)))) {
                    out.insert(g(x, y));
                }
            }
        }
        out
    }

    fn check(cells: &[GridIndex]) -> Vec<GridIndex> {
        let (kx, ky) = extents(cells);
        let mask = CellMask::from_cells(cells, 0);
        let got = close_box(&mask, kx, ky).to_sorted_vec();
        let set: BTreeSet<_> = cells.iter().copied().collect();
        let want: Vec<_> = oracle_close(&set, kx as i32, ky as i32).into_iter().collect();
        assert_eq!(got, want);
        got
    }

    #[test]
    fn rectangle_is_closed() {
        let rect: Vec<_> = (0..3).flat_map(|x| (0..2).map(move |y| g(x, y))).collect();
        assert_eq!(check(&rect), rect);
    }

    #[test]
    fn u_shape_cavity_is_filled() {
        // 5x5 U open at the top: bottom row plus two side columns.
        let mut u: Vec<_> = (0..5).map(|x| g(x, 0)).collect();
        u.extend((1..5).map(|y| g(0, y)));
        u.extend((1..5).map(|y| g(4, y)));
        let closed = check(&u);
        let block: Vec<_> = (0..5).flat_map(|x| (0..5).map(move |y| g(x, y))).collect();
        assert_eq!(closed, block);
    }

    #[test]
    fn l_shape_notch_stays_open() {
        let mut l: Vec<_> = (0..5).map(|x| g(x, 0)).collect();
        l.extend((1..5).map(|y| g(0, y)));
        let mut l_sorted = l.clone();
        l_sorted.sort();
        assert_eq!(check(&l), l_sorted);
    }
}
