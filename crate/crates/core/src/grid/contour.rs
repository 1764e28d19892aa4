//! Moore-neighbour contour following.

use super::map::{GridIndex, NEIGHBORS8_CW};
use super::mask::CellMask;

fn dir_index(d: (i32, i32)) -> usize {
    NEIGHBORS8_CW
        .iter()
        .position(|&n| n == d)
        .expect("backtrack cell must be an 8-neighbour")
}

/// Traces the outer contour of the 8-connected region containing the
/// lexicographically smallest cell of `region`.
///
/// The ring starts at that cell and runs clockwise (y up). Consecutive
/// cells, including last-to-first, are 8-adjacent; a cell may repeat when
/// the region has one-cell-wide necks.
pub fn trace_outer(region: &CellMask) -> Vec<GridIndex> {
    let Some(start) = region.to_sorted_vec().first().copied() else {
        return Vec::new();
    };
    // The west neighbour of the smallest (x, y) cell is outside the region.
    let start_back = start.offset(-1, 0);
    let step = |cur: GridIndex, back: GridIndex| -> Option<(GridIndex, GridIndex)> {
        let k = dir_index((back.x - cur.x, back.y - cur.y));
        let mut prev = back;
        for s in 1..=8 {
            let (dx, dy) = NEIGHBORS8_CW[(k + s) % 8];
            let n = cur.offset(dx, dy);
            if region.contains(n) {
                return Some((n, prev));
            }
            prev = n;
        }
        None
    };
    let Some(first) = step(start, start_back) else {
        return vec![start];
    };
    let mut ring = vec![start];
    let (mut cur, mut back) = first;
    // Stop when the initial transition start -> first.0 repeats.
    let limit = 4 * region.len() + 8;
    for _ in 0..limit {
        let (next, nb) = step(cur, back).expect("traced cell has a region neighbour");
        if cur == start && next == first.0 {
            return ring;
        }
        ring.push(cur);
        cur = next;
        back = nb;
    }
    panic!("contour tracing did not terminate");
}

/// Twice the signed shoelace area of the polygon through the cell centres
/// (counterclockwise positive).
pub fn ring_area2(ring: &[GridIndex]) -> i64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            a.x as i64 * b.y as i64 - b.x as i64 * a.y as i64
        })
        .sum()
}
