mod common;

use std::collections::BTreeSet;

use common::*;
use ganav_core::grid::contour::ring_area2;
use ganav_core::grid::{bresenham, build_groups, cluster_groups, close_group, corner_set, GridIndex};
use proptest::prelude::*;

#[test]
fn random_grids_match_oracles() {
    let (mut violations, mut bridged) = (0, 0);
    for seed in 0..60 {
        let grid = random_grid(seed);
        let rep = check_grid_stage(&grid);
        assert!(rep.mismatches.is_empty(), "seed {seed}: {:?}\n{}", rep.mismatches, grid.to_fixture());
        violations += rep.convex_violations;
        bridged += rep.bridged;
    }
    assert_eq!(violations, 0);
    assert!(bridged >= 10, "only {bridged} groups were convexified");
}

#[test]
fn clustering_examples() {
    assert!(cluster_groups(&grid_with(10, 10, &[])).is_empty());

    let groups = cluster_groups(&grid_with(10, 10, &[g(5, 5)]));
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].obstacle_cells, vec![g(5, 5)]);
    let ring: BTreeSet<_> = groups[0].raw_boundary.iter().copied().collect();
    let want: BTreeSet<_> = g(5, 5).neighbors8().into_iter().collect();
    assert_eq!(groups[0].raw_boundary.len(), 8);
    assert_eq!(ring, want);
    assert!(is_ring(&groups[0].raw_boundary));

    let groups = cluster_groups(&grid_with(10, 10, &[g(3, 3), g(4, 4)]));
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].obstacle_cells.len(), 2);
}

fn l_shape() -> Vec<GridIndex> {
    let mut cells: Vec<_> = (0..5).map(|x| g(x + 2, 2)).collect();
    cells.extend((1..5).map(|y| g(2, y + 2)));
    cells
}

/// 5x5 U opening upward: bottom row plus both side columns.
fn u_shape() -> Vec<GridIndex> {
    let mut cells: Vec<_> = (0..5).map(|x| g(x + 2, 2)).collect();
    for y in 3..7 {
        cells.push(g(2, y));
        cells.push(g(6, y));
    }
    cells
}

#[test]
fn closing_examples() {
    let single = close_group(cluster_groups(&grid_with(10, 10, &[g(4, 4)])).remove(0));
    assert_eq!(single.closed_obstacles, vec![g(4, 4)]);

    // The bounding-box kernel cannot fill a wedge that opens towards the
    // box edge, so an L closes to itself; a U is filled.
    let l = close_group(cluster_groups(&grid_with(12, 12, &l_shape())).remove(0));
    let mut cells = l_shape();
    cells.sort();
    assert_eq!(l.closed_obstacles, cells);
    let u = close_group(cluster_groups(&grid_with(12, 12, &u_shape())).remove(0));
    let block: Vec<_> = (2..7).flat_map(|x| (2..7).map(move |y| g(x, y))).collect();
    assert_eq!(u.closed_obstacles, block);

    let rect: Vec<_> = (3..6).flat_map(|x| (3..5).map(move |y| g(x, y))).collect();
    let r = close_group(cluster_groups(&grid_with(10, 10, &rect)).remove(0));
    assert_eq!(r.closed_obstacles, rect);
}

#[test]
fn corner_examples() {
    let rect: Vec<_> = (3..6).flat_map(|x| (3..5).map(move |y| g(x, y))).collect();
    let r = close_group(cluster_groups(&grid_with(10, 10, &rect)).remove(0));
    let corners: BTreeSet<_> = corner_set(&r).into_iter().collect();
    assert!([g(2, 2), g(2, 5), g(6, 2), g(6, 5)].iter().all(|c| corners.contains(c)));
    // Straight edge cells see 5 free neighbours and also qualify.
    let closed: CellSet = rect.iter().copied().collect();
    assert_eq!(corner_set(&r), oracle_corners(&r.raw_boundary, &r.closed_boundary, &closed));

    let s = close_group(cluster_groups(&grid_with(10, 10, &[g(4, 4)])).remove(0));
    let corners: BTreeSet<_> = corner_set(&s).into_iter().collect();
    assert!([g(3, 3), g(3, 5), g(5, 3), g(5, 5)].iter().all(|c| corners.contains(c)));

    // A 7-wide U: the raw ring dips into the notch, the closed ring does not.
    let mut wide: Vec<_> = (2..9).map(|x| g(x, 2)).collect();
    for y in 3..7 {
        wide.push(g(2, y));
        wide.push(g(8, y));
    }
    let u = close_group(cluster_groups(&grid_with(12, 12, &wide)).remove(0));
    let in_notch = |c: &GridIndex| c.x > 3 && c.x < 7 && c.y > 2 && c.y < 7;
    assert!(u.raw_boundary.iter().any(in_notch));
    let corners = corner_set(&u);
    for c in &corners {
        assert!(u.closed_boundary.contains(c));
        assert!(!in_notch(c));
    }
    assert!(corners.len() >= 2);
}

#[test]
fn isolated_u_is_bridged() {
    let grid = grid_with(14, 14, &u_shape());
    let groups = build_groups(&grid, true);
    assert_eq!(groups[0].convex_boundary, groups[0].closed_boundary);
    assert!(ring_area2(&groups[0].convex_boundary).abs() > ring_area2(&groups[0].raw_boundary).abs());
}

#[test]
fn isolated_rectangle_is_unchanged() {
    let rect: Vec<_> = (3..7).flat_map(|x| (4..6).map(move |y| g(x, y))).collect();
    let groups = build_groups(&grid_with(12, 12, &rect), true);
    let raw: BTreeSet<_> = groups[0].raw_boundary.iter().collect();
    assert_eq!(groups[0].convex_boundary.iter().collect::<BTreeSet<_>>(), raw);
    assert_eq!(groups[0].closed_boundary, groups[0].raw_boundary);
}

#[test]
fn interlocking_groups_fall_back_to_raw_segments() {
    // A wide U whose notch holds a second group.
    let mut cells: Vec<_> = (0..11).map(|x| g(x + 2, 2)).collect();
    for y in 3..11 {
        cells.push(g(2, y));
        cells.push(g(12, y));
    }
    cells.extend([g(7, 9), g(8, 9), g(7, 10), g(8, 10)]);
    let grid = grid_with(16, 16, &cells);
    let groups = build_groups(&grid, true);
    assert_eq!(groups.len(), 2);
    let l = groups.iter().find(|gr| gr.obstacle_cells.len() > 4).unwrap();
    assert_ne!(l.convex_boundary, l.closed_boundary);
    assert_eq!(l.convex_boundary, oracle_convex(l, &groups, &grid));
    assert_eq!(convex_violations(&groups, &grid), 0);
    let other = groups.iter().find(|gr| gr.id != l.id).unwrap();
    for c in &l.convex_boundary {
        assert!(!other.obstacle_cells.contains(c));
    }
}

/// Midpoint-line reference for the octant `0 <= dy <= dx`.
fn midpoint_line(dx: i32, dy: i32) -> Vec<GridIndex> {
    let mut out = Vec::new();
    let mut y = 0;
    let mut d = 2 * dy - dx;
    for x in 0..=dx {
        out.push(g(x, y));
        if d > 0 {
            y += 1;
            d -= 2 * dx;
        }
        d += 2 * dy;
    }
    out
}

#[test]
fn bresenham_examples() {
    assert_eq!(bresenham(g(0, 0), g(0, 0)), vec![g(0, 0)]);
    assert_eq!(bresenham(g(0, 0), g(3, 0)), vec![g(0, 0), g(1, 0), g(2, 0), g(3, 0)]);
    let line = bresenham(g(0, 0), g(5, 2));
    assert_eq!(line.len(), 6);
    assert!(line.windows(2).all(|w| w[1].x == w[0].x + 1 && (w[1].y - w[0].y).abs() <= 1));
    assert_eq!(line, midpoint_line(5, 2));
}

fn arb_grid() -> impl Strategy<Value = ganav_core::grid::OccupancyGrid> {
    (6usize..=24, 6usize..=24, proptest::collection::vec(any::<bool>(), 24 * 24), 0u32..4)
        .prop_map(|(w, h, bits, sparsity)| {
            let mut grid = ganav_core::grid::OccupancyGrid::empty(w, h, 0.05);
            for (i, c) in grid.clone().iter_indices().enumerate() {
                // Thin the noise so that free space remains.
                if bits[i] && (i as u32 % (sparsity + 2) == 0) {
                    grid.set(c, true);
                }
            }
            grid
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_rings_and_safety(grid in arb_grid()) {
        let groups = build_groups(&grid, true);
        let total: usize = groups.iter().map(|gr| gr.obstacle_cells.len()).sum();
        prop_assert_eq!(total, grid.occupied_count());
        let mut seen = BTreeSet::new();
        for gr in &groups {
            for c in &gr.obstacle_cells {
                prop_assert!(seen.insert(*c));
            }
            prop_assert!(is_ring(&gr.raw_boundary));
            prop_assert!(is_ring(&gr.closed_boundary));
            prop_assert!(is_ring(&gr.convex_boundary));
            let closed: BTreeSet<_> = gr.closed_obstacles.iter().collect();
            prop_assert!(gr.obstacle_cells.iter().all(|c| closed.contains(c)));
            for c in &gr.corners {
                prop_assert!(gr.raw_boundary.contains(c) && gr.closed_boundary.contains(c));
            }
        }
        prop_assert_eq!(convex_violations(&groups, &grid), 0);
        prop_assert_eq!(build_groups(&grid, true), groups);
    }

    #[test]
    fn isolated_groups_never_lose_area(seed in 0u64..10_000) {
        let grid = random_grid(seed);
        let groups = build_groups(&grid, true);
        for gr in &groups {
            let (lo, hi) = gr.bbox();
            let isolated = groups.iter().filter(|o| o.id != gr.id).all(|o| {
                o.obstacle_cells.iter().all(|c| c.x < lo.x - 3 || c.x > hi.x + 3 || c.y < lo.y - 3 || c.y > hi.y + 3)
            });
            if isolated {
                prop_assert!(ring_area2(&gr.convex_boundary).abs() >= ring_area2(&gr.raw_boundary).abs());
            }
        }
    }
}
