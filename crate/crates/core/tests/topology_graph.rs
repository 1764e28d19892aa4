mod common;

use common::*;
use ganav_core::goal_lines::GoalLine;
use ganav_core::grid::{build_groups, segment_free, GridIndex, OccupancyGrid};
use ganav_core::topology::{
    build_topology, connect_goal, connect_groups, connect_robot, group_voronoi, NodeId, SOUND_CLEARANCE_CELLS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn block(x0: i32, y0: i32, w: i32, h: i32) -> Vec<GridIndex> {
    (x0..x0 + w).flat_map(|x| (y0..y0 + h).map(move |y| g(x, y))).collect()
}

/// Free cells of the right border column split into runs.
fn right_border_lines(grid: &OccupancyGrid) -> Vec<GoalLine> {
    let x = grid.width() as i32 - 1;
    let mut lines = Vec::new();
    let mut run = Vec::new();
    for y in 0..grid.height() as i32 {
        let c = g(x, y);
        if grid.is_occupied(c) {
            if !run.is_empty() {
                lines.push(GoalLine::new(lines.len(), std::mem::take(&mut run), grid));
            }
        } else {
            run.push(c);
        }
    }
    if !run.is_empty() {
        lines.push(GoalLine::new(lines.len(), run, grid));
    }
    lines
}

#[test]
fn ridge_between_two_cells_is_the_bisector() {
    let grid = grid_with(11, 11, &[g(2, 5), g(8, 5)]);
    let groups = build_groups(&grid, true);
    let v = group_voronoi(&groups, &grid);
    assert!(!v.samples.is_empty());
    // The discrete ridge is at most one cell off the bisector x = 5.
    for s in &v.samples {
        assert!((s.cell.x - 5).abs() <= 1, "{:?}", s);
        assert_ne!(s.groups.0, s.groups.1);
        assert!(groups[s.groups.0].convex_boundary.contains(&s.generators.0));
        assert!(groups[s.groups.1].convex_boundary.contains(&s.generators.1));
        assert!((s.cell.dist(s.generators.0) - s.cell.dist(s.generators.1)).abs() <= 1.0);
    }
    assert!(v.samples.iter().filter(|s| s.cell.x == 5).count() >= 5);
}

#[test]
fn single_group_has_no_ridges() {
    let grid = grid_with(11, 11, &block(3, 3, 2, 2));
    let groups = build_groups(&grid, true);
    assert!(group_voronoi(&groups, &grid).samples.is_empty());
}

#[test]
fn wall_separates_ridges() {
    let mut cells = vec![g(3, 10), g(17, 10)];
    cells.extend((0..21).map(|y| g(10, y)));
    let grid = grid_with(21, 21, &cells);
    let groups = build_groups(&grid, true);
    assert_eq!(groups.len(), 3);
    let a = groups.iter().find(|gr| gr.obstacle_cells == vec![g(3, 10)]).unwrap().id;
    let b = groups.iter().find(|gr| gr.obstacle_cells == vec![g(17, 10)]).unwrap().id;
    let v = group_voronoi(&groups, &grid);
    assert!(v.links_between(a, b).is_empty());
    assert!(connect_groups(&groups[a], &groups[b], &v, &grid).is_none());
}

/// Retained-sample soundness and connection-set properties on random grids.
#[test]
fn random_grid_topology_properties() {
    let (mut tight, mut wide) = (0, 0);
    for seed in 0..60 {
        let grid = random_grid(seed);
        let groups = build_groups(&grid, true);
        let v = group_voronoi(&groups, &grid);
        tight += v.dropped_tight;
        wide += v.dropped_wide;
        for s in &v.samples {
            assert!(segment_free(&grid, s.generators.0, s.generators.1), "seed {seed}: {s:?}");
        }
        for &(i, j) in v.links.keys() {
            let fwd = connect_groups(&groups[i], &groups[j], &v, &grid).unwrap();
            let back = connect_groups(&groups[j], &groups[i], &v, &grid).unwrap();
            assert_eq!((fwd.shortest.from, fwd.shortest.to), (back.shortest.to, back.shortest.from));
            let best = v.links_between(i, j).iter().map(|p| p.0.dist_sq(p.2)).min().unwrap();
            assert_eq!(fwd.shortest.from.dist_sq(fwd.shortest.to), best);
            for cs in [&fwd, &back] {
                let (ri, rj) = match (cs.from, cs.to) {
                    (NodeId::Group(a), NodeId::Group(b)) => (&groups[a].convex_boundary, &groups[b].convex_boundary),
                    _ => unreachable!(),
                };
                for (kind, s) in cs.segments() {
                    assert!(segment_free(&grid, s.from, s.to), "seed {seed}: {kind} {s:?}");
                    assert_eq!(ri[s.from_pos.unwrap()], s.from);
                    assert_eq!(rj[s.to_pos.unwrap()], s.to);
                    assert!(s.length_cells() >= cs.shortest.length_cells() - 1e-9 || kind == "shortest");
                }
            }
        }
    }
    // Wide-clearance drops would be genuine soundness failures.
    assert_eq!(wide, 0, "tight drops {tight}");
    assert!(SOUND_CLEARANCE_CELLS >= 2.0);
}

#[test]
fn robot_connection_examples() {
    let grid = grid_with(20, 20, &[g(6, 10)]);
    let groups = build_groups(&grid, true);
    let s = connect_robot(g(4, 10), &groups[0], &grid).unwrap();
    assert_eq!(s.to, g(5, 10));
    assert_eq!(s.length_cells(), 1.0);

    let mut cells: Vec<_> = (0..20).map(|y| g(8, y)).collect();
    cells.push(g(14, 10));
    let grid = grid_with(20, 20, &cells);
    let groups = build_groups(&grid, true);
    let hidden = groups.iter().find(|gr| gr.obstacle_cells == vec![g(14, 10)]).unwrap();
    assert!(connect_robot(g(3, 10), hidden, &grid).is_none());
}

#[test]
fn robot_connection_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..40 {
        let grid = random_grid(seed);
        let groups = build_groups(&grid, true);
        let robot = loop {
            let c = g(rng.gen_range(0..grid.width() as i32), rng.gen_range(0..grid.height() as i32));
            if !grid.is_occupied(c) {
                break c;
            }
        };
        for gr in &groups {
            let ring = &gr.convex_boundary;
            let want = (0..ring.len())
                .filter(|&i| grid.contains(ring[i]) && !grid.is_occupied(ring[i]))
                .filter(|&i| segment_free(&grid, robot, ring[i]))
                .min_by_key(|&i| (robot.dist_sq(ring[i]), i));
            let got = connect_robot(robot, gr, &grid);
            assert_eq!(got.map(|s| s.to_pos.unwrap()), want, "seed {seed} group {}", gr.id);
        }
    }
}

#[test]
fn goal_connection_matches_oracle() {
    for seed in 0..40 {
        let grid = random_grid(seed);
        let lines = right_border_lines(&grid);
        if lines.is_empty() {
            continue;
        }
        let groups = build_groups(&grid, true);
        for gr in &groups {
            let ring = &gr.convex_boundary;
            let mut best: Option<((i64, usize, usize, usize), (GridIndex, GridIndex))> = None;
            for (pos, &src) in ring.iter().enumerate() {
                if !grid.contains(src) || grid.is_occupied(src) {
                    continue;
                }
                for l in &lines {
                    for (ci, &c) in l.cells.iter().enumerate() {
                        let key = (src.dist_sq(c), l.id, pos, ci);
                        if best.as_ref().is_some_and(|(k, _)| *k <= key) || !segment_free(&grid, src, c) {
                            continue;
                        }
                        best = Some((key, (src, c)));
                    }
                }
            }
            let got = connect_goal(gr, &lines, &grid).map(|s| (s.from, s.to));
            assert_eq!(got, best.map(|b| b.1), "seed {seed} group {}", gr.id);
        }
    }
}

#[test]
fn empty_scene_links_robot_to_goal() {
    let grid = grid_with(30, 30, &[]);
    let lines = right_border_lines(&grid);
    let graph = build_topology(g(3, 15), &[], &lines, &Default::default(), &grid);
    assert_eq!(graph.edges.len(), 1);
    let e = graph.edge(NodeId::Robot, NodeId::Goal).unwrap();
    assert_eq!(e.shortest.to, g(29, 15));
    assert!(graph.goal_reachable());
}

#[test]
fn three_visible_groups() {
    let mut cells = block(10, 10, 3, 3);
    cells.extend(block(30, 10, 3, 3));
    cells.extend(block(20, 28, 3, 3));
    let grid = grid_with(45, 45, &cells);
    let groups = build_groups(&grid, true);
    let v = group_voronoi(&groups, &grid);
    assert_eq!(v.links.len(), 3);
    let graph = build_topology(g(2, 20), &groups, &right_border_lines(&grid), &v, &grid);
    let group_edges = graph.edges.keys().filter(|(a, b)| matches!((a, b), (NodeId::Group(_), NodeId::Group(_)))).count();
    assert_eq!(group_edges, 6);
    let robot_edges = graph.successors(NodeId::Robot).filter(|e| e.to != NodeId::Goal).count();
    let goal_edges = graph.edges.keys().filter(|(a, b)| *b == NodeId::Goal && *a != NodeId::Robot).count();
    assert!(robot_edges <= 3 && goal_edges <= 3);
    for line in graph.dump().lines() {
        assert_eq!(line.split_whitespace().count(), 8, "{line}");
    }
}

#[test]
fn enclosed_robot_has_no_topology_path() {
    let mut cells = Vec::new();
    for k in 5..=25 {
        cells.extend([g(k, 5), g(k, 25), g(5, k), g(25, k)]);
    }
    let grid = grid_with(40, 40, &cells);
    let groups = build_groups(&grid, true);
    let v = group_voronoi(&groups, &grid);
    let graph = build_topology(g(15, 15), &groups, &right_border_lines(&grid), &v, &grid);
    assert!(!graph.goal_reachable());
}
