mod common;

use std::collections::BTreeSet;

use common::*;
use ganav_core::goal_lines::GoalLine;
use ganav_core::grid::{build_groups, segment_free, GridIndex, ObstacleGroup, OccupancyGrid};
use ganav_core::init::{
    dedup_by_h_signature, derive_trajectories, h_signature, search_group_trajectories, shorten_at_junction,
    CandidateTrajectory, GroupLevelTrajectory, SearchParams,
};
use ganav_core::topology::{build_topology, group_voronoi, NodeId, TopologyGraph};
use ganav_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Fixture {
    grid: OccupancyGrid,
    groups: Vec<ObstacleGroup>,
    lines: Vec<GoalLine>,
    graph: TopologyGraph,
}

fn block(x0: i32, y0: i32, w: i32, h: i32) -> Vec<GridIndex> {
    (x0..x0 + w).flat_map(|x| (y0..y0 + h).map(move |y| g(x, y))).collect()
}

/// Robot near the left border, one goal line over the whole right border.
fn fixture(w: usize, h: usize, cells: &[GridIndex], robot: GridIndex) -> Fixture {
    let grid = grid_with(w, h, cells);
    let groups = build_groups(&grid, true);
    let right: Vec<GridIndex> = (0..h as i32).map(|y| g(w as i32 - 1, y)).collect();
    let lines = vec![GoalLine::new(0, right, &grid)];
    let v = group_voronoi(&groups, &grid);
    let graph = build_topology(robot, &groups, &lines, &v, &grid);
    Fixture { grid, groups, lines, graph }
}

fn gt(nodes: Vec<NodeId>) -> GroupLevelTrajectory {
    GroupLevelTrajectory { nodes, heuristic_cost: 0.0 }
}

fn check_candidate(t: &CandidateTrajectory, f: &Fixture) {
    for w in t.cells.windows(2) {
        assert!(segment_free(&f.grid, w[0], w[1]), "{} -> {}", w[0], w[1]);
    }
    let last = *t.cells.last().unwrap();
    assert!(f.lines.iter().any(|l| l.id == t.goal_line_id && l.contains(last)));
    let len: f64 = t.waypoints.windows(2).map(|w| w[0].distance(w[1])).sum();
    assert!((len - t.length).abs() < 1e-9);
}

#[test]
fn derivation_yields_two_to_the_n() {
    let cells: Vec<_> = [30, 60, 90].iter().flat_map(|&x| block(x, 29, 3, 3)).collect();
    let f = fixture(120, 61, &cells, g(5, 30));
    assert_eq!(f.groups.len(), 3);
    for n in 1..=3 {
        let mut nodes = vec![NodeId::Robot];
        nodes.extend((0..n).map(NodeId::Group));
        nodes.push(NodeId::Goal);
        for w in nodes.windows(2) {
            assert!(f.graph.has_edge(w[0], w[1]), "missing edge {} -> {}", w[0], w[1]);
        }
        let ts = derive_trajectories(&gt(nodes), &f.graph, &f.groups, &f.lines, &f.grid);
        assert_eq!(ts.len(), 1 << n);
        let dirs: BTreeSet<Vec<i8>> = ts.iter().map(|t| t.groups.iter().map(|(_, d)| d.sign()).collect()).collect();
        assert_eq!(dirs.len(), 1 << n);
        for t in &ts {
            check_candidate(t, &f);
            let s = shorten_at_junction(t, &f.grid);
            check_candidate(&s, &f);
            assert!(s.length <= t.length + 1e-9);
        }
    }
}

#[test]
fn zero_groups_give_one_straight_trajectory() {
    let f = fixture(60, 40, &[], g(3, 20));
    let gts = search_group_trajectories(&f.graph, &f.lines, &SearchParams::default());
    assert_eq!(gts.len(), 1);
    assert_eq!(gts[0].nodes, vec![NodeId::Robot, NodeId::Goal]);
    let ts = derive_trajectories(&gts[0], &f.graph, &f.groups, &f.lines, &f.grid);
    assert_eq!(ts.len(), 1);
    assert_eq!(*ts[0].cells.last().unwrap(), g(59, 20));
}

#[test]
fn mirrored_detours_are_symmetric() {
    let f = fixture(80, 41, &block(39, 19, 3, 3), g(5, 20));
    let ts = derive_trajectories(&gt(vec![NodeId::Robot, NodeId::Group(0), NodeId::Goal]), &f.graph, &f.groups, &f.lines, &f.grid);
    assert_eq!(ts.len(), 2);
    let ts: Vec<_> = ts.iter().map(|t| shorten_at_junction(t, &f.grid)).collect();
    assert!((ts[0].length - ts[1].length).abs() <= 2.0 * f.grid.resolution());
    let a = h_signature(&ts[0], &f.groups, &f.grid);
    let b = h_signature(&ts[1], &f.groups, &f.grid);
    assert_ne!(a, vec![0]);
    assert_eq!(a, b.iter().map(|x| -x).collect::<Vec<_>>());
    // Clockwise around the group (over the top) winds negatively.
    let over = ts.iter().position(|t| t.groups[0].1.sign() == 1).unwrap();
    assert!(ts[over].waypoints.iter().any(|p| p.y > f.grid.cell_center(g(40, 21)).y));
    assert_eq!(h_signature(&ts[over], &f.groups, &f.grid), vec![-1]);
}

#[test]
fn straight_far_trajectory_has_zero_signature() {
    let f = fixture(80, 41, &block(74, 36, 3, 3), g(5, 5));
    let ts = derive_trajectories(&gt(vec![NodeId::Robot, NodeId::Goal]), &f.graph, &f.groups, &f.lines, &f.grid);
    assert_eq!(h_signature(&ts[0], &f.groups, &f.grid), vec![0]);
}

#[test]
fn backward_group_is_pruned_by_orientation() {
    let f = fixture(81, 41, &block(10, 19, 3, 3), g(40, 20));
    let mut params = SearchParams { angle_limit: std::f64::consts::FRAC_PI_2, ..SearchParams::default() };
    let gts = search_group_trajectories(&f.graph, &f.lines, &params);
    assert!(gts.iter().all(|t| t.groups().is_empty()));
    params.orientation_limit = false;
    let gts = search_group_trajectories(&f.graph, &f.lines, &params);
    assert!(gts.iter().any(|t| t.groups() == vec![0]));
}

/// Simple robot-to-goal paths with the father-visit rule applied.
fn oracle_paths(graph: &TopologyGraph) -> BTreeSet<Vec<NodeId>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![vec![NodeId::Robot]];
    while let Some(path) = stack.pop() {
        let node = *path.last().unwrap();
        for to in graph.nodes() {
            if !graph.has_edge(node, to) || path.contains(&to) {
                continue;
            }
            let mut next = path.clone();
            next.push(to);
            if to == NodeId::Goal {
                out.insert(next);
                continue;
            }
            if path.len() >= 2 && graph.has_edge(path[path.len() - 2], to) {
                continue;
            }
            stack.push(next);
        }
    }
    out
}

fn random_fixture(seed: u64, max_groups: usize) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_groups);
    let mut cells = Vec::new();
    for _ in 0..n {
        let (x, y) = (rng.gen_range(12..60), rng.gen_range(4..52));
        cells.extend(block(x, y, rng.gen_range(2..8), rng.gen_range(2..8)));
    }
    fixture(72, 60, &cells, g(3, 30))
}

#[test]
fn search_is_complete_under_father_visit() {
    for seed in 0..40 {
        let f = random_fixture(seed, 4);
        if f.groups.len() > 4 {
            continue;
        }
        let params = SearchParams {
            max_results: usize::MAX,
            max_depth: usize::MAX,
            orientation_limit: false,
            ..SearchParams::default()
        };
        let got: BTreeSet<Vec<NodeId>> =
            search_group_trajectories(&f.graph, &f.lines, &params).into_iter().map(|t| t.nodes).collect();
        assert_eq!(got, oracle_paths(&f.graph), "seed {seed}");
    }
}

#[test]
fn two_side_by_side_groups() {
    let mut cells = block(40, 10, 4, 4);
    cells.extend(block(40, 46, 4, 4));
    let f = fixture(90, 60, &cells, g(3, 30));
    let params = SearchParams { max_results: usize::MAX, ..SearchParams::default() };
    let got: BTreeSet<Vec<NodeId>> =
        search_group_trajectories(&f.graph, &f.lines, &params).into_iter().map(|t| t.nodes).collect();
    use NodeId::*;
    assert!(got.contains(&vec![Robot, Goal]));
    assert!(got.contains(&vec![Robot, Group(0), Goal]));
    assert!(got.contains(&vec![Robot, Group(1), Goal]));
    assert!(!got.contains(&vec![Robot, Group(0), Group(1), Goal]));
    assert!(!got.contains(&vec![Robot, Group(1), Group(0), Goal]));
}

#[test]
fn dedup_keeps_shortest_of_each_class() {
    let mut total = 0;
    for seed in 0..30 {
        let f = random_fixture(seed, 3);
        let mut all = Vec::new();
        for gt in search_group_trajectories(&f.graph, &f.lines, &SearchParams::default()) {
            for t in derive_trajectories(&gt, &f.graph, &f.groups, &f.lines, &f.grid) {
                let mut t = shorten_at_junction(&t, &f.grid);
                t.h_signature = h_signature(&t, &f.groups, &f.grid);
                all.push(t);
            }
        }
        total += all.len();
        let kept = dedup_by_h_signature(all.clone());
        let sigs: BTreeSet<_> = kept.iter().map(|t| t.h_signature.clone()).collect();
        assert_eq!(sigs.len(), kept.len());
        let classes: BTreeSet<_> = all.iter().map(|t| t.h_signature.clone()).collect();
        assert_eq!(classes, sigs);
        for k in &kept {
            let min = all.iter().filter(|t| t.h_signature == k.h_signature).map(|t| t.length).fold(f64::INFINITY, f64::min);
            assert_eq!(k.length, min);
        }
        let mut rev = all.clone();
        rev.reverse();
        assert_eq!(dedup_by_h_signature(rev).len(), kept.len());
    }
    assert!(total > 30);
}

#[test]
fn dedup_examples() {
    let mk = |len: f64, sig: Vec<i8>| CandidateTrajectory {
        waypoints: vec![Point::new(0.0, 0.0), Point::new(len, 0.0)],
        cells: vec![],
        kinds: vec![],
        groups: vec![],
        h_signature: sig,
        length: len,
        goal_line_id: 0,
    };
    let kept = dedup_by_h_signature(vec![mk(7.0, vec![1]), mk(5.0, vec![1])]);
    assert_eq!(kept.len(), 1);
    assert_eq!(kept[0].length, 5.0);
    assert_eq!(dedup_by_h_signature(vec![mk(7.0, vec![1]), mk(5.0, vec![-1])]).len(), 2);
    let mut a = mk(5.0, vec![0]);
    a.goal_line_id = 3;
    let kept = dedup_by_h_signature(vec![a, mk(5.0, vec![0])]);
    assert_eq!(kept[0].goal_line_id, 3);
}
