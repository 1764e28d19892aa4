//! Depth-first search over the topology graph for group-level trajectories.

use crate::goal_lines::GoalLine;
use crate::grid::GridIndex;
use crate::topology::{NodeId, TopologyGraph};
use crate::Point;

use super::nearest_goal_cell;

/// Ordered node sequence `robot, g_1, ..., g_n, goal`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupLevelTrajectory {
    pub nodes: Vec<NodeId>,
    /// Sum of the edge heuristics along the sequence, meters.
    pub heuristic_cost: f64,
}

impl GroupLevelTrajectory {
    /// Group ids in visiting order.
    pub fn groups(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                NodeId::Group(g) => Some(*g),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    pub max_results: usize,
    /// Maximum number of groups per sequence.
    pub max_depth: usize,
    /// Reference direction (robot towards local goal).
    pub reference: Point,
    pub angle_limit: f64,
    pub father_visit: bool,
    pub orientation_limit: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            max_results: 8,
            max_depth: 5,
            reference: Point::new(1.0, 0.0),
            angle_limit: 100f64.to_radians(),
            father_visit: true,
            orientation_limit: true,
        }
    }
}

/// `||e_shortest|| + ||p_j - p_g||` in meters, with `p_g` the goal cell
/// nearest to the attachment `p_j`.
pub fn edge_heuristic(graph: &TopologyGraph, from: NodeId, to: NodeId, lines: &[GoalLine]) -> Option<f64> {
    let e = graph.edge(from, to)?;
    let s = &e.shortest;
    let mut f = s.length_cells();
    if to != NodeId::Goal {
        if let Some((g, _)) = nearest_goal_cell(s.to, lines) {
            f += s.to.dist(g);
        }
    }
    Some(f * graph.resolution)
}

fn direction_angle(a: GridIndex, b: GridIndex, reference: Point) -> Option<f64> {
    let d = Point::new((b.x - a.x) as f64, (b.y - a.y) as f64);
    if d.norm() == 0.0 || reference.norm() == 0.0 {
        return None;
    }
    Some((d.dot(reference) / (d.norm() * reference.norm())).clamp(-1.0, 1.0).acos())
}

/// Enumerates group-level trajectories from the robot to the goal node.
///
/// Children are expanded in ascending heuristic order. A branch `i -> j`
/// to a group is skipped when the parent of `i` connects to `j` directly
/// (`father_visit`) or when the shortest connection deviates from the
/// reference direction by more than `angle_limit`.
pub fn search_group_trajectories(
    graph: &TopologyGraph,
    lines: &[GoalLine],
    params: &SearchParams,
) -> Vec<GroupLevelTrajectory> {
    let mut out = Vec::new();
    let mut path = vec![NodeId::Robot];
    dfs(graph, lines, params, &mut path, 0.0, &mut out);
    out
}

fn dfs(
    graph: &TopologyGraph,
    lines: &[GoalLine],
    params: &SearchParams,
    path: &mut Vec<NodeId>,
    cost: f64,
    out: &mut Vec<GroupLevelTrajectory>,
) {
    let node = *path.last().unwrap();
    let parent = path.len().checked_sub(2).map(|k| path[k]);
    let mut children: Vec<(f64, NodeId)> = graph
        .successors(node)
        .filter(|e| !path.contains(&e.to))
        .filter_map(|e| edge_heuristic(graph, node, e.to, lines).map(|f| (f, e.to)))
        .collect();
    children.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for (f, child) in children {
        if out.len() >= params.max_results {
            return;
        }
        if child == NodeId::Goal {
            let mut nodes = path.clone();
            nodes.push(NodeId::Goal);
            out.push(GroupLevelTrajectory { nodes, heuristic_cost: cost + f });
            continue;
        }
        if path.len() > params.max_depth {
            continue;
        }
        if params.father_visit && parent.is_some_and(|p| graph.has_edge(p, child)) {
            continue;
        }
        if params.orientation_limit {
            let s = &graph.edge(node, child).unwrap().shortest;
            if direction_angle(s.from, s.to, params.reference).is_some_and(|a| a > params.angle_limit) {
                continue;
            }
        }
        path.push(child);
        dfs(graph, lines, params, path, cost + f, out);
        path.pop();
    }
}
