//! Topological map over robot, obstacle groups and goal lines.

mod connect;
mod voronoi;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use connect::{
    connect_cells_to_goal, connect_goal, connect_groups, connect_robot, ring_offset, shrink_segment, ConnectionSet,
    Direction, NodeId, Segment,
};
pub use voronoi::{group_voronoi, Link, VoronoiGraph, VoronoiSample, SOUND_CLEARANCE_CELLS};

use crate::goal_lines::GoalLine;
use crate::grid::{GridIndex, ObstacleGroup, OccupancyGrid};

/// Nodes and connection sets of one planning cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct TopologyGraph {
    pub robot_cell: GridIndex,
    pub group_count: usize,
    pub edges: BTreeMap<(NodeId, NodeId), ConnectionSet>,
    pub resolution: f64,
}

impl TopologyGraph {
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut v = vec![NodeId::Robot];
        v.extend((0..self.group_count).map(NodeId::Group));
        v.push(NodeId::Goal);
        v
    }

    pub fn edge(&self, from: NodeId, to: NodeId) -> Option<&ConnectionSet> {
        self.edges.get(&(from, to))
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.edges.contains_key(&(from, to))
    }

    /// Outgoing edges of `from` in node order.
    pub fn successors(&self, from: NodeId) -> impl Iterator<Item = &ConnectionSet> + '_ {
        self.edges.range((from, NodeId::Robot)..=(from, NodeId::Goal)).map(|(_, e)| e)
    }

    /// `true` when the goal node is reachable from the robot.
    pub fn goal_reachable(&self) -> bool {
        let mut seen = vec![NodeId::Robot];
        let mut stack = vec![NodeId::Robot];
        while let Some(n) = stack.pop() {
            if n == NodeId::Goal {
                return true;
            }
            for e in self.successors(n) {
                if !seen.contains(&e.to) {
                    seen.push(e.to);
                    stack.push(e.to);
                }
            }
        }
        false
    }

    /// Plain-text edge list: `from to kind length ax ay bx by` per segment.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in self.edges.values() {
            for (kind, s) in e.segments() {
                writeln!(
                    out,
                    "{} {} {} {:.4} {} {} {} {}",
                    e.from,
                    e.to,
                    kind,
                    s.length(self.resolution),
                    s.from.x,
                    s.from.y,
                    s.to.x,
                    s.to.y
                )
                .unwrap();
            }
        }
        out
    }
}

/// Assembles the graph: pairwise group connections (both directions) for
/// every Voronoi-linked pair, robot edges and goal edges.
pub fn build_topology(
    robot_cell: GridIndex,
    groups: &[ObstacleGroup],
    lines: &[GoalLine],
    voronoi: &VoronoiGraph,
    grid: &OccupancyGrid,
) -> TopologyGraph {
    let mut edges = BTreeMap::new();
    for &(i, j) in voronoi.links.keys() {
        for (a, b) in [(i, j), (j, i)] {
            if let Some(cs) = connect_groups(&groups[a], &groups[b], voronoi, grid) {
                edges.insert((cs.from, cs.to), cs);
            }
        }
    }
    for g in groups {
        if let Some(s) = connect_robot(robot_cell, g, grid) {
            edges.insert((NodeId::Robot, NodeId::Group(g.id)), ConnectionSet::single(NodeId::Robot, NodeId::Group(g.id), s));
        }
        if !lines.is_empty() {
            if let Some(s) = connect_goal(g, lines, grid) {
                edges.insert((NodeId::Group(g.id), NodeId::Goal), ConnectionSet::single(NodeId::Group(g.id), NodeId::Goal, s));
            }
        }
    }
    if !lines.is_empty() {
        if let Some(s) = connect_cells_to_goal(&[(robot_cell, None)], lines, grid) {
            edges.insert((NodeId::Robot, NodeId::Goal), ConnectionSet::single(NodeId::Robot, NodeId::Goal, s));
        }
    }
    TopologyGraph { robot_cell, group_count: groups.len(), edges, resolution: grid.resolution() }
}
