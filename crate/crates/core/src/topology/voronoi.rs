//! Group-level Voronoi graph: ridge cells between boundaries of different
//! obstacle groups.

use std::collections::BTreeMap;

use crate::grid::field::{propagate, NONE};
use crate::grid::{segment_free, GridIndex, ObstacleGroup, OccupancyGrid, NEIGHBORS4};

/// Clearance (in cells) from which the two generators of a ridge cell are
/// expected to see each other.
pub const SOUND_CLEARANCE_CELLS: f64 = 2.0;

/// A free cell roughly equidistant from boundary cells of two groups.
#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiSample {
    pub cell: GridIndex,
    /// Generator cells `(p_1, p_2)` on the boundaries of `groups.0` / `groups.1`.
    pub generators: (GridIndex, GridIndex),
    pub groups: (usize, usize),
    /// Ring positions of the generators on their planning boundaries.
    pub ring_positions: (usize, usize),
    /// Distance to the nearer generator, meters.
    pub clearance: f64,
}

/// A generator pair linking two groups, oriented from the lower group id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Link {
    pub a: GridIndex,
    pub a_pos: usize,
    pub b: GridIndex,
    pub b_pos: usize,
}

#[derive(Clone, Debug, Default)]
pub struct VoronoiGraph {
    pub samples: Vec<VoronoiSample>,
    /// Deduplicated generator pairs keyed by `(lower id, higher id)`.
    pub links: BTreeMap<(usize, usize), Vec<Link>>,
    /// Samples dropped because their generators cannot see each other,
    /// split by clearance below / at least [`SOUND_CLEARANCE_CELLS`].
    pub dropped_tight: usize,
    pub dropped_wide: usize,
}

impl VoronoiGraph {
    /// Generator pairs oriented as `(cell on i, pos on i, cell on j, pos on j)`.
    pub fn links_between(&self, i: usize, j: usize) -> Vec<(GridIndex, usize, GridIndex, usize)> {
        if i < j {
            self.links
                .get(&(i, j))
                .map(|v| v.iter().map(|l| (l.a, l.a_pos, l.b, l.b_pos)).collect())
                .unwrap_or_default()
        } else {
            self.links
                .get(&(j, i))
                .map(|v| v.iter().map(|l| (l.b, l.b_pos, l.a, l.a_pos)).collect())
                .unwrap_or_default()
        }
    }
}

struct Generator {
    cell: GridIndex,
    group: usize,
    pos: usize,
}

/// Builds the group-level Voronoi graph from the planning boundaries.
///
/// Boundary cells propagate through free space; a cell whose 4-neighbour
/// was reached from another group is a ridge cell. Samples whose generators
/// are not Bresenham-visible are dropped and counted.
pub fn group_voronoi(groups: &[ObstacleGroup], grid: &OccupancyGrid) -> VoronoiGraph {
    let mut out = VoronoiGraph::default();
    if groups.len() < 2 {
        return out;
    }
    let mut gens = Vec::new();
    for g in groups {
        for (pos, &cell) in g.planning_boundary().iter().enumerate() {
            if grid.contains(cell) && !grid.is_occupied(cell) {
                gens.push(Generator { cell, group: g.id, pos });
            }
        }
    }
    let cells: Vec<GridIndex> = gens.iter().map(|g| g.cell).collect();
    let prop = propagate(grid, &cells, |i| !grid.cells()[i], i64::MAX);
    let res = grid.resolution();
    for li in 0..prop.source.len() {
        let s = prop.source[li];
        if s == NONE {
            continue;
        }
        let c = grid.index_of(li);
        let own = &gens[s as usize];
        let mut best: Option<(i64, u32)> = None;
        for (dx, dy) in NEIGHBORS4 {
            let n = c.offset(dx, dy);
            if !grid.contains(n) {
                continue;
            }
            let ns = prop.source[grid.linear(n)];
            if ns == NONE || gens[ns as usize].group == own.group {
                continue;
            }
            let d = c.dist_sq(gens[ns as usize].cell);
            if best.map_or(true, |(bd, bs)| (d, ns) < (bd, bs)) {
                best = Some((d, ns));
            }
        }
        let Some((_, os)) = best else { continue };
        let other = &gens[os as usize];
        let d_own = c.dist(own.cell);
        let d_other = c.dist(other.cell);
        if (d_own - d_other).abs() > 1.0 {
            continue;
        }
        let clearance_cells = d_own.min(d_other);
        if !segment_free(grid, own.cell, other.cell) {
            if clearance_cells < SOUND_CLEARANCE_CELLS {
                out.dropped_tight += 1;
            } else {
                out.dropped_wide += 1;
            }
            continue;
        }
        out.samples.push(VoronoiSample {
            cell: c,
            generators: (own.cell, other.cell),
            groups: (own.group, other.group),
            ring_positions: (own.pos, other.pos),
            clearance: clearance_cells * res,
        });
        let (key, link) = if own.group < other.group {
            ((own.group, other.group), Link { a: own.cell, a_pos: own.pos, b: other.cell, b_pos: other.pos })
        } else {
            ((other.group, own.group), Link { a: other.cell, a_pos: other.pos, b: own.cell, b_pos: own.pos })
        };
        out.links.entry(key).or_default().push(link);
    }
    for v in out.links.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    out
}
