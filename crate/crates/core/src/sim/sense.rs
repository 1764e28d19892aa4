//! Ground-truth rasterization of the world into robot-centred grids.

use super::agents::Pedestrian;
use super::shapes::{rasterize_disk, rasterize_primitives, Primitive, Shape};
use crate::grid::OccupancyGrid;
use crate::Point;

/// Static shapes plus the current pedestrian states.
#[derive(Clone, Debug)]
pub struct World {
    pub shapes: Vec<Shape>,
    pub primitives: Vec<Primitive>,
    pub pedestrians: Vec<Pedestrian>,
}

impl World {
    pub fn new(shapes: Vec<Shape>, pedestrians: Vec<Pedestrian>) -> Self {
        let primitives = shapes.iter().flat_map(|s| s.primitives()).collect();
        Self { shapes, primitives, pedestrians }
    }
}

/// Empty axis-aligned grid of `side` meters centred on `center`, with the
/// origin snapped to the resolution so consecutive frames share cell edges.
pub fn centered_frame(center: Point, side: f64, resolution: f64) -> OccupancyGrid {
    let n = (side / resolution).round().max(1.0) as usize;
    let half = n as f64 * resolution * 0.5;
    let snap = |v: f64| ((v - half) / resolution).round() * resolution;
    OccupancyGrid::new(n, n, resolution, Point::new(snap(center.x), snap(center.y))).expect("positive resolution")
}

fn rasterize(grid: &mut OccupancyGrid, world: &World, pedestrians: bool, window: Option<(Point, Point)>) {
    let (lo, hi) = (grid.world_min(), grid.world_max());
    let near = |c: Point, r: f64| c.x + r >= lo.x && c.x - r <= hi.x && c.y + r >= lo.y && c.y - r <= hi.y;
    let prims: Vec<Primitive> = world.primitives.iter().copied().filter(|p| near(p.center(), p.bounding_radius())).collect();
    rasterize_primitives(grid, &prims);
    if pedestrians {
        for p in &world.pedestrians {
            let visible = window.map_or(true, |(a, b)| p.position.x >= a.x && p.position.x <= b.x && p.position.y >= a.y && p.position.y <= b.y);
            if visible && near(p.position, p.radius) {
                rasterize_disk(grid, p.position, p.radius);
            }
        }
    }
}

/// Local map: static shapes and pedestrian disks, no sensor noise.
pub fn sense_local_map(world: &World, robot: Point, side: f64, resolution: f64) -> OccupancyGrid {
    let mut g = centered_frame(robot, side, resolution);
    rasterize(&mut g, world, true, None);
    g
}

/// The three grids of one cycle.
#[derive(Clone, Debug)]
pub struct SensedMaps {
    pub local: OccupancyGrid,
    /// Local frame with static shapes only.
    pub static_local: OccupancyGrid,
    /// Larger frame: static shapes everywhere, pedestrians only where the
    /// local map sees them.
    pub extended: OccupancyGrid,
}

pub fn sense(world: &World, robot: Point, side: f64, resolution: f64, extended_factor: usize) -> SensedMaps {
    let local = sense_local_map(world, robot, side, resolution);
    let mut static_local = centered_frame(robot, side, resolution);
    rasterize(&mut static_local, world, false, None);
    let mut extended = centered_frame(robot, side * extended_factor.max(1) as f64, resolution);
    rasterize(&mut extended, world, true, Some((local.world_min(), local.world_max())));
    SensedMaps { local, static_local, extended }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridIndex;
    use crate::sim::ShapeKind;

    fn ped(x: f64, y: f64) -> Pedestrian {
        Pedestrian { position: Point::new(x, y), velocity: Point::zero(), goal: Point::new(x, y), radius: 0.3, desired_speed: 0.4, waypoints: vec![] }
    }

    #[test]
    fn empty_world_is_free() {
        let g = sense_local_map(&World::new(vec![], vec![]), Point::new(3.0, 4.0), 12.0, 0.05);
        assert_eq!((g.width(), g.height()), (240, 240));
        assert_eq!(g.occupied_count(), 0);
    }

    #[test]
    fn pedestrian_disk_matches_oracle() {
        let world = World::new(vec![], vec![ped(0.0, 0.0)]);
        let g = sense_local_map(&world, Point::new(0.0, 0.0), 12.0, 0.05);
        // Grid centre is a cell corner; count cell centres within 6 cells.
        let mut expected = 0;
        for y in 0..240 {
            for x in 0..240 {
                let c = GridIndex::new(x, y);
                let inside = g.cell_center(c).norm() <= 0.3;
                assert_eq!(g.is_occupied(c), inside, "cell {c:?}");
                expected += inside as usize;
            }
        }
        assert_eq!(g.occupied_count(), expected);
        let r = g.cell_center(GridIndex::new(120 + 5, 120)).x;
        assert!(r < 0.3 && g.cell_center(GridIndex::new(120 + 6, 120)).x > 0.3);
    }

    #[test]
    fn far_shape_ignored() {
        let world = World::new(vec![Shape::bar(ShapeKind::Rectangle, 50.0, 0.0, 0.0, 2.0, 1.0)], vec![]);
        assert_eq!(sense_local_map(&world, Point::zero(), 12.0, 0.05).occupied_count(), 0);
    }
}
