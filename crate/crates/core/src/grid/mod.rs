//! Local occupancy map, obstacle groups and their boundary rings.

pub mod bresenham;
pub mod contour;
pub mod field;
pub mod group;
mod map;
pub mod mask;
pub mod morph;

pub use bresenham::{bresenham, segment_free};
pub use field::{inflate, ClearanceField};
pub use group::{
    build_groups, close_group, cluster_groups, corner_set, max_convex_boundary, GroupIndex,
    ObstacleGroup,
};
pub use map::{GridError, GridIndex, OccupancyGrid, NEIGHBORS4, NEIGHBORS8_CW};
pub use mask::CellMask;
