//! Goal-line topological planning for 2D crowd navigation.
//!
//! The pipeline runs once per planning cycle:
//!
//! 1. [`grid`] clusters the local occupancy map into obstacle groups and
//!    computes their max-convex boundaries.
//! 2. [`goal_lines`] turns the local goal point into free runs of border
//!    cells and prunes the ones that lead into dead ends.
//! 3. [`topology`] links robot, groups and goal lines through a
//!    group-level Voronoi graph.
//! 4. [`init`] searches group-level trajectories and expands each into
//!    concrete candidates, deduplicated by homotopy class.
//! 5. [`optimize`] refines candidates into timed bands whose endpoint may
//!    slide along its goal line.
//!
//! [`sim`] hosts the deterministic simulator used to evaluate the planner.

pub mod geom;
pub mod goal_lines;
pub mod grid;
pub mod init;
pub mod optimize;
pub mod planner;
pub mod scalar;
pub mod sim;
pub mod topology;

pub use geom::{Pose2, Vec2};
pub use scalar::Scalar;

/// World point in meters.
pub type Point = Vec2<f64>;
/// World pose in meters / radians.
pub type Pose = Pose2<f64>;
/// Band trajectory in double precision.
pub type Band = optimize::BandTrajectory<f64>;
/// Band trajectory in single precision.
pub type BandF32 = optimize::BandTrajectory<f32>;
/// Optimizer parameters in double precision.
pub type Params = optimize::OptimizerParams<f64>;
/// Robot limits in double precision.
pub type Limits = optimize::RobotLimits<f64>;
