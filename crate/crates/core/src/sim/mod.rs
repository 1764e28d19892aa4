//! Deterministic 2D world: unicycle robot, social-force pedestrians,
//! random scene generation and the closed planning loop.

mod agents;
mod episode;
mod scenario;
mod sense;
mod shapes;

pub use agents::{social_force, step_pedestrians, step_robot, Pedestrian, RobotState, SocialForce};
pub use episode::{run_scenario, run_scenario_with, CycleRecord, CycleView, EpisodeResult, Outcome};
pub use scenario::{
    global_path, scenario_generator, static_world_grid, GenCounts, RobotConfig, ScenarioConfig, ScenarioKind,
    SCHEMA_VERSION,
};
pub use sense::{centered_frame, sense, sense_local_map, SensedMaps, World};
pub use shapes::{distance_to, rasterize_disk, rasterize_primitives, Primitive, Shape, ShapeKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("malformed scenario file: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("generation_failed: no valid placement for seed {seed}")]
    GenerationFailed { seed: u64 },
}
