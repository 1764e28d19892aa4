//! Timed elastic-band refinement of candidate trajectories with a sliding
//! goal-line endpoint.

mod band;
mod banded;

pub use band::{check_band, optimize_band, repair_timing, BandCheck};
pub use banded::BandedMatrix;

use serde::{Deserialize, Serialize};

use crate::geom::{Pose2, Vec2};
use crate::grid::ClearanceField;
use crate::scalar::wrap_angle;
use crate::Scalar;

/// `|p - p1| + |p - p2| - |p1 - p2|`: zero exactly on the closed segment.
pub fn goal_line_residual<T: Scalar>(p: Vec2<T>, p1: Vec2<T>, p2: Vec2<T>) -> T {
    let r = p.distance(p1) + p.distance(p2) - p1.distance(p2);
    r.max(T::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotLimits<T> {
    pub v_max: T,
    pub omega_max: T,
    pub a_max: T,
    pub radius: T,
}

impl<T: Scalar> Default for RobotLimits<T> {
    fn default() -> Self {
        Self { v_max: T::lit(1.0), omega_max: T::lit(1.5), a_max: T::lit(1.0), radius: T::lit(0.3) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerParams<T> {
    /// Static clearance below which the penalty activates, meters.
    pub obstacle_clearance: T,
    /// Extra distance beyond the radius sum at which the pedestrian
    /// penalty activates, meters.
    pub pedestrian_margin: T,
    /// Pedestrians farther than this from a pose are ignored, meters.
    pub pedestrian_range: T,
    pub weight_time: T,
    pub weight_clearance: T,
    pub weight_kinematics: T,
    pub weight_goal_line: T,
    pub max_outer_iterations: usize,
    pub max_inner_iterations: usize,
    /// Inner loop stops when the summed pose displacement of an accepted
    /// step falls below this, meters.
    pub convergence_epsilon: T,
    pub speed_schedule: Vec<T>,
    pub initial_spacing: T,
    pub min_spacing: T,
    pub max_spacing: T,
}

impl<T: Scalar> Default for OptimizerParams<T> {
    fn default() -> Self {
        Self {
            obstacle_clearance: T::lit(0.45),
            pedestrian_margin: T::lit(0.2),
            pedestrian_range: T::lit(4.0),
            weight_time: T::lit(1.0),
            weight_clearance: T::lit(50.0),
            weight_kinematics: T::lit(10.0),
            weight_goal_line: T::lit(100.0),
            max_outer_iterations: 2,
            max_inner_iterations: 8,
            convergence_epsilon: T::lit(0.1),
            speed_schedule: [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|&s| T::lit(s)).collect(),
            initial_spacing: T::lit(0.25),
            min_spacing: T::lit(0.1),
            max_spacing: T::lit(0.4),
        }
    }
}

impl<T: Scalar> OptimizerParams<T> {
    /// Checks the documented parameter invariants.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.convergence_epsilon > T::zero()) {
            return Err("convergence_epsilon must be positive".into());
        }
        let s = &self.speed_schedule;
        if s.is_empty() || s.windows(2).any(|w| w[1] < w[0]) || *s.last().unwrap() != T::one() {
            return Err("speed_schedule must be ascending and end at 1".into());
        }
        if !(self.min_spacing > T::zero() && self.min_spacing < self.max_spacing) {
            return Err("spacing bounds must satisfy 0 < min < max".into());
        }
        Ok(())
    }
}

/// Constant-velocity pedestrian prediction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PedestrianPrediction<T> {
    pub position: Vec2<T>,
    pub velocity: Vec2<T>,
    pub radius: T,
}

impl<T: Scalar> PedestrianPrediction<T> {
    /// Position after `t` seconds with the velocity scaled by `s`.
    pub fn at(&self, t: T, s: T) -> Vec2<T> {
        self.position + self.velocity * (s * t)
    }
}

/// Everything the optimizer sees of the world in one cycle.
#[derive(Clone, Debug)]
pub struct Scene<'a, T> {
    /// Static obstacle clearance; `None` for an empty scene.
    pub field: Option<&'a ClearanceField>,
    pub pedestrians: Vec<PedestrianPrediction<T>>,
    pub start_heading: T,
    pub start_speed: T,
}

impl<'a, T: Scalar> Scene<'a, T> {
    pub fn empty() -> Self {
        Self { field: None, pedestrians: Vec::new(), start_heading: T::zero(), start_speed: T::zero() }
    }
}

/// One accepted or terminal inner iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub stage: usize,
    pub outer: usize,
    pub iteration: usize,
    pub objective: f64,
    /// Summed pose displacement of the step, meters.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandTrajectory<T> {
    pub poses: Vec<Pose2<T>>,
    pub dt: Vec<T>,
    pub goal_line_id: usize,
    pub total_time: T,
    pub feasible: bool,
    pub diverged: bool,
    pub trace: Vec<TraceRecord>,
}

impl<T: Scalar> BandTrajectory<T> {
    pub fn path_length(&self) -> T {
        self.poses.windows(2).fold(T::zero(), |acc, w| acc + w[0].position().distance(w[1].position()))
    }

    /// Time stamp of every pose.
    pub fn timestamps(&self) -> Vec<T> {
        let mut t = vec![T::zero(); self.poses.len()];
        for k in 0..self.dt.len() {
            t[k + 1] = t[k] + self.dt[k];
        }
        t
    }

    pub fn end(&self) -> Vec2<T> {
        self.poses.last().unwrap().position()
    }
}

/// Fastest feasible band; ties by shorter path, then lower goal-line id.
pub fn evaluate_and_select<T: Scalar>(bands: &[BandTrajectory<T>]) -> Option<&BandTrajectory<T>> {
    bands.iter().filter(|b| b.feasible).min_by(|a, b| {
        a.total_time
            .partial_cmp(&b.total_time)
            .unwrap()
            .then(a.path_length().partial_cmp(&b.path_length()).unwrap())
            .then(a.goal_line_id.cmp(&b.goal_line_id))
    })
}

/// `(v, omega)` realizing the first band segment as a constant-curvature
/// arc, clamped to the limits at constant curvature.
pub fn first_command<T: Scalar>(band: &BandTrajectory<T>, limits: &RobotLimits<T>) -> (T, T) {
    if band.poses.len() < 2 || band.dt.is_empty() {
        return (T::zero(), T::zero());
    }
    let p0 = band.poses[0];
    let p1 = band.poses[1];
    let dt = band.dt[0];
    let d = p1.position() - p0.position();
    let len = d.norm();
    let (v, w) = if len < T::lit(1e-6) {
        (T::zero(), wrap_angle(p1.theta - p0.theta) / dt)
    } else {
        let delta = wrap_angle(d.angle() - p0.theta);
        if delta.abs() > T::pi() * T::half() {
            // Target behind the robot: turn in place towards it.
            (T::zero(), delta.signum() * limits.omega_max)
        } else {
            let arc = if delta.abs() < T::lit(1e-9) { T::one() } else { delta / delta.sin() };
            (len / dt * arc, T::two() * delta / dt)
        }
    };
    let mut scale = T::one();
    if v.abs() > limits.v_max {
        scale = scale.min(limits.v_max / v.abs());
    }
    if w.abs() > limits.omega_max {
        scale = scale.min(limits.omega_max / w.abs());
    }
    (v * scale, w * scale)
}
