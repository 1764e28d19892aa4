//! Social-force pedestrians and the unicycle robot.

use serde::{Deserialize, Serialize};

use super::shapes::Primitive;
use crate::scalar::wrap_angle;
use crate::{Point, Pose};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SocialForce {
    /// Relaxation time of the goal attraction, seconds.
    pub tau: f64,
    /// Repulsion magnitude, m/s^2.
    pub strength: f64,
    /// Repulsion range, meters.
    pub range: f64,
    /// Interactions beyond this centre distance are ignored, meters.
    pub cutoff: f64,
    /// Speed cap as a multiple of the desired speed.
    pub overshoot: f64,
    /// A waypoint counts as reached within this distance, meters.
    pub arrival: f64,
    pub mass: f64,
}

impl Default for SocialForce {
    fn default() -> Self {
        Self { tau: 0.5, strength: 2.0, range: 0.4, cutoff: 3.0, overshoot: 1.3, arrival: 0.5, mass: 1.0 }
    }
}

/// A pedestrian cycling through `waypoints`; `goal` is the current target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pedestrian {
    pub position: Point,
    pub velocity: Point,
    pub goal: Point,
    pub radius: f64,
    pub desired_speed: f64,
    #[serde(default)]
    pub waypoints: Vec<Point>,
}

impl Pedestrian {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.radius > 0.0 && self.desired_speed > 0.0) || !self.position.is_finite() || !self.goal.is_finite() {
            return Err(format!("invalid pedestrian at ({}, {})", self.position.x, self.position.y));
        }
        Ok(())
    }

    fn next_goal(&self) -> Point {
        match self.waypoints.iter().position(|w| *w == self.goal) {
            Some(i) => self.waypoints[(i + 1) % self.waypoints.len()],
            None => self.waypoints.first().copied().unwrap_or(self.goal),
        }
    }
}

/// Force on pedestrian `i` from the other pedestrians and the static
/// primitives; the robot exerts none.
pub fn social_force(i: usize, peds: &[Pedestrian], prims: &[Primitive], sf: &SocialForce) -> Point {
    let p = &peds[i];
    let to_goal = p.goal - p.position;
    let desired = if to_goal.norm() > 1e-9 { to_goal.normalized() * p.desired_speed } else { Point::zero() };
    let mut f = (desired - p.velocity) * (1.0 / sf.tau);
    for (j, q) in peds.iter().enumerate() {
        let d = p.position - q.position;
        let dist = d.norm();
        if j == i || dist > sf.cutoff || dist < 1e-9 {
            continue;
        }
        f += d * (sf.strength * ((p.radius + q.radius - dist) / sf.range).exp() / dist);
    }
    for prim in prims {
        if prim.center().distance(p.position) - prim.bounding_radius() > sf.cutoff {
            continue;
        }
        let dist = prim.signed_distance(p.position);
        if dist > sf.cutoff {
            continue;
        }
        let h = 1e-5;
        let n = Point::new(
            prim.signed_distance(p.position + Point::new(h, 0.0)) - prim.signed_distance(p.position - Point::new(h, 0.0)),
            prim.signed_distance(p.position + Point::new(0.0, h)) - prim.signed_distance(p.position - Point::new(0.0, h)),
        );
        if n.norm() < 1e-12 {
            continue;
        }
        f += n.normalized() * (sf.strength * ((p.radius - dist) / sf.range).exp());
    }
    f * (1.0 / sf.mass)
}

/// Advances all pedestrians by `dt` with forces from the pre-step state.
pub fn step_pedestrians(peds: &[Pedestrian], prims: &[Primitive], dt: f64, sf: &SocialForce) -> Vec<Pedestrian> {
    let forces: Vec<Point> = (0..peds.len()).map(|i| social_force(i, peds, prims, sf)).collect();
    peds.iter()
        .zip(forces)
        .map(|(p, f)| {
            let mut q = p.clone();
            q.velocity = p.velocity + f * dt;
            let cap = p.desired_speed * sf.overshoot;
            if q.velocity.norm() > cap {
                q.velocity = q.velocity.normalized() * cap;
            }
            q.position = p.position + q.velocity * dt;
            if q.position.distance(q.goal) < sf.arrival {
                q.goal = q.next_goal();
            }
            q
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub pose: Pose,
    pub v: f64,
    pub omega: f64,
    pub radius: f64,
    pub v_max: f64,
    pub omega_max: f64,
    pub a_max: f64,
}

/// Applies `(v, omega)` for `dt`: both clamped to the limits, `v` slewed by
/// at most `a_max * dt`, then the pose integrated exactly along the arc.
pub fn step_robot(state: &RobotState, cmd: (f64, f64), dt: f64) -> RobotState {
    let target = cmd.0.clamp(-state.v_max, state.v_max);
    let dv = (target - state.v).clamp(-state.a_max * dt, state.a_max * dt);
    let v = (state.v + dv).clamp(-state.v_max, state.v_max);
    let w = cmd.1.clamp(-state.omega_max, state.omega_max);
    let Pose { x, y, theta } = state.pose;
    let pose = if w.abs() < 1e-6 {
        Pose::new(x + v * theta.cos() * dt, y + v * theta.sin() * dt, theta)
    } else {
        let th = theta + w * dt;
        let r = v / w;
        Pose::new(x + r * (th.sin() - theta.sin()), y - r * (th.cos() - theta.cos()), wrap_angle(th))
    };
    RobotState { pose, v, omega: w, ..*state }
}
