//! Levenberg-Marquardt refinement of one band.
//!
//! Variables are interleaved per pose as `[x_i, y_i, dt_{i-1}]` for
//! `i = 1..n`, which keeps the normal equations banded. The first pose is
//! the robot and stays fixed; the last pose is parametrized by its position
//! `t` in `[0, 1]` along the goal line (its `y` slot is unused), so the
//! endpoint can slide but never leave the line.

use crate::geom::{Pose2, Vec2};
use crate::scalar::wrap_angle;
use crate::Scalar;

use super::banded::BandedMatrix;
use super::{goal_line_residual, BandTrajectory, OptimizerParams, RobotLimits, Scene, TraceRecord};

const MIN_DT: f64 = 0.01;
/// Kinematic penalties activate slightly inside the limits so that the
/// solver sees them before they are violated.
const SPEED_MARGIN: f64 = 0.95;
const LIMIT_MARGIN: f64 = 0.9;

#[derive(Clone, Copy)]
enum Kind {
    Time(usize),
    Static(usize),
    Ped(usize, usize),
    Vel(usize),
    Acc(usize),
    AccStart,
    Turn(usize),
    Goal,
}

struct Block {
    kind: Kind,
    vars: [usize; 12],
    len: usize,
}

impl Block {
    fn vars(&self) -> &[usize] {
        &self.vars[..self.len]
    }
}

struct Problem<'s, 'a, T> {
    n: usize,
    start: Vec2<T>,
    line: (Vec2<T>, Vec2<T>),
    scene: &'s Scene<'a, T>,
    limits: &'s RobotLimits<T>,
    params: &'s OptimizerParams<T>,
    s: T,
    sw_clear: T,
    sw_kin: T,
    sw_goal: T,
}

/// Values frozen while differentiating: nearest static obstacle per pose
/// and pose time stamps.
struct Lin<T> {
    nearest: Vec<Option<Vec2<T>>>,
    times: Vec<T>,
}

fn pose_vars(i: usize, out: &mut Vec<usize>) {
    if i >= 1 {
        out.push(3 * (i - 1));
        out.push(3 * (i - 1) + 1);
    }
}

impl<'s, 'a, T: Scalar> Problem<'s, 'a, T> {
    fn nvars(&self) -> usize {
        3 * (self.n - 1)
    }

    fn line_point(&self, t: T) -> Vec2<T> {
        let t = t.max(T::zero()).min(T::one());
        self.line.0.lerp(self.line.1, t)
    }

    fn pos(&self, z: &[T], i: usize) -> Vec2<T> {
        if i == 0 {
            self.start
        } else if i == self.n - 1 {
            self.line_point(z[3 * (i - 1)])
        } else {
            Vec2::new(z[3 * (i - 1)], z[3 * (i - 1) + 1])
        }
    }

    fn dt(&self, z: &[T], k: usize) -> T {
        z[3 * k + 2]
    }

    fn phi(&self, z: &[T], k: usize) -> T {
        let d = self.pos(z, k + 1) - self.pos(z, k);
        if d.norm_sq() < T::lit(1e-18) {
            self.scene.start_heading
        } else {
            d.angle()
        }
    }

    fn theta(&self, z: &[T], k: usize) -> T {
        let th0 = self.scene.start_heading;
        if k == 0 {
            th0
        } else if k == 1 {
            th0 + T::two() * wrap_angle(self.phi(z, 0) - th0)
        } else if k + 1 < self.n {
            let a = self.phi(z, k - 1);
            a + wrap_angle(self.phi(z, k) - a) * T::half()
        } else {
            self.phi(z, k - 1)
        }
    }

    fn turn(&self, z: &[T], k: usize) -> T {
        let rot = if k == 0 {
            T::two() * wrap_angle(self.phi(z, 0) - self.scene.start_heading)
        } else {
            wrap_angle(self.theta(z, k + 1) - self.theta(z, k))
        };
        rot / self.dt(z, k)
    }

    fn speed(&self, z: &[T], k: usize) -> T {
        self.pos(z, k + 1).distance(self.pos(z, k)) / self.dt(z, k)
    }

    fn linearize(&self, z: &[T]) -> Lin<T> {
        let nearest = (0..self.n)
            .map(|i| {
                let f = self.scene.field?;
                let p = self.pos(z, i);
                f.nearest_obstacle(crate::Point::new(p.x.as_f64(), p.y.as_f64())).map(|o| o.cast())
            })
            .collect();
        let mut times = vec![T::zero(); self.n];
        for k in 0..self.n - 1 {
            times[k + 1] = times[k] + self.dt(z, k);
        }
        Lin { nearest, times }
    }

    fn blocks(&self, z: &[T], lin: &Lin<T>) -> Vec<Block> {
        let n = self.n;
        let mut out = Vec::with_capacity(8 * n);
        let mut tmp = Vec::with_capacity(12);
        let mut push = |kind: Kind, tmp: &mut Vec<usize>| {
            tmp.sort_unstable();
            tmp.dedup();
            let mut vars = [0usize; 12];
            vars[..tmp.len()].copy_from_slice(tmp);
            out.push(Block { kind, vars, len: tmp.len() });
            tmp.clear();
        };
        for k in 0..n - 1 {
            tmp.push(3 * k + 2);
            push(Kind::Time(k), &mut tmp);
        }
        for i in 1..n {
            if lin.nearest[i].is_some() {
                pose_vars(i, &mut tmp);
                push(Kind::Static(i), &mut tmp);
            }
            let p = self.pos(z, i);
            for (j, ped) in self.scene.pedestrians.iter().enumerate() {
                if ped.at(lin.times[i], self.s).distance(p) <= self.params.pedestrian_range {
                    pose_vars(i, &mut tmp);
                    push(Kind::Ped(i, j), &mut tmp);
                }
            }
        }
        for k in 0..n - 1 {
            pose_vars(k, &mut tmp);
            pose_vars(k + 1, &mut tmp);
            tmp.push(3 * k + 2);
            push(Kind::Vel(k), &mut tmp);
        }
        pose_vars(1, &mut tmp);
        tmp.push(2);
        push(Kind::AccStart, &mut tmp);
        for k in 0..n.saturating_sub(2) {
            for i in k..=k + 2 {
                pose_vars(i, &mut tmp);
            }
            tmp.push(3 * k + 2);
            tmp.push(3 * k + 5);
            push(Kind::Acc(k), &mut tmp);
        }
        for k in 0..n - 1 {
            let lo = if k == 0 { 0 } else { k - 1 };
            let hi = (k + 2).min(n - 1);
            for i in lo..=hi {
                pose_vars(i, &mut tmp);
            }
            tmp.push(3 * k + 2);
            push(Kind::Turn(k), &mut tmp);
        }
        pose_vars(n - 1, &mut tmp);
        push(Kind::Goal, &mut tmp);
        out
    }

    fn eval(&self, b: &Block, z: &[T], lin: &Lin<T>) -> T {
        let hinge = |x: T| x.max(T::zero());
        match b.kind {
            Kind::Time(k) => (self.params.weight_time * self.dt(z, k).max(T::zero())).sqrt(),
            Kind::Static(i) => {
                let o = lin.nearest[i].unwrap();
                let half = T::lit(self.scene.field.map_or(0.0, |f| f.half_cell()));
                let c = self.pos(z, i).distance(o) - half;
                self.sw_clear * hinge(self.params.obstacle_clearance - c)
            }
            Kind::Ped(i, j) => {
                let ped = &self.scene.pedestrians[j];
                let q = ped.at(lin.times[i], self.s);
                let target = self.limits.radius + ped.radius + self.params.pedestrian_margin;
                self.sw_clear * hinge(target - self.pos(z, i).distance(q))
            }
            Kind::Vel(k) => self.sw_kin * hinge(self.speed(z, k) - self.limits.v_max * T::lit(SPEED_MARGIN)),
            Kind::AccStart => {
                let a = (self.speed(z, 0) - self.scene.start_speed) / self.dt(z, 0);
                self.sw_kin * hinge(a - self.limits.a_max * T::lit(LIMIT_MARGIN))
            }
            Kind::Acc(k) => {
                let a = T::two() * (self.speed(z, k + 1) - self.speed(z, k)) / (self.dt(z, k) + self.dt(z, k + 1));
                self.sw_kin * hinge(a.abs() - self.limits.a_max * T::lit(LIMIT_MARGIN))
            }
            Kind::Turn(k) => self.sw_kin * hinge(self.turn(z, k).abs() - self.limits.omega_max * T::lit(LIMIT_MARGIN)),
            Kind::Goal => self.sw_goal * goal_line_residual(self.pos(z, self.n - 1), self.line.0, self.line.1),
        }
    }

    fn objective(&self, z: &[T]) -> T {
        let lin = self.linearize(z);
        self.blocks(z, &lin).iter().fold(T::zero(), |acc, b| {
            let r = self.eval(b, z, &lin);
            acc + r * r
        })
    }

    fn project(&self, z: &mut [T]) {
        let n = self.n;
        let last = 3 * (n - 2);
        z[last] = z[last].max(T::zero()).min(T::one());
        z[last + 1] = T::zero();
        for k in 0..n - 1 {
            z[3 * k + 2] = z[3 * k + 2].max(T::lit(MIN_DT));
        }
    }

    /// Normal equations `J^T J` (banded) and gradient `J^T r`.
    fn normal_equations(&self, z: &mut [T]) -> (BandedMatrix<T>, Vec<T>, T) {
        let lin = self.linearize(z);
        let blocks = self.blocks(z, &lin);
        let bw = blocks.iter().map(|b| b.vars().last().unwrap_or(&0) - b.vars().first().unwrap_or(&0)).max().unwrap_or(0);
        let nv = self.nvars();
        let mut a = BandedMatrix::zeros(nv, bw.max(1));
        let mut g = vec![T::zero(); nv];
        let mut f = T::zero();
        let mut jac = [T::zero(); 12];
        for b in &blocks {
            let r = self.eval(b, z, &lin);
            f = f + r * r;
            let vars = b.vars();
            let time_block = matches!(b.kind, Kind::Time(_));
            if r == T::zero() && !time_block {
                continue;
            }
            for (m, &v) in vars.iter().enumerate() {
                if let Kind::Time(k) = b.kind {
                    let dt = self.dt(z, k).max(T::lit(MIN_DT));
                    jac[m] = (self.params.weight_time / dt).sqrt() * T::half();
                    continue;
                }
                let orig = z[v];
                let mut h = T::epsilon().sqrt() * orig.abs().max(T::one());
                // The line parameter is clamped to [0, 1]: difference inwards.
                if v == 3 * (self.n - 2) && orig + h > T::one() {
                    h = -h;
                }
                z[v] = orig + h;
                let rp = self.eval(b, z, &lin);
                z[v] = orig;
                jac[m] = (rp - r) / h;
            }
            for (m, &vm) in vars.iter().enumerate() {
                g[vm] = g[vm] + jac[m] * r;
                for (q, &vq) in vars.iter().enumerate().take(m + 1) {
                    a.add(vm, vq, jac[m] * jac[q]);
                }
            }
        }
        (a, g, f)
    }
}

struct State<T> {
    pos: Vec<Vec2<T>>,
    t_end: T,
    dt: Vec<T>,
}

impl<T: Scalar> State<T> {
    fn to_z(&self) -> Vec<T> {
        let n = self.pos.len();
        let mut z = vec![T::zero(); 3 * (n - 1)];
        for i in 1..n {
            if i == n - 1 {
                z[3 * (i - 1)] = self.t_end;
            } else {
                z[3 * (i - 1)] = self.pos[i].x;
                z[3 * (i - 1) + 1] = self.pos[i].y;
            }
            z[3 * (i - 1) + 2] = self.dt[i - 1];
        }
        z
    }

    fn from_z(&mut self, z: &[T], p: &Problem<'_, '_, T>) {
        let n = self.pos.len();
        for i in 1..n {
            self.pos[i] = p.pos(z, i);
            self.dt[i - 1] = z[3 * (i - 1) + 2];
        }
        self.t_end = z[3 * (n - 2)].max(T::zero()).min(T::one());
    }

    /// Inserts midpoints into long segments and drops poses bounding short
    /// ones. Returns `true` if the pose count changed.
    fn resample(&mut self, min_sp: T, max_sp: T) -> bool {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < self.pos.len() {
            let len = self.pos[i].distance(self.pos[i + 1]);
            if len > max_sp {
                let mid = self.pos[i].lerp(self.pos[i + 1], T::half());
                let half = self.dt[i] * T::half();
                self.pos.insert(i + 1, mid);
                self.dt[i] = half;
                self.dt.insert(i + 1, half);
                changed = true;
            } else if len < min_sp && self.pos.len() > 2 {
                if i + 2 < self.pos.len() {
                    self.pos.remove(i + 1);
                    let merged = self.dt[i] + self.dt[i + 1];
                    self.dt.remove(i + 1);
                    self.dt[i] = merged;
                } else if i >= 1 {
                    self.pos.remove(i);
                    let merged = self.dt[i - 1] + self.dt[i];
                    self.dt.remove(i);
                    self.dt[i - 1] = merged;
                    i -= 1;
                } else {
                    i += 1;
                }
                changed = true;
            } else {
                i += 1;
            }
        }
        changed
    }
}

fn polyline_resample<T: Scalar>(pts: &[Vec2<T>], spacing: T) -> Vec<Vec2<T>> {
    let mut out = vec![pts[0]];
    let mut carry = T::zero();
    for w in pts.windows(2) {
        let len = w[0].distance(w[1]);
        let mut s = spacing - carry;
        while s < len {
            out.push(w[0].lerp(w[1], s / len));
            s = s + spacing;
        }
        carry = len - (s - spacing);
    }
    let last = *pts.last().unwrap();
    if out.last().unwrap().distance(last) < spacing * T::lit(0.4) && out.len() > 1 {
        out.pop();
    }
    out.push(last);
    out
}

/// Heading of every pose: the robot heading, then the arc-consistent
/// heading after the first segment, then bisectors of adjacent segments.
fn headings<T: Scalar>(pos: &[Vec2<T>], start_heading: T) -> Vec<T> {
    let n = pos.len();
    let phi = |k: usize| {
        let d = pos[k + 1] - pos[k];
        if d.norm_sq() < T::lit(1e-18) {
            start_heading
        } else {
            d.angle()
        }
    };
    (0..n)
        .map(|k| {
            if k == 0 {
                start_heading
            } else if k == 1 {
                wrap_angle(start_heading + T::two() * wrap_angle(phi(0) - start_heading))
            } else if k + 1 < n {
                let a = phi(k - 1);
                wrap_angle(a + wrap_angle(phi(k) - a) * T::half())
            } else {
                phi(k - 1)
            }
        })
        .collect()
}

/// Smallest `dt` such that `L / dt <= v_prev + a (dt_prev + dt) / 2`.
fn accel_limited_dt<T: Scalar>(len: T, v_prev: T, dt_prev: T, a: T) -> T {
    let b = v_prev + a * dt_prev * T::half();
    (-b + (b * b + T::two() * a * len).sqrt()) / a
}

/// Raises segment durations until speed, turn-rate and acceleration limits
/// hold. Only ever increases `dt`.
pub fn repair_timing<T: Scalar>(
    poses: &[Pose2<T>],
    dt: &mut [T],
    limits: &RobotLimits<T>,
    start_speed: T,
) {
    let n = poses.len();
    let len: Vec<T> = (0..n - 1).map(|k| poses[k].position().distance(poses[k + 1].position())).collect();
    let rot: Vec<T> = (0..n - 1).map(|k| turn_rotation(poses, k)).collect();
    let slack = T::lit(1.0 + 1e-9);
    for k in 0..n - 1 {
        let need = (len[k] / limits.v_max).max(rot[k].abs() / limits.omega_max) * slack;
        dt[k] = dt[k].max(need).max(T::lit(MIN_DT));
    }
    let a = limits.a_max;
    for _ in 0..4 * n + 10 {
        let mut changed = false;
        let v0 = len[0] / dt[0];
        if v0 - start_speed > a * dt[0] {
            // L / dt <= v_s + a dt
            let need = (-start_speed + (start_speed * start_speed + T::lit(4.0) * a * len[0]).sqrt()) / (T::two() * a);
            dt[0] = dt[0].max(need * slack);
            changed = true;
        }
        for k in 0..n.saturating_sub(2) {
            let vk = len[k] / dt[k];
            let vn = len[k + 1] / dt[k + 1];
            let allowed = a * (dt[k] + dt[k + 1]) * T::half();
            if vn - vk > allowed * slack {
                dt[k + 1] = dt[k + 1].max(accel_limited_dt(len[k + 1], vk, dt[k], a) * slack);
                changed = true;
            } else if vk - vn > allowed * slack {
                dt[k] = dt[k].max(accel_limited_dt(len[k], vn, dt[k + 1], a) * slack);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

fn turn_rotation<T: Scalar>(poses: &[Pose2<T>], k: usize) -> T {
    if k == 0 {
        let d = poses[1].position() - poses[0].position();
        if d.norm_sq() < T::lit(1e-18) {
            wrap_angle(poses[1].theta - poses[0].theta)
        } else {
            T::two() * wrap_angle(d.angle() - poses[0].theta)
        }
    } else {
        wrap_angle(poses[k + 1].theta - poses[k].theta)
    }
}

/// Result of the feasibility check of a timed band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandCheck {
    pub kinematics_ok: bool,
    pub clearance_ok: bool,
    /// Smallest static clearance over poses and segment midpoints, meters.
    pub min_static_clearance: f64,
    /// Smallest gap between robot and pedestrian disks, meters.
    pub min_pedestrian_gap: f64,
}

impl BandCheck {
    pub fn feasible(&self) -> bool {
        self.kinematics_ok && self.clearance_ok
    }
}

/// Spacetime clearance (pedestrians at full predicted speed) and kinematic
/// limits, checked at every pose and segment midpoint.
pub fn check_band<T: Scalar>(band: &BandTrajectory<T>, scene: &Scene<'_, T>, limits: &RobotLimits<T>) -> BandCheck {
    let n = band.poses.len();
    let tol = 1e-6;
    let mut kin = band.dt.iter().all(|&d| d > T::zero() && d.is_finite());
    if kin {
        for k in 0..n - 1 {
            let len = band.poses[k].position().distance(band.poses[k + 1].position());
            let v = (len / band.dt[k]).as_f64();
            let w = (turn_rotation(&band.poses, k) / band.dt[k]).as_f64();
            if v > limits.v_max.as_f64() * (1.0 + tol) + tol || w.abs() > limits.omega_max.as_f64() * (1.0 + tol) + tol {
                kin = false;
            }
            if k + 2 < n {
                let len2 = band.poses[k + 1].position().distance(band.poses[k + 2].position());
                let v2 = (len2 / band.dt[k + 1]).as_f64();
                let a = 2.0 * (v2 - v) / (band.dt[k] + band.dt[k + 1]).as_f64();
                if a.abs() > limits.a_max.as_f64() * (1.0 + tol) + tol {
                    kin = false;
                }
            }
        }
    }
    let times = band.timestamps();
    let radius = limits.radius.as_f64();
    let mut min_static = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    let mut probe = |p: Vec2<T>, t: T| {
        if let Some(f) = scene.field {
            min_static = min_static.min(f.clearance(crate::Point::new(p.x.as_f64(), p.y.as_f64())));
        }
        for ped in &scene.pedestrians {
            let gap = p.distance(ped.at(t, T::one())) - ped.radius - limits.radius;
            min_gap = min_gap.min(gap.as_f64());
        }
    };
    // The first pose is the current robot state and cannot be changed.
    for k in 0..n {
        if k > 0 {
            probe(band.poses[k].position(), times[k]);
        }
        if k + 1 < n {
            let mid = band.poses[k].position().lerp(band.poses[k + 1].position(), T::half());
            probe(mid, (times[k] + times[k + 1]) * T::half());
        }
    }
    let clearance_ok = min_static >= radius - tol && min_gap >= -tol;
    BandCheck { kinematics_ok: kin, clearance_ok, min_static_clearance: min_static, min_pedestrian_gap: min_gap }
}

/// Refines `seed` (starting at the robot) into a timed band ending on the
/// goal line `line`.
///
/// For every speed fraction of the schedule, pedestrian predictions are
/// scaled by it and the band is minimized by damped Gauss-Newton steps that
/// are accepted only if they lower the objective. Inner iterations stop when
/// an accepted step moves the poses by less than the convergence epsilon in
/// total and improves the objective by less than 0.1%. Durations are then repaired against the limits and the result is
/// checked at full pedestrian speed.
pub fn optimize_band<T: Scalar>(
    seed: &[Vec2<T>],
    line: (Vec2<T>, Vec2<T>),
    goal_line_id: usize,
    scene: &Scene<'_, T>,
    limits: &RobotLimits<T>,
    params: &OptimizerParams<T>,
) -> BandTrajectory<T> {
    assert!(seed.len() >= 2, "seed needs at least two waypoints");
    let mut pts = polyline_resample(seed, params.initial_spacing);
    let end = *seed.last().unwrap();
    let ab = line.1 - line.0;
    let t_end = if ab.norm_sq() > T::zero() {
        ((end - line.0).dot(ab) / ab.norm_sq()).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    *pts.last_mut().unwrap() = line.0.lerp(line.1, t_end);
    let dt = pts
        .windows(2)
        .map(|w| (w[0].distance(w[1]) / limits.v_max).max(T::lit(MIN_DT)))
        .collect();
    let mut state = State { pos: pts, t_end, dt };
    let mut trace = Vec::new();
    let mut diverged = false;

    'stages: for (stage, &s) in params.speed_schedule.iter().enumerate() {
        let mut converged = false;
        for outer in 0..params.max_outer_iterations {
            let resampled = state.resample(params.min_spacing, params.max_spacing);
            if outer > 0 && !resampled && converged {
                break;
            }
            let prob = Problem {
                n: state.pos.len(),
                start: state.pos[0],
                line,
                scene,
                limits,
                params,
                s,
                sw_clear: params.weight_clearance.sqrt(),
                sw_kin: params.weight_kinematics.sqrt(),
                sw_goal: params.weight_goal_line.sqrt(),
            };
            if prob.n < 2 {
                break;
            }
            let mut z = state.to_z();
            let mut lambda = T::lit(1e-2);
            converged = false;
            for iteration in 0..params.max_inner_iterations {
                let (jtj, g, f) = prob.normal_equations(&mut z);
                if !f.is_finite() {
                    diverged = true;
                    break 'stages;
                }
                let mut accepted = None;
                while lambda < T::lit(1e7) {
                    let mut a = jtj.clone();
                    for v in 0..a.size() {
                        let d = jtj.get(v, v).max(T::lit(1e-6));
                        a.add(v, v, lambda * d);
                    }
                    let rhs: Vec<T> = g.iter().map(|&x| -x).collect();
                    let Some(step) = a.solve(&rhs) else {
                        lambda = lambda * T::lit(10.0);
                        continue;
                    };
                    let mut z2: Vec<T> = z.iter().zip(&step).map(|(&a, &b)| a + b).collect();
                    prob.project(&mut z2);
                    let f2 = prob.objective(&z2);
                    if f2.is_finite() && f2 < f {
                        accepted = Some((z2, f2));
                        lambda = (lambda / T::lit(10.0)).max(T::lit(1e-7));
                        break;
                    }
                    lambda = lambda * T::lit(10.0);
                }
                let Some((z2, f2)) = accepted else {
                    trace.push(TraceRecord { stage, outer, iteration, objective: f.as_f64(), delta: 0.0 });
                    converged = true;
                    break;
                };
                let delta = (1..prob.n).fold(T::zero(), |acc, i| acc + prob.pos(&z2, i).distance(prob.pos(&z, i)));
                trace.push(TraceRecord { stage, outer, iteration, objective: f2.as_f64(), delta: delta.as_f64() });
                z = z2;
                if delta < params.convergence_epsilon && f - f2 < T::lit(1e-3) * f {
                    converged = true;
                    break;
                }
            }
            state.from_z(&z, &prob);
        }
    }

    let th = headings(&state.pos, scene.start_heading);
    let poses: Vec<Pose2<T>> = state.pos.iter().zip(&th).map(|(p, &t)| Pose2::new(p.x, p.y, t)).collect();
    let mut dt = state.dt.clone();
    let finite = poses.iter().all(|p| p.position().is_finite() && p.theta.is_finite()) && dt.iter().all(|d| d.is_finite());
    diverged |= !finite;
    if finite {
        repair_timing(&poses, &mut dt, limits, scene.start_speed);
    }
    let total_time = dt.iter().fold(T::zero(), |a, &b| a + b);
    let mut band = BandTrajectory { poses, dt, goal_line_id, total_time, feasible: false, diverged, trace };
    if !diverged {
        band.feasible = check_band(&band, scene, limits).feasible();
    }
    band
}
