//! Planar vectors and poses, generic over the scalar type.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::scalar::{wrap_angle, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn from_angle(theta: T) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    /// Unit vector, or zero for a (near) zero vector.
    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n > T::epsilon() {
            self * (T::one() / n)
        } else {
            Self::zero()
        }
    }

    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn cast<U: Scalar>(self) -> Vec2<U> {
        Vec2::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()))
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> AddAssign for Vec2<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> SubAssign for Vec2<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Planar pose: position plus heading in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Pose2<T> {
    pub x: T,
    pub y: T,
    pub theta: T,
}

impl<T: Scalar> Pose2<T> {
    pub fn new(x: T, y: T, theta: T) -> Self {
        Self { x, y, theta }
    }

    pub fn position(&self) -> Vec2<T> {
        Vec2::new(self.x, self.y)
    }

    pub fn heading(&self) -> Vec2<T> {
        Vec2::from_angle(self.theta)
    }
}

/// Euclidean distance from `p` to the closed segment `a`-`b`.
pub fn point_segment_distance<T: Scalar>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    closest_point_on_segment(p, a, b).distance(p)
}

pub fn closest_point_on_segment<T: Scalar>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> Vec2<T> {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq <= T::epsilon() {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).max(T::zero()).min(T::one());
    a + ab * t
}

/// Signed angle swept by the polyline `points` as seen from `center`
/// (counterclockwise positive).
pub fn winding_angle<T: Scalar>(points: &[Vec2<T>], center: Vec2<T>) -> T {
    points
        .windows(2)
        .map(|w| {
            let a = w[0] - center;
            let b = w[1] - center;
            wrap_angle(b.angle() - a.angle())
        })
        .fold(T::zero(), |acc, d| acc + d)
}

pub fn polyline_length<T: Scalar>(points: &[Vec2<T>]) -> T {
    points
        .windows(2)
        .map(|w| w[0].distance(w[1]))
        .fold(T::zero(), |acc, d| acc + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_clamps_to_endpoints() {
        let a = Vec2::new(0.0, 0.0);
        let b = Vec2::new(2.0, 0.0);
        assert_eq!(point_segment_distance(Vec2::new(1.0, 1.0), a, b), 1.0);
        assert_eq!(point_segment_distance(Vec2::new(3.0, 0.0), a, b), 1.0);
        assert_eq!(point_segment_distance(Vec2::new(1.0, 0.0), a, b), 0.0);
    }

    #[test]
    fn half_turn_winding() {
        let pts: Vec<Vec2<f64>> = (0..=16)
            .map(|k| Vec2::from_angle(std::f64::consts::PI * k as f64 / 16.0))
            .collect();
        let w = winding_angle(&pts, Vec2::zero());
        assert!((w - std::f64::consts::PI).abs() < 1e-12);
        let rev: Vec<_> = pts.iter().rev().copied().collect();
        assert!((winding_angle(&rev, Vec2::zero()) + std::f64::consts::PI).abs() < 1e-12);
    }
}
