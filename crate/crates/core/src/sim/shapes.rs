//! Static obstacle shapes as unions of oriented rectangles and disks.

use serde::{Deserialize, Serialize};

use crate::grid::OccupancyGrid;
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeKind {
    #[serde(rename = "line")]
    Line,
    #[serde(rename = "rectangle")]
    Rectangle,
    #[serde(rename = "circle")]
    Circle,
    T,
    X,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] = [ShapeKind::Line, ShapeKind::Rectangle, ShapeKind::Circle, ShapeKind::T, ShapeKind::X];
}

/// A static obstacle. `length`/`width` size the bars of line, rectangle, T
/// and X shapes; circles use `radius`. The T stem hangs from the bar centre
/// along local -y with the same length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pub kind: ShapeKind,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub length: f64,
    #[serde(default)]
    pub width: f64,
    #[serde(default)]
    pub radius: f64,
}

impl Shape {
    pub fn bar(kind: ShapeKind, x: f64, y: f64, theta: f64, length: f64, width: f64) -> Self {
        Self { kind, x, y, theta, length, width, radius: 0.0 }
    }

    pub fn circle(x: f64, y: f64, radius: f64) -> Self {
        Self { kind: ShapeKind::Circle, x, y, theta: 0.0, length: 0.0, width: 0.0, radius }
    }

    pub fn center(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = match self.kind {
            ShapeKind::Circle => self.radius > 0.0,
            _ => self.length > 0.0 && self.width > 0.0,
        };
        if ok && self.x.is_finite() && self.y.is_finite() && self.theta.is_finite() {
            Ok(())
        } else {
            Err(format!("invalid {:?} shape at ({}, {})", self.kind, self.x, self.y))
        }
    }

    pub fn primitives(&self) -> Vec<Primitive> {
        let c = self.center();
        let (hl, hw) = (self.length * 0.5, self.width * 0.5);
        match self.kind {
            ShapeKind::Circle => vec![Primitive::Disk { center: c, radius: self.radius }],
            ShapeKind::Line | ShapeKind::Rectangle => {
                vec![Primitive::Rect { center: c, half: Point::new(hl, hw), theta: self.theta }]
            }
            ShapeKind::T => {
                let down = Point::from_angle(self.theta).perp() * -hl;
                vec![
                    Primitive::Rect { center: c, half: Point::new(hl, hw), theta: self.theta },
                    Primitive::Rect { center: c + down, half: Point::new(hw, hl), theta: self.theta },
                ]
            }
            ShapeKind::X => {
                let q = std::f64::consts::FRAC_PI_4;
                vec![
                    Primitive::Rect { center: c, half: Point::new(hl, hw), theta: self.theta + q },
                    Primitive::Rect { center: c, half: Point::new(hl, hw), theta: self.theta - q },
                ]
            }
        }
    }

    /// Radius of a disk around the centre that contains the shape.
    pub fn bounding_radius(&self) -> f64 {
        self.primitives().iter().map(|p| p.center().distance(self.center()) + p.bounding_radius()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Primitive {
    Rect { center: Point, half: Point, theta: f64 },
    Disk { center: Point, radius: f64 },
}

impl Primitive {
    pub fn center(&self) -> Point {
        match *self {
            Primitive::Rect { center, .. } | Primitive::Disk { center, .. } => center,
        }
    }

    pub fn bounding_radius(&self) -> f64 {
        match *self {
            Primitive::Rect { half, .. } => half.norm(),
            Primitive::Disk { radius, .. } => radius,
        }
    }

    /// Signed distance to the boundary, negative inside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        match *self {
            Primitive::Disk { center, radius } => p.distance(center) - radius,
            Primitive::Rect { center, half, theta } => {
                let d = p - center;
                let (s, c) = theta.sin_cos();
                let lx = (d.x * c + d.y * s).abs() - half.x;
                let ly = (-d.x * s + d.y * c).abs() - half.y;
                let outside = Point::new(lx.max(0.0), ly.max(0.0)).norm();
                outside + lx.max(ly).min(0.0)
            }
        }
    }

    /// Axis-aligned bounds `(min, max)`.
    pub fn aabb(&self) -> (Point, Point) {
        match *self {
            Primitive::Disk { center, radius } => (center - Point::new(radius, radius), center + Point::new(radius, radius)),
            Primitive::Rect { center, half, theta } => {
                let (s, c) = theta.sin_cos();
                let ex = half.x * c.abs() + half.y * s.abs();
                let ey = half.x * s.abs() + half.y * c.abs();
                (center - Point::new(ex, ey), center + Point::new(ex, ey))
            }
        }
    }
}

/// Signed distance from `p` to the nearest primitive (`f64::INFINITY` if none).
pub fn distance_to(prims: &[Primitive], p: Point) -> f64 {
    prims.iter().map(|q| q.signed_distance(p)).fold(f64::INFINITY, f64::min)
}

/// Marks every cell whose centre satisfies `inside` within the given bounds.
pub(crate) fn fill_region(grid: &mut OccupancyGrid, lo: Point, hi: Point, inside: impl Fn(Point) -> bool) {
    let res = grid.resolution();
    let o = grid.origin();
    let x0 = (((lo.x - o.x) / res) - 0.5).floor().max(0.0) as i64;
    let y0 = (((lo.y - o.y) / res) - 0.5).floor().max(0.0) as i64;
    let x1 = ((((hi.x - o.x) / res) - 0.5).ceil() as i64).min(grid.width() as i64 - 1);
    let y1 = ((((hi.y - o.y) / res) - 0.5).ceil() as i64).min(grid.height() as i64 - 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let c = crate::grid::GridIndex::new(x as i32, y as i32);
            if inside(grid.cell_center(c)) {
                grid.set(c, true);
            }
        }
    }
}

/// Rasterizes primitives: a cell is occupied when its centre lies inside.
pub fn rasterize_primitives(grid: &mut OccupancyGrid, prims: &[Primitive]) {
    for p in prims {
        let (lo, hi) = p.aabb();
        fill_region(grid, lo, hi, |q| p.signed_distance(q) <= 0.0);
    }
}

/// Rasterizes a disk: a cell is occupied when its centre lies within `radius`.
pub fn rasterize_disk(grid: &mut OccupancyGrid, center: Point, radius: f64) {
    let r = Point::new(radius, radius);
    fill_region(grid, center - r, center + r, |q| q.distance(center) <= radius);
}
