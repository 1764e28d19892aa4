use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;
use crate::Point;

/// Integer cell coordinate. Ordering is lexicographic on `(x, y)`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct GridIndex {
    pub x: i32,
    pub y: i32,
}

impl GridIndex {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    pub fn chebyshev(self, o: Self) -> i32 {
        (self.x - o.x).abs().max((self.y - o.y).abs())
    }

    /// Euclidean distance in cells.
    pub fn dist(self, o: Self) -> f64 {
        let dx = (self.x - o.x) as f64;
        let dy = (self.y - o.y) as f64;
        dx.hypot(dy)
    }

    pub fn dist_sq(self, o: Self) -> i64 {
        let dx = (self.x - o.x) as i64;
        let dy = (self.y - o.y) as i64;
        dx * dx + dy * dy
    }

    /// The 8 neighbours, clockwise starting north (y grows upward).
    pub fn neighbors8(self) -> [GridIndex; 8] {
        NEIGHBORS8_CW.map(|(dx, dy)| self.offset(dx, dy))
    }
}

impl fmt::Display for GridIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Clockwise neighbour offsets in a y-up frame: N, NE, E, SE, S, SW, W, NW.
pub const NEIGHBORS8_CW: [(i32, i32); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
];

pub const NEIGHBORS4: [(i32, i32); 4] = [(0, 1), (1, 0), (0, -1), (-1, 0)];

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("resolution must be positive, got {0}")]
    BadResolution(f64),
    #[error("expected {expected} cells, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("malformed grid header: {0}")]
    Header(String),
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },
}

/// Binary local map. Cell `(x, y)` covers the square whose lower-left corner
/// is `origin + (x, y) * resolution`; `true` means occupied.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    resolution: f64,
    origin: Point,
    cells: Vec<bool>,
}

impl OccupancyGrid {
    pub fn new(width: usize, height: usize, resolution: f64, origin: Point) -> Result<Self, GridError> {
        Self::from_cells(width, height, resolution, origin, vec![false; width * height])
    }

    pub fn from_cells(
        width: usize,
        height: usize,
        resolution: f64,
        origin: Point,
        cells: Vec<bool>,
    ) -> Result<Self, GridError> {
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(GridError::BadResolution(resolution));
        }
        if cells.len() != width * height {
            return Err(GridError::SizeMismatch { expected: width * height, got: cells.len() });
        }
        Ok(Self { width, height, resolution, origin, cells })
    }

    /// All-free grid at unit origin offset zero; convenient for tests.
    pub fn empty(width: usize, height: usize, resolution: f64) -> Self {
        Self::new(width, height, resolution, Vec2::zero()).expect("valid grid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn contains(&self, c: GridIndex) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as usize) < self.width && (c.y as usize) < self.height
    }

    #[inline]
    pub fn linear(&self, c: GridIndex) -> usize {
        c.y as usize * self.width + c.x as usize
    }

    pub fn index_of(&self, i: usize) -> GridIndex {
        GridIndex::new((i % self.width) as i32, (i / self.width) as i32)
    }

    /// `M(p)`; cells outside the map read as free.
    #[inline]
    pub fn is_occupied(&self, c: GridIndex) -> bool {
        self.contains(c) && self.cells[self.linear(c)]
    }

    pub fn set(&mut self, c: GridIndex, occupied: bool) {
        if self.contains(c) {
            let i = self.linear(c);
            self.cells[i] = occupied;
        }
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn iter_indices(&self) -> impl Iterator<Item = GridIndex> + '_ {
        (0..self.height as i32).flat_map(move |y| (0..self.width as i32).map(move |x| GridIndex::new(x, y)))
    }

    pub fn cell_center(&self, c: GridIndex) -> Point {
        Vec2::new(
            self.origin.x + (c.x as f64 + 0.5) * self.resolution,
            self.origin.y + (c.y as f64 + 0.5) * self.resolution,
        )
    }

    /// Cell containing the world point (may lie outside the map).
    pub fn world_to_cell(&self, p: Point) -> GridIndex {
        GridIndex::new(
            ((p.x - self.origin.x) / self.resolution).floor() as i32,
            ((p.y - self.origin.y) / self.resolution).floor() as i32,
        )
    }

    pub fn is_border(&self, c: GridIndex) -> bool {
        self.contains(c)
            && (c.x == 0 || c.y == 0 || c.x as usize == self.width - 1 || c.y as usize == self.height - 1)
    }

    pub fn world_min(&self) -> Point {
        self.origin
    }

    pub fn world_max(&self) -> Point {
        Vec2::new(
            self.origin.x + self.width as f64 * self.resolution,
            self.origin.y + self.height as f64 * self.resolution,
        )
    }

    pub fn world_center(&self) -> Point {
        (self.world_min() + self.world_max()) * 0.5
    }

    /// Border cells as a closed loop, clockwise (y up) starting at `(0, 0)`:
    /// up the left column, right along the top row, down the right column,
    /// left along the bottom row.
    pub fn border_loop(&self) -> Vec<GridIndex> {
        let (w, h) = (self.width as i32, self.height as i32);
        if w == 0 || h == 0 {
            return Vec::new();
        }
        if w == 1 {
            return (0..h).map(|y| GridIndex::new(0, y)).collect();
        }
        if h == 1 {
            return (0..w).map(|x| GridIndex::new(x, 0)).collect();
        }
        let mut out = Vec::with_capacity(2 * (w + h) as usize - 4);
        out.extend((0..h).map(|y| GridIndex::new(0, y)));
        out.extend((1..w).map(|x| GridIndex::new(x, h - 1)));
        out.extend((0..h - 1).rev().map(|y| GridIndex::new(w - 1, y)));
        out.extend((1..w - 1).rev().map(|x| GridIndex::new(x, 0)));
        out
    }

    /// Serialises into the plain-text fixture format.
    pub fn to_fixture(&self) -> String {
        let mut s = format!("{} {} {}\n", self.width, self.height, self.resolution);
        for y in 0..self.height {
            for x in 0..self.width {
                s.push(if self.cells[y * self.width + x] { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }
}

impl FromStr for OccupancyGrid {
    type Err = GridError;

    /// Parses `width height resolution` followed by `height` rows of `#`/`.`;
    /// row 0 is `y = 0`. Blank lines are ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().map(str::trim_end).filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| GridError::Header("empty input".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(GridError::Header(header.to_string()));
        }
        let width: usize = parts[0].parse().map_err(|_| GridError::Header(header.to_string()))?;
        let height: usize = parts[1].parse().map_err(|_| GridError::Header(header.to_string()))?;
        let resolution: f64 = parts[2].parse().map_err(|_| GridError::Header(header.to_string()))?;
        let mut cells = Vec::with_capacity(width * height);
        for row in 0..height {
            let line = lines.next().ok_or(GridError::Row { row, msg: "missing row".into() })?;
            let line = line.trim();
            if line.chars().count() != width {
                return Err(GridError::Row {
                    row,
                    msg: format!("expected {width} characters, got {}", line.chars().count()),
                });
            }
            for ch in line.chars() {
                match ch {
                    '#' => cells.push(true),
                    '.' => cells.push(false),
                    other => {
                        return Err(GridError::Row { row, msg: format!("unexpected character {other:?}") })
                    }
                }
            }
        }
        if lines.next().is_some() {
            return Err(GridError::Row { row: height, msg: "trailing rows".into() });
        }
        Self::from_cells(width, height, resolution, Vec2::zero(), cells)
    }
}
