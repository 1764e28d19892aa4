use super::map::GridIndex;

/// Dense bitmap over an axis-aligned window of cell space. Cells outside
/// the window read as unset, so masks can describe sets that extend past
/// the local map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMask {
    min: GridIndex,
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl CellMask {
    /// Window spanning `min..=max` inclusive.
    pub fn new(min: GridIndex, max: GridIndex) -> Self {
        let width = (max.x - min.x + 1).max(0) as usize;
        let height = (max.y - min.y + 1).max(0) as usize;
        Self { min, width, height, bits: vec![false; width * height] }
    }

    pub fn from_cells(cells: &[GridIndex], pad: i32) -> Self {
        let (lo, hi) = bounding_box(cells).unwrap_or((GridIndex::new(0, 0), GridIndex::new(-1, -1)));
        let mut m = Self::new(lo.offset(-pad, -pad), hi.offset(pad, pad));
        for &c in cells {
            m.insert(c);
        }
        m
    }

    pub fn min(&self) -> GridIndex {
        self.min
    }

    pub fn max(&self) -> GridIndex {
        self.min.offset(self.width as i32 - 1, self.height as i32 - 1)
    }

    #[inline]
    fn slot(&self, c: GridIndex) -> Option<usize> {
        let x = c.x - self.min.x;
        let y = c.y - self.min.y;
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            None
        } else {
            Some(y as usize * self.width + x as usize)
        }
    }

    #[inline]
    pub fn contains(&self, c: GridIndex) -> bool {
        self.slot(c).map_or(false, |i| self.bits[i])
    }

    /// Sets the bit; panics if `c` lies outside the window.
    pub fn insert(&mut self, c: GridIndex) {
        let i = self.slot(c).unwrap_or_else(|| panic!("cell {c} outside mask window"));
        self.bits[i] = true;
    }

    pub fn remove(&mut self, c: GridIndex) {
        if let Some(i) = self.slot(c) {
            self.bits[i] = false;
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Set cells in row-major order (y outer, x inner).
    pub fn iter(&self) -> impl Iterator<Item = GridIndex> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(move |(i, _)| {
            self.min.offset((i % self.width) as i32, (i / self.width) as i32)
        })
    }

    /// Set cells sorted lexicographically by `(x, y)`.
    pub fn to_sorted_vec(&self) -> Vec<GridIndex> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable();
        v
    }

    /// 3x3 dilation (every cell within Chebyshev distance 1).
    pub fn dilate8(&self) -> CellMask {
        let mut out = CellMask::new(self.min.offset(-1, -1), self.max().offset(1, 1));
        for c in self.iter() {
            for dy in -1..=1 {
                for dx in -1..=1 {
                    out.insert(c.offset(dx, dy));
                }
            }
        }
        out
    }
}

/// Inclusive bounding box of a cell list.
pub fn bounding_box(cells: &[GridIndex]) -> Option<(GridIndex, GridIndex)> {
    let first = *cells.first()?;
    Some(cells.iter().fold((first, first), |(lo, hi), c| {
        (GridIndex::new(lo.x.min(c.x), lo.y.min(c.y)), GridIndex::new(hi.x.max(c.x), hi.y.max(c.y)))
    }))
}
