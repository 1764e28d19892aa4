//! Symmetric positive-definite banded matrices and their Cholesky solve.

use crate::Scalar;

/// Lower band of a symmetric `n x n` matrix with half-bandwidth `b`:
/// entry `(i, j)` with `i - b <= j <= i` is stored at `i * (b + 1) + (j + b - i)`.
#[derive(Clone, Debug)]
pub struct BandedMatrix<T> {
    n: usize,
    b: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandedMatrix<T> {
    pub fn zeros(n: usize, b: usize) -> Self {
        Self { n, b, data: vec![T::zero(); n * (b + 1)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.b);
        i * (self.b + 1) + (j + self.b - i)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        if i - j > self.b {
            T::zero()
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to entry `(i, j)` (and implicitly `(j, i)`).
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        assert!(i - j <= self.b, "entry ({i}, {j}) outside band {}", self.b);
        let k = self.idx(i, j);
        self.data[k] = self.data[k] + v;
    }

    /// Solves `A x = rhs` by banded Cholesky. `None` if `A` is not
    /// positive definite.
    pub fn solve(&self, rhs: &[T]) -> Option<Vec<T>> {
        let (n, b) = (self.n, self.b);
        let mut l = self.data.clone();
        let at = |i: usize, j: usize| i * (b + 1) + (j + b - i);
        for i in 0..n {
            let j0 = i.saturating_sub(b);
            for j in j0..=i {
                let mut s = l[at(i, j)];
                let k0 = j0.max(j.saturating_sub(b));
                for k in k0..j {
                    s = s - l[at(i, k)] * l[at(j, k)];
                }
                if i == j {
                    if !(s > T::zero()) || !s.is_finite() {
                        return None;
                    }
                    l[at(i, i)] = s.sqrt();
                } else {
                    l[at(i, j)] = s / l[at(j, j)];
                }
            }
        }
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(b)..i {
                s = s - l[at(i, k)] * y[k];
            }
            y[i] = s / l[at(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + b + 1).min(n) {
                s = s - l[at(k, i)] * y[k];
            }
            y[i] = s / l[at(i, i)];
        }
        Some(y)
    }
}
