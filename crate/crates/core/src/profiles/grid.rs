use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Uniform grid `0 = r_0 < … < r_{n-1} = r_max` on the radial half-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T> {
    r_max: T,
    n_points: usize,
    h: T,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(r_max: T, n_points: usize) -> Result<Self> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(invalid(format!("r_max must be positive and finite, got {r_max}")));
        }
        if n_points < 3 {
            return Err(invalid(format!("a grid needs at least 3 points, got {n_points}")));
        }
        let h = r_max / T::from_index(n_points - 1);
        Ok(Self { r_max, n_points, h })
    }

    /// Grid with spacing `h` extending to at least `r_min`.
    pub fn with_spacing(h: T, r_min: T) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(invalid("grid spacing must be positive"));
        }
        let intervals = (r_min / h).ceil().to_usize().unwrap_or(0).max(2);
        Self::new(h * T::from_index(intervals), intervals + 1)
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> T {
        self.h
    }

    #[inline]
    pub fn node(&self, i: usize) -> T {
        if i + 1 == self.n_points {
            self.r_max
        } else {
            T::from_index(i) * self.h
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Index of the node at `r` if `r` lies on the grid to within `1e-9` cells.
    pub fn index_of(&self, r: T) -> Option<usize> {
        let pos = r / self.h;
        let k = pos.round();
        if (pos - k).abs() <= T::lit(1e-9) && k >= T::zero() {
            k.to_usize().filter(|&i| i < self.n_points)
        } else {
            None
        }
    }

    pub fn nearest_index(&self, r: T) -> usize {
        let k = (r / self.h).round().max(T::zero());
        k.to_usize().unwrap_or(usize::MAX).min(self.n_points - 1)
    }

    /// Index of the first node with `node >= r`.
    pub fn ceil_index(&self, r: T) -> usize {
        if let Some(i) = self.index_of(r) {
            return i;
        }
        let k = (r / self.h).ceil().max(T::zero());
        k.to_usize().unwrap_or(usize::MAX).min(self.n_points)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.n_points == other.n_points
            && (self.r_max - other.r_max).abs() <= T::lit(1e-12) * self.r_max
    }
}
