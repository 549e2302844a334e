//! Finite-difference and interpolation stencils on uniform grids.

use crate::scalar::Real;

/// Fornberg's algorithm: weights for derivatives `0..=max_order` at `x0`
/// from samples at `xs`. Returns `w[order][j]`.
pub fn fornberg<T: Real>(x0: T, xs: &[T], max_order: usize) -> Vec<Vec<T>> {
    let n = xs.len();
    let mut c = vec![vec![T::zero(); n]; max_order + 1];
    c[0][0] = T::one();
    let mut c1 = T::one();
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1
                        * (T::from_index(k) * c[k - 1][i - 1] - c5 * c[k][i - 1])
                        / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - T::from_index(k) * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Precomputed 4th-order first and second derivative stencils on a uniform grid.
#[derive(Debug, Clone)]
pub struct Differentiator<T> {
    h: T,
    // [d1, d2] weights, unit spacing, for the centered 5-point stencil
    centered: [[T; 5]; 2],
    // one-sided 6-point windows for the first two and last two nodes
    left: [[[T; 6]; 2]; 2],
    right: [[[T; 6]; 2]; 2],
}

impl<T: Real> Differentiator<T> {
    pub fn new(h: T) -> Self {
        let offsets = |lo: i32, n: usize| -> Vec<T> {
            (0..n).map(|k| T::from_i32(lo + k as i32).unwrap()).collect()
        };
        let pick5 = |w: &Vec<Vec<T>>, o: usize| -> [T; 5] { std::array::from_fn(|j| w[o][j]) };
        let pick6 = |w: &Vec<Vec<T>>, o: usize| -> [T; 6] { std::array::from_fn(|j| w[o][j]) };
        let c = fornberg(T::zero(), &offsets(-2, 5), 2);
        let mut left = [[[T::zero(); 6]; 2]; 2];
        let mut right = [[[T::zero(); 6]; 2]; 2];
        let xs6 = offsets(0, 6);
        for p in 0..2 {
            let wl = fornberg(T::from_index(p), &xs6, 2);
            let wr = fornberg(T::from_index(5 - p), &xs6, 2);
            for o in 0..2 {
                left[p][o] = pick6(&wl, o + 1);
                right[p][o] = pick6(&wr, o + 1);
            }
        }
        Self { h, centered: [pick5(&c, 1), pick5(&c, 2)], left, right }
    }

    fn apply(&self, values: &[T], i: usize, order: usize) -> T {
        let n = values.len();
        let scale = if order == 0 { self.h } else { self.h * self.h };
        let s = if i >= 2 && i + 2 < n {
            (0..5).map(|k| self.centered[order][k] * values[i + k - 2]).sum::<T>()
        } else if i < 2 {
            (0..6).map(|k| self.left[i][order][k] * values[k]).sum::<T>()
        } else {
            let p = n - 1 - i;
            (0..6).map(|k| self.right[p][order][k] * values[n - 6 + k]).sum::<T>()
        };
        s / scale
    }

    pub fn d1_at(&self, values: &[T], i: usize) -> T {
        self.apply(values, i, 0)
    }

    pub fn d2_at(&self, values: &[T], i: usize) -> T {
        self.apply(values, i, 1)
    }

    /// First and second derivatives at every node. Needs at least 6 samples.
    pub fn derivatives(&self, values: &[T]) -> (Vec<T>, Vec<T>) {
        assert!(values.len() >= 6, "need at least 6 samples for 4th-order stencils");
        let d1 = (0..values.len()).map(|i| self.d1_at(values, i)).collect();
        let d2 = (0..values.len()).map(|i| self.d2_at(values, i)).collect();
        (d1, d2)
    }
}

/// Six-point Lagrange interpolation of uniform samples at `x` (node `i` sits at `i*h`).
/// Exact node hits return the node value.
pub fn lagrange_interpolate<T: Real>(values: &[T], h: T, x: T) -> T {
    let n = values.len();
    let pos = x / h;
    let base = pos.floor();
    let i = base.to_usize().unwrap_or(0).min(n - 1);
    if (pos - base).is_zero() {
        return values[i];
    }
    let width = 6.min(n);
    let start = i.saturating_sub(2).min(n - width);
    let xs: Vec<T> = (start..start + width).map(T::from_index).collect();
    let w = fornberg(pos, &xs, 0);
    (0..width).map(|k| w[0][k] * values[start + k]).sum()
}
