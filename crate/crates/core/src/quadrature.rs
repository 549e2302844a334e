//! One-dimensional quadrature on uniform nodes and on panels.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::scalar::Real;

/// Composite Simpson rule over uniformly spaced samples.
///
/// An odd number of intervals closes with the Simpson 3/8 rule on the last
/// three intervals; a single interval falls back to the trapezoid rule.
pub fn simpson<T: Real>(values: &[T], h: T) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let intervals = n - 1;
    if intervals == 1 {
        return h * (values[0] + values[1]) / T::lit(2.0);
    }
    let (even_end, tail) = if intervals % 2 == 0 {
        (intervals, false)
    } else {
        (intervals - 3, true)
    };
    let mut acc = T::zero();
    if even_end > 0 {
        let mut s = values[0] + values[even_end];
        for (i, &v) in values.iter().enumerate().take(even_end).skip(1) {
            s += if i % 2 == 1 { T::lit(4.0) * v } else { T::lit(2.0) * v };
        }
        acc = s * h / T::lit(3.0);
    }
    if tail {
        let v = &values[even_end..];
        acc += T::lit(3.0) * h / T::lit(8.0)
            * (v[0] + T::lit(3.0) * v[1] + T::lit(3.0) * v[2] + v[3]);
    }
    acc
}

/// Gauss–Legendre rule with nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule<T> {
    pairs: Vec<(T, T)>,
}

impl<T: Real> GaussRule<T> {
    pub fn new(points: usize) -> Self {
        let degree = NonZeroUsize::new(points.max(1)).expect("nonzero");
        let pairs = GaussLegendre::new(degree)
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (T::lit(x), T::lit(w)))
            .collect();
        Self { pairs }
    }

    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (b + a) / T::lit(2.0);
        self.pairs
            .iter()
            .map(|&(x, w)| w * f(mid + half * x))
            .sum::<T>()
            * half
    }

    /// Applies the rule on `panels` equal sub-intervals of `[a, b]`.
    pub fn composite(&self, a: T, b: T, panels: usize, mut f: impl FnMut(T) -> T) -> T {
        let panels = panels.max(1);
        let width = (b - a) / T::from_index(panels);
        (0..panels)
            .map(|p| {
                let lo = a + width * T::from_index(p);
                self.integrate(lo, lo + width, &mut f)
            })
            .sum()
    }

    /// Integrates over `[0, b]` through the substitution `r = b·u^grading`,
    /// which absorbs integrable power singularities at the origin.
    pub fn graded(&self, b: T, grading: i32, mut f: impl FnMut(T) -> T) -> T {
        let q = T::from_i32(grading).expect("grading");
        self.integrate(T::zero(), T::one(), |u| {
            let r = b * u.powi(grading);
            f(r) * b * q * u.powi(grading - 1)
        })
    }
}
