//! Radial mollification in three dimensions.

use super::grid::RadialGrid;
use super::profile::RadialProfile;
use crate::error::{invalid, Result};
use crate::quadrature::{simpson, GaussRule};
use crate::scalar::Real;

fn bump<T: Real>(tau: T) -> T {
    if tau.abs() >= T::one() {
        T::zero()
    } else {
        (-(T::one() - tau * tau).recip()).exp()
    }
}

/// Radial unit-mass mollifier `η̃(τ) = A·exp(-1/(1-τ²))` on `τ < 1`.
#[derive(Debug, Clone)]
pub struct Mollifier<T> {
    norm: T,
    rule: GaussRule<T>,
}

impl<T: Real> Default for Mollifier<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Mollifier<T> {
    pub fn new() -> Self {
        let rule = GaussRule::new(12);
        let mass = T::lit(4.0) * T::PI() * rule.composite(T::zero(), T::one(), 64, |t| t * t * bump(t));
        Self { norm: mass.recip(), rule }
    }

    pub fn normalization(&self) -> T {
        self.norm
    }

    /// `η̃(τ)` at unit scale.
    pub fn profile(&self, tau: T) -> T {
        self.norm * bump(tau)
    }

    /// `g(u) = ∫_0^u τ η̃(τ) dτ` at `u_k = k·step` for `k = 0..=count`, constant past `u = 1`.
    fn first_moment_table(&self, step: T, count: usize) -> Vec<T> {
        let mut table = Vec::with_capacity(count + 1);
        let mut acc = T::zero();
        table.push(acc);
        for k in 1..=count {
            let lo = step * T::from_index(k - 1);
            if lo < T::one() {
                let hi = (lo + step).min(T::one());
                acc += self.rule.integrate(lo, hi, |t| t * self.profile(t));
            }
            table.push(acc);
        }
        table
    }
}

/// Radial profile of the 3-d convolution `P ∗ η_δ` with `η_δ(x) = δ⁻³η̃(|x|/δ)`.
pub fn radial_mollify<T: Real>(p: &RadialProfile<T>, delta: T) -> Result<RadialProfile<T>> {
    if !(delta > T::zero()) {
        return Err(invalid(format!("mollification radius must be positive, got {delta}")));
    }
    let grid: RadialGrid<T> = *p.grid();
    if delta >= grid.r_max() / T::lit(4.0) {
        return Err(invalid("mollification radius must be below r_max/4"));
    }
    let n = grid.len();
    if p.is_zero() {
        return Ok(RadialProfile::zeros(grid));
    }
    let h = grid.spacing();
    let m = Mollifier::new();
    let reach = (delta / h).ceil().to_usize().unwrap();
    // G(a) = δ⁻¹ g(a/δ) at a = kΔr, clamped beyond the mollifier radius
    let g = m.first_moment_table(h / delta, reach);
    let big_g = |k: usize| g[k.min(reach)] / delta;
    let f = p.values();
    let two_pi = T::lit(2.0) * T::PI();
    let mut out = vec![T::zero(); n];
    let mut window = Vec::with_capacity(2 * reach + 1);

    window.extend((0..=reach.min(n - 1)).map(|j| {
        let s = grid.node(j);
        s * s * f[j] * m.profile(s / delta)
    }));
    out[0] = T::lit(4.0) * T::PI() * simpson(&window, h) / (delta * delta * delta);

    for (i, o) in out.iter_mut().enumerate().skip(1) {
        let r = grid.node(i);
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(n - 1);
        window.clear();
        window.extend((lo..=hi).map(|j| {
            let s = grid.node(j);
            s * f[j] * (big_g(i + j) - big_g(i.abs_diff(j)))
        }));
        *o = two_pi / r * simpson(&window, h);
    }
    let support = p.support_radius() + delta;
    let last_live = grid.ceil_index(support);
    out.iter_mut().skip(last_live + 1).for_each(|v| *v = T::zero());
    let mut q = RadialProfile::from_values(grid, out)?;
    if support < q.support_radius() {
        q = RadialProfile::with_parts(grid, q.values().to_vec(), None, support);
    }
    Ok(q)
}
