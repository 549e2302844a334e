//! Exterior Neumann data by the β-warp and exterior Dirichlet data by the χ-cutoff.

use crate::error::{invalid, Result};
use crate::profiles::{CauchyDataPair, Descriptor, Jet, RadialProfile};
use crate::scalar::Real;

/// β and its first two derivatives; `s` is assumed nonnegative.
pub(crate) fn beta_jet<T: Real>(s: T) -> Jet<T> {
    if s <= T::one() {
        return Jet::constant(T::one());
    }
    if s >= T::lit(2.0) {
        return Jet { value: s, d1: T::one(), d2: T::zero() };
    }
    let t = s - T::one();
    let (t2, t3) = (t * t, t * t * t);
    Jet {
        value: T::one() + T::lit(6.0) * t3 - T::lit(8.0) * t3 * t + T::lit(3.0) * t3 * t2,
        d1: T::lit(18.0) * t2 - T::lit(32.0) * t3 + T::lit(15.0) * t2 * t2,
        d2: T::lit(36.0) * t - T::lit(96.0) * t2 + T::lit(60.0) * t3,
    }
}

/// χ and its first two derivatives; `s` is assumed nonnegative.
pub(crate) fn chi_jet<T: Real>(s: T) -> Jet<T> {
    if s <= T::one() {
        return Jet::zero();
    }
    if s >= T::lit(2.0) {
        return Jet::constant(T::one());
    }
    let t = s - T::one();
    let (t2, t3) = (t * t, t * t * t);
    Jet {
        value: T::lit(6.0) * t3 * t2 - T::lit(15.0) * t3 * t + T::lit(10.0) * t3,
        d1: T::lit(30.0) * t2 * t2 - T::lit(60.0) * t3 + T::lit(30.0) * t2,
        d2: T::lit(120.0) * t3 - T::lit(180.0) * t2 + T::lit(60.0) * t,
    }
}

fn check_arg<T: Real>(s: T) -> Result<()> {
    if s >= T::zero() {
        Ok(())
    } else {
        Err(invalid(format!("argument must be nonnegative, got {s}")))
    }
}

/// Quintic warp: 1 on `[0,1]`, `s` on `[2,∞)`, C² at the joins.
pub fn beta<T: Real>(s: T) -> Result<T> {
    check_arg(s)?;
    Ok(beta_jet(s).value)
}

/// Quintic smoothstep cutoff: 0 on `[0,1]`, 1 on `[2,∞)`, C² at the joins.
pub fn chi<T: Real>(s: T) -> Result<T> {
    check_arg(s)?;
    Ok(chi_jet(s).value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarpKind {
    BetaQuintic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpValidation {
    /// `min (s - β(s))` over the samples.
    pub min_gap: f64,
    pub min_slope: f64,
    /// `max |β″|/β′`, the empirical constant in `|β″| ≤ C β′`.
    pub c_beta: f64,
    pub passed: bool,
}

/// Samples the open interval `(1, 2)` and reports the warp invariants.
pub fn validate_warp(kind: WarpKind, n_samples: usize) -> Result<WarpValidation> {
    if n_samples < 100 {
        return Err(invalid("validate_warp needs at least 100 samples"));
    }
    let WarpKind::BetaQuintic = kind;
    let (mut min_gap, mut min_slope, mut c_beta) = (f64::INFINITY, f64::INFINITY, 0.0_f64);
    for k in 1..=n_samples {
        let s = 1.0 + k as f64 / (n_samples + 1) as f64;
        let j = beta_jet(s);
        min_gap = min_gap.min(s - j.value);
        min_slope = min_slope.min(j.d1);
        c_beta = c_beta.max(j.d2.abs() / j.d1);
    }
    let passed = min_gap > 0.0 && min_slope > 0.0 && c_beta.is_finite();
    Ok(WarpValidation { min_gap, min_slope, c_beta, passed })
}

fn check_layer<T: Real>(p: &RadialProfile<T>, eps: T) -> Result<()> {
    let g = p.grid();
    if !(eps > T::zero()) {
        return Err(invalid(format!("boundary radius must be positive, got {eps}")));
    }
    if T::lit(2.0) * eps >= g.r_max() {
        return Err(invalid(format!("2ε = {} must lie inside r_max = {}", T::lit(2.0) * eps, g.r_max())));
    }
    if eps < T::lit(8.0) * g.spacing() * (T::one() - T::lit(1e-9)) {
        return Err(invalid(format!(
            "ε = {eps} under-resolved: needs at least 8 cells (Δr = {})",
            g.spacing()
        )));
    }
    Ok(())
}

/// Replaces a profile by `r ↦ f(ε·β(r/ε))`.
pub fn neumann_profile<T: Real>(p: &RadialProfile<T>, eps: T) -> Result<RadialProfile<T>> {
    check_layer(p, eps)?;
    let g = *p.grid();
    let two_eps = T::lit(2.0) * eps;
    let mut values = p.values().to_vec();
    let frozen = p.interpolate(eps);
    for (i, v) in values.iter_mut().enumerate() {
        let r = g.node(i);
        if r >= two_eps {
            break;
        }
        *v = if r <= eps { frozen } else { p.interpolate(eps * beta_jet(r / eps).value) };
    }
    let descriptor = p.shape().map(|s| Descriptor { shape: s.clone().warped(eps), origin_sample: T::zero() });
    let support = p.support_radius().max(two_eps);
    Ok(RadialProfile::with_parts(g, values, descriptor, support))
}

/// Replaces a profile by `r ↦ f(r)·χ(r/ε)`.
pub fn dirichlet_profile<T: Real>(p: &RadialProfile<T>, eps: T) -> Result<RadialProfile<T>> {
    check_layer(p, eps)?;
    let g = *p.grid();
    let two_eps = T::lit(2.0) * eps;
    let mut values = p.values().to_vec();
    for (i, v) in values.iter_mut().enumerate() {
        let r = g.node(i);
        if r >= two_eps {
            break;
        }
        *v = if r <= eps { T::zero() } else { p.interpolate(r) * chi_jet(r / eps).value };
    }
    let descriptor = p.shape().map(|s| Descriptor { shape: s.clone().cut_off(eps), origin_sample: T::zero() });
    Ok(RadialProfile::with_parts(g, values, descriptor, p.support_radius()))
}

pub fn neumann_data<T: Real>(d: &CauchyDataPair<T>, eps: T) -> Result<CauchyDataPair<T>> {
    d.map(|p| neumann_profile(p, eps))
}

pub fn dirichlet_data<T: Real>(d: &CauchyDataPair<T>, eps: T) -> Result<CauchyDataPair<T>> {
    d.map(|p| dirichlet_profile(p, eps))
}
