use super::field::{BoundaryHistory, ExtensionRule, WaveField};
use super::problem::ExteriorProblem;
use super::schedule::TimeSchedule;
use crate::error::{invalid, Result};
use crate::profiles::{CauchyDataPair, RadialProfile};
use crate::quadrature::GaussRule;
use crate::scalar::Real;
use crate::stencil::lagrange_interpolate;

const PANEL_POINTS: usize = 6;

/// Evaluates `x ↦ x·f(|x|)`-type odd extensions and their antiderivatives off-grid.
struct OddData<'a, T> {
    p: &'a RadialProfile<T>,
    d1: Vec<T>,
    /// `∫_0^{r_j} s f(s) ds` at each node
    antideriv: Vec<T>,
    rule: GaussRule<T>,
}

impl<'a, T: Real> OddData<'a, T> {
    fn new(p: &'a RadialProfile<T>) -> Self {
        let g = p.grid();
        let h = g.spacing();
        let rule = GaussRule::new(PANEL_POINTS);
        let f = p.values();
        let mut antideriv = vec![T::zero(); g.len()];
        let mut acc = T::zero();
        for j in 1..g.len() {
            let (a, b) = (g.node(j - 1), g.node(j));
            acc += if p.shape().is_some() {
                rule.integrate(a, b, |s| s * p.interpolate(s))
            } else {
                // cubic through the four nearest samples of s·f(s), integrated over [a, b]
                let k = j.saturating_sub(2).min(g.len() - 4);
                let y: Vec<T> = (k..k + 4).map(|i| g.node(i) * f[i]).collect();
                let off = T::from_index(j - 1 - k);
                cubic_panel(&y, off) * h
            };
            antideriv[j] = acc;
        }
        let d1 = p.derivatives().0;
        Self { p, d1, antideriv, rule }
    }

    fn value(&self, r: T) -> T {
        if r <= T::zero() {
            return self.p.values()[0];
        }
        if r > self.p.grid().r_max() && self.p.shape().is_none() {
            return T::zero();
        }
        self.p.interpolate(r)
    }

    fn slope(&self, r: T) -> T {
        match self.p.jet(r) {
            Some(j) if r > T::zero() => j.d1,
            _ if r >= self.p.grid().r_max() => T::zero(),
            _ => lagrange_interpolate(&self.d1, self.p.grid().spacing(), r),
        }
    }

    /// `x·f(|x|)`
    fn odd(&self, x: T) -> T {
        x * self.value(x.abs())
    }

    /// `d/dx [x·f(|x|)] = f(|x|) + |x| f′(|x|)`
    fn odd_slope(&self, x: T) -> T {
        let r = x.abs();
        self.value(r) + r * self.slope(r)
    }

    /// `∫_0^{|x|} s f(s) ds`, even in `x`.
    fn even_antiderivative(&self, x: T) -> T {
        let g = self.p.grid();
        let r = x.abs().min(g.r_max());
        let j = (r / g.spacing()).floor().to_usize().unwrap_or(0).min(g.len() - 1);
        let a = g.node(j);
        if r <= a {
            return self.antideriv[j];
        }
        self.antideriv[j] + self.rule.integrate(a, r, |s| s * self.value(s))
    }
}

/// `∫_off^{off+1} p(x) dx` for the cubic `p` through `(i, y_i)`, `i = 0..4`.
fn cubic_panel<T: Real>(y: &[T], off: T) -> T {
    let rule = GaussRule::<T>::new(3);
    rule.integrate(off, off + T::one(), |x| {
        let mut s = T::zero();
        for i in 0..4 {
            let mut w = T::one();
            for m in 0..4 {
                if m != i {
                    w *= (x - T::from_index(m)) / (T::from_index(i) - T::from_index(m));
                }
            }
            s += w * y[i];
        }
        s
    })
}

/// Exact radial Cauchy solution by d'Alembert's formula for odd extensions of `z = r·u`,
/// sampled at the schedule's snapshot times.
pub fn reference_cauchy<T: Real>(
    data: &CauchyDataPair<T>,
    c: T,
    schedule: &TimeSchedule<T>,
) -> Result<WaveField<T>> {
    let problem = ExteriorProblem::full_space(data.clone(), c, schedule.horizon)
        .map_err(|e| invalid(format!("reference solution unavailable: {e}")))?;
    let g = *data.grid();
    let pos = OddData::new(&data.position);
    let vel = OddData::new(&data.velocity);
    let half = T::lit(0.5);
    let times = schedule.snapshot_times();
    let mut zs = Vec::with_capacity(times.len());
    let mut zts = Vec::with_capacity(times.len());
    for &t in &times {
        let ct = c * t;
        let mut z = vec![T::zero(); g.len()];
        let mut zt = vec![T::zero(); g.len()];
        for j in 1..g.len() - 1 {
            let r = g.node(j);
            let (a, b) = (r + ct, r - ct);
            z[j] = half * (pos.odd(a) + pos.odd(b))
                + half / c * (vel.even_antiderivative(a) - vel.even_antiderivative(b));
            zt[j] = half * c * (pos.odd_slope(a) - pos.odd_slope(b)) + half * (vel.odd(a) + vel.odd(b));
        }
        zs.push(z);
        zts.push(zt);
    }
    Ok(WaveField {
        problem,
        schedule: *schedule,
        times,
        z: zs,
        zt: zts,
        extension: ExtensionRule::None,
        boundary: BoundaryHistory::default(),
    })
}
