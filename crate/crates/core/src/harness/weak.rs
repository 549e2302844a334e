use std::fmt;
use std::str::FromStr;

use super::spec::TestFunction;
use crate::error::{invalid, Result};
use crate::profiles::CauchyDataPair;
use crate::quadrature::simpson;
use crate::solver::{BoundaryKind, ExtensionRule, Trace, WaveField};
use crate::stencil::Differentiator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakForm {
    /// `∫∫ U V_tt + c² ∇U·∇V` plus initial terms.
    H1,
    /// `∫∫ U □V` plus initial terms.
    L2,
}

impl fmt::Display for WeakForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeakForm::H1 => "H1_form",
            WeakForm::L2 => "L2_form",
        })
    }
}

impl FromStr for WeakForm {
    type Err = crate::LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H1_form" | "h1" => Ok(WeakForm::H1),
            "L2_form" | "l2" => Ok(WeakForm::L2),
            _ => Err(invalid(format!("unknown weak form '{s}'"))),
        }
    }
}

/// Splits `[0, last]` at `split` so that Simpson never straddles a kink.
fn simpson_split(values: &[f64], h: f64, split: usize) -> f64 {
    let mut s = 0.0;
    if split > 0 {
        s += simpson(&values[..=split], h);
    }
    s + simpson(&values[split..], h)
}

/// Defect of `field` from being a weak solution with data `data`, tested against `test_fn`.
///
/// Space integrals are Simpson on the grid; the time integral is Simpson over stored snapshots.
pub fn weak_form_residual(
    field: &WaveField<f64>,
    data: &CauchyDataPair<f64>,
    test_fn: &TestFunction,
    form: WeakForm,
) -> Result<f64> {
    let p = field.problem();
    if !p.is_full_space() && field.extension() == ExtensionRule::None {
        return Err(invalid("weak-form residual needs a field extended over the ball"));
    }
    if !field.grid().same_as(data.grid()) {
        return Err(invalid("field and data live on different grids"));
    }
    let g = field.grid();
    let h = g.spacing();
    let c2 = p.c * p.c;
    let four_pi = 4.0 * std::f64::consts::PI;
    let split = if p.is_full_space() { 0 } else { p.boundary_index() };
    let rs = g.nodes();
    let jets: Vec<_> = rs.iter().map(|&r| test_fn.b.jet(r)).collect();
    let diff = Differentiator::new(h);

    let times = field.times();
    let mut per_time = Vec::with_capacity(times.len());
    let mut integrand = vec![0.0; g.len()];
    for (k, &t) in times.iter().enumerate() {
        let (a, _, dda) = test_fn.time_jet(t);
        let z = field.z(k);
        match form {
            WeakForm::H1 => {
                let zr = piecewise_slope(&diff, z, split);
                for j in 0..g.len() {
                    let (r, b) = (rs[j], jets[j]);
                    integrand[j] = z[j] * dda * b.value * r + c2 * a * (zr[j] * r - z[j]) * b.d1;
                }
            }
            WeakForm::L2 => {
                for j in 0..g.len() {
                    let (r, b) = (rs[j], jets[j]);
                    integrand[j] = z[j] * (dda * b.value * r - c2 * a * (b.d2 * r + 2.0 * b.d1));
                }
            }
        }
        per_time.push(four_pi * simpson_split(&integrand, h, split));
    }
    let dt = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    let space_time = simpson(&per_time, dt);

    let (a0, da0, _) = test_fn.time_jet(0.0);
    let phi = data.position.values();
    let psi = data.velocity.values();
    for j in 0..g.len() {
        let r = rs[j];
        integrand[j] = (phi[j] * da0 - psi[j] * a0) * jets[j].value * r * r;
    }
    Ok(space_time + four_pi * simpson(&integrand, h))
}

/// `∂_r z` by 4th-order differences, computed separately on each side of `split`.
fn piecewise_slope(diff: &Differentiator<f64>, z: &[f64], split: usize) -> Vec<f64> {
    if split < 6 {
        return diff.derivatives(z).0;
    }
    let mut left = diff.derivatives(&z[..=split]).0;
    let right = diff.derivatives(&z[split..]).0;
    left.pop();
    left.extend(right);
    left
}

/// Boundary term `4π c² ε² b(ε) ∫₀^T a(t) ∂_r u(t,ε) dt` of an exterior Dirichlet field,
/// integrated by Simpson over every time level.
pub fn dirichlet_boundary_residual(field: &WaveField<f64>, test_fn: &TestFunction) -> Result<f64> {
    let p = field.problem();
    if p.is_full_space() || p.bc != BoundaryKind::DirichletForU {
        return Err(invalid("boundary residual is defined for exterior Dirichlet fields"));
    }
    let eps = p.eps;
    let (times, zr) = field.boundary_trace(Trace::ZrAtEps);
    let series: Vec<f64> = times.iter().zip(&zr).map(|(&t, &v)| test_fn.time_jet(t).0 * v).collect();
    let dt = field.schedule().dt;
    // u_r(ε) = z_r(ε)/ε because z(ε) = 0
    let integral = simpson(&series, dt);
    Ok(4.0 * std::f64::consts::PI * p.c * p.c * eps * test_fn.b.value(eps) * integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{RadialGrid, Shape};
    use crate::solver::{reference_cauchy, TimeSchedule};

    fn setup(n: usize) -> (CauchyDataPair<f64>, TimeSchedule<f64>, TestFunction) {
        let g = RadialGrid::new(6.0, n + 1).unwrap();
        let d = CauchyDataPair::new(
            crate::profiles::RadialProfile::sample(Shape::gaussian_bump(2.0), g),
            crate::profiles::RadialProfile::sample(Shape::gaussian_bump(3.0), g),
            crate::profiles::Regularity::SmoothCompact,
        )
        .unwrap();
        let s = TimeSchedule::new(&g, 1.0, 0.5, 1.0, 257).unwrap();
        (d, s, TestFunction::new(1.0, Shape::poly_bump(1.5, 4)).unwrap())
    }

    #[test]
    fn zero_field_zero_residual() {
        let (d, s, tf) = setup(1 << 10);
        let z = CauchyDataPair::zeros(*d.grid());
        let f = reference_cauchy(&z, 1.0, &s).unwrap();
        for form in [WeakForm::H1, WeakForm::L2] {
            assert_eq!(weak_form_residual(&f, &z, &tf, form).unwrap(), 0.0);
        }
    }

    #[test]
    fn exact_solution_has_small_defect() {
        let (d, s, tf) = setup(1 << 11);
        let f = reference_cauchy(&d, 1.0, &s).unwrap();
        for form in [WeakForm::H1, WeakForm::L2] {
            let w = weak_form_residual(&f, &d, &tf, form).unwrap();
            assert!(w.abs() < 1e-5, "{form}: {w:e}");
        }
    }

    #[test]
    fn wrong_data_is_detected() {
        let (d, s, tf) = setup(1 << 10);
        let f = reference_cauchy(&d, 1.0, &s).unwrap();
        let doubled = d.scale(2.0);
        let w = weak_form_residual(&f, &doubled, &tf, WeakForm::L2).unwrap();
        assert!(w.abs() > 1e-2, "{w:e}");
    }

    #[test]
    fn form_names_round_trip() {
        for f in [WeakForm::H1, WeakForm::L2] {
            assert_eq!(f.to_string().parse::<WeakForm>().unwrap(), f);
        }
    }
}
