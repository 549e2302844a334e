use rayon::prelude::*;

use super::report::ConvergenceReport;
use super::spec::{StudySpec, TestFunction};
use super::weak::{dirichlet_boundary_residual, weak_form_residual, WeakForm};
use crate::error::{invalid, Result};
use crate::norms::{data_size, hardy_ratio, hardy_ratio_ball, norms, pair_distance, Order, RegionSpec};
use crate::profiles::{CauchyDataPair, RadialGrid, RadialProfile, Shape};
use crate::solver::{
    energies, field_distance, EnergyReport, reference_cauchy, relative_drift, solve_with, BoundaryKind, Trace, WaveField,
};

/// Distances between constructed and base data at L², H¹ and H².
pub fn data_rate_study(spec: &StudySpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    let base = spec.base_data()?;
    let mut rep = ConvergenceReport::default();
    let rows: Vec<[f64; 3]> = spec
        .ladder
        .par_iter()
        .map(|&e| {
            let d = spec.constructed(&base, e)?;
            Ok([
                pair_distance(&d, &base, Order::L2)?,
                pair_distance(&d, &base, Order::H1)?,
                pair_distance(&d, &base, Order::H2)?,
            ])
        })
        .collect::<Result<_>>()?;
    for (q, name) in ["l2", "h1", "h2"].iter().enumerate() {
        for (&e, row) in spec.ladder.iter().zip(&rows) {
            rep.push(name, e, row[q]);
        }
    }
    let theory: &[(&str, f64)] = match spec.bc {
        BoundaryKind::NeumannForU => &[("l2", 2.0), ("h1", 1.0), ("h2", 0.0)],
        BoundaryKind::DirichletForU => &[("h1", 0.5), ("h2", -0.5)],
    };
    rep.fit(theory);
    Ok(rep)
}

/// Extended exterior solution for one rung on the study's shared grid and schedule.
pub fn extended_solution(spec: &StudySpec, base: &CauchyDataPair<f64>, eps: f64) -> Result<WaveField<f64>> {
    let p = spec.problem(base, eps)?;
    let schedule = spec.schedule(base.grid())?;
    solve_with(&p, &schedule)?.extend()
}

pub fn reference_solution(spec: &StudySpec, base: &CauchyDataPair<f64>) -> Result<WaveField<f64>> {
    reference_cauchy(base, spec.c, &spec.schedule(base.grid())?)
}

/// Solutions against the Cauchy reference: sup-in-time distance (H¹ for Neumann, L² for
/// Dirichlet) and the normalized boundary trace `sup_t |u_t(t,ε)|·√ε / (‖Ψ‖_{H¹}+‖Φ‖_{H²})`.
pub fn solution_convergence_study(spec: &StudySpec) -> Result<ConvergenceReport> {
    Ok(solution_convergence_fields(spec)?.0)
}

fn solution_convergence_fields(spec: &StudySpec) -> Result<(ConvergenceReport, Vec<WaveField<f64>>)> {
    spec.validate()?;
    let base = spec.base_data()?;
    let reference = reference_solution(spec, &base)?;
    let order = match spec.bc {
        BoundaryKind::NeumannForU => Order::H1,
        BoundaryKind::DirichletForU => Order::L2,
    };
    let results: Vec<(WaveField<f64>, f64, f64)> = spec
        .ladder
        .par_iter()
        .map(|&e| {
            let f = extended_solution(spec, &base, e)?;
            let dist = field_distance(&f, &reference, order)?;
            let size = data_size(&f.problem().data)?;
            let (_, ut) = f.boundary_trace(Trace::UtAtEps);
            let sup = ut.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let trace = if size > 0.0 { sup * e.sqrt() / size } else { 0.0 };
            Ok((f, dist, trace))
        })
        .collect::<Result<_>>()?;
    let mut rep = ConvergenceReport::default();
    let name = format!("{}_distance", order.to_string().to_lowercase());
    for (&e, r) in spec.ladder.iter().zip(&results) {
        rep.push(&name, e, r.1);
    }
    if spec.bc == BoundaryKind::NeumannForU {
        for (&e, r) in spec.ladder.iter().zip(&results) {
            rep.push("trace_ratio", e, r.2);
        }
    }
    rep.fit(&[]);
    Ok((rep, results.into_iter().map(|r| r.0).collect()))
}

/// Solution study together with the Cauchy-pair diagnostics it makes available for free.
pub fn solution_convergence_with_pairs(
    spec: &StudySpec,
    pairs: &[(usize, usize)],
) -> Result<(ConvergenceReport, Vec<PairDiagnostics>)> {
    let (rep, fields) = solution_convergence_fields(spec)?;
    let diags = pairs
        .iter()
        .map(|&(n, m)| {
            check_pair(spec, n, m)?;
            pair_from_fields(&fields[n], &fields[m], (n, m), (spec.ladder[n], spec.ladder[m]), spec.c)
        })
        .collect::<Result<_>>()?;
    Ok((rep, diags))
}

/// Boundary term of the Dirichlet weak identity per rung, its counterpart from the
/// weak L² form, and the relative gap between the two.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStudy {
    pub report: ConvergenceReport,
    /// Largest residual for a test function vanishing near every boundary sphere.
    pub shell_residual: f64,
}

pub fn residual_study(spec: &StudySpec) -> Result<ResidualStudy> {
    if spec.bc != BoundaryKind::DirichletForU {
        return Err(invalid("residual study needs Dirichlet boundary conditions"));
    }
    spec.validate()?;
    let base = spec.base_data()?;
    let eps_max = spec.ladder.iter().copied().fold(0.0, f64::max);
    let shell = TestFunction::new(spec.horizon, Shape::shell_bump(4.0 * eps_max, 2.0 * eps_max, 4))?;
    let rows: Vec<[f64; 4]> = spec
        .ladder
        .par_iter()
        .map(|&e| {
            let f = extended_solution(spec, &base, e)?;
            let r = dirichlet_boundary_residual(&f, &spec.test_fn)?;
            let w = weak_form_residual(&f, &f.problem().data, &spec.test_fn, WeakForm::L2)?;
            let scale = r.abs().max(w.abs());
            let gap = if scale > 0.0 { (w + r).abs() / scale } else { 0.0 };
            let s = dirichlet_boundary_residual(&f, &shell)?;
            Ok([r.abs(), w.abs(), gap, s.abs()])
        })
        .collect::<Result<_>>()?;
    let mut report = ConvergenceReport::default();
    for (q, name) in ["residual", "weak_l2", "identity_gap"].iter().enumerate() {
        for (&e, row) in spec.ladder.iter().zip(&rows) {
            report.push(name, e, row[q]);
        }
    }
    report.fit(&[("residual", 0.75)]);
    let shell_residual = rows.iter().fold(0.0f64, |m, r| m.max(r[3]));
    Ok(ResidualStudy { report, shell_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyStudy {
    pub report: ConvergenceReport,
    /// Energy series per rung at the spec's own resolution.
    pub series: Vec<(f64, EnergyReport<f64>)>,
}

/// Relative drift of the first- and second-order energies per rung, at the spec's
/// grid and at twice its resolution.
pub fn energy_conservation_study(spec: &StudySpec) -> Result<EnergyStudy> {
    spec.validate()?;
    let mut fine = spec.clone();
    fine.grid.scale = spec.grid.scale.max(1) * 2;
    let mut report = ConvergenceReport::default();
    let mut series = Vec::new();
    for (s, suffix) in [(spec, ""), (&fine, "_fine")] {
        let base = s.base_data()?;
        let schedule = s.schedule(base.grid())?;
        let reports: Vec<EnergyReport<f64>> = s
            .ladder
            .par_iter()
            .map(|&e| Ok(energies(&solve_with(&s.problem(&base, e)?, &schedule)?)))
            .collect::<Result<_>>()?;
        for (&e, en) in s.ladder.iter().zip(&reports) {
            report.push(&format!("E1_drift{suffix}"), e, relative_drift(&en.first_order));
        }
        for (&e, en) in s.ladder.iter().zip(&reports) {
            report.push(&format!("E2_drift{suffix}"), e, relative_drift(&en.second_order));
        }
        if suffix.is_empty() {
            series = s.ladder.iter().copied().zip(reports).collect();
        }
    }
    report.fit(&[]);
    Ok(EnergyStudy { report, series })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardyRow {
    pub family: String,
    pub ratio: f64,
    /// Ratio over the unit ball with the full H¹ norm below.
    pub ball_ratio: f64,
}

/// Built-in H¹ families used by the Hardy suite.
pub fn hardy_families() -> Vec<Shape<f64>> {
    vec![
        Shape::gaussian_bump(1.0),
        Shape::poly_bump(1.0, 4),
        Shape::hardy_edge(0.25, 1.0),
        Shape::hardy_edge(1.1, 2.0),
        Shape::exp_decay(1.0),
        Shape::shell_bump(1.0, 0.5, 4),
    ]
}

/// Hardy ratios on `[0, 16]` with `2^14` intervals.
pub fn hardy_study() -> Result<Vec<HardyRow>> {
    let grid = RadialGrid::new(16.0, (1 << 14) + 1)?;
    hardy_families()
        .into_iter()
        .map(|s| {
            let p = RadialProfile::sample(s.clone(), grid);
            Ok(HardyRow { family: s.to_string(), ratio: hardy_ratio(&p)?, ball_ratio: hardy_ratio_ball(&p, 1.0)? })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakFormStudy {
    pub reference_h1: f64,
    pub reference_l2: f64,
    pub snapshots: usize,
    /// H¹-form defect of the extended solution per rung.
    pub report: ConvergenceReport,
}

/// Weak-form defects of the Cauchy reference (at ≥ 512 snapshots) and of the extended
/// exterior solutions along the ladder.
pub fn weak_form_study(spec: &StudySpec) -> Result<WeakFormStudy> {
    spec.validate()?;
    let mut s = spec.clone();
    s.max_snapshots = s.max_snapshots.max(512);
    let base = s.base_data()?;
    let reference = reference_solution(&s, &base)?;
    let reference_h1 = weak_form_residual(&reference, &base, &s.test_fn, WeakForm::H1)?;
    let reference_l2 = weak_form_residual(&reference, &base, &s.test_fn, WeakForm::L2)?;
    let rows: Vec<f64> = s
        .ladder
        .par_iter()
        .map(|&e| {
            let f = extended_solution(&s, &base, e)?;
            Ok(weak_form_residual(&f, &base, &s.test_fn, WeakForm::H1)?.abs())
        })
        .collect::<Result<_>>()?;
    let mut report = ConvergenceReport::default();
    for (&e, v) in s.ladder.iter().zip(rows) {
        report.push("extended_h1_form", e, v);
    }
    report.fit(&[]);
    Ok(WeakFormStudy { reference_h1, reference_l2, snapshots: reference.n_snapshots(), report })
}

/// First-order energy and L² size of `Ũ_n − Ũ_m` over time, with the energy split over
/// the ball `B_{ε_n}`, the annulus `ε_n < r < ε_m` and the exterior `r > ε_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDiagnostics {
    pub n: usize,
    pub m: usize,
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub l2: Vec<f64>,
    pub regions: [Vec<f64>; 3],
}

impl PairDiagnostics {
    pub fn sup_energy(&self) -> f64 {
        self.energy.iter().fold(0.0, |m, v| m.max(*v))
    }

    pub fn sup_l2(&self) -> f64 {
        self.l2.iter().fold(0.0, |m, v| m.max(*v))
    }
}

fn check_pair(spec: &StudySpec, n: usize, m: usize) -> Result<()> {
    if n >= spec.ladder.len() || m >= spec.ladder.len() {
        return Err(invalid(format!("pair ({n}, {m}) outside a ladder of {} rungs", spec.ladder.len())));
    }
    if n < m {
        return Err(invalid(format!("pair ({n}, {m}) needs n ≥ m")));
    }
    Ok(())
}

pub fn cauchy_pair_diagnostics(spec: &StudySpec, n: usize, m: usize) -> Result<PairDiagnostics> {
    if spec.bc != BoundaryKind::NeumannForU {
        return Err(invalid("Cauchy-pair diagnostics use Neumann solutions"));
    }
    check_pair(spec, n, m)?;
    spec.validate()?;
    let base = spec.base_data()?;
    let fn_ = extended_solution(spec, &base, spec.ladder[n])?;
    let fm = if n == m { fn_.clone() } else { extended_solution(spec, &base, spec.ladder[m])? };
    pair_from_fields(&fn_, &fm, (n, m), (spec.ladder[n], spec.ladder[m]), spec.c)
}

fn pair_from_fields(
    a: &WaveField<f64>,
    b: &WaveField<f64>,
    (n, m): (usize, usize),
    (eps_n, eps_m): (f64, f64),
    c: f64,
) -> Result<PairDiagnostics> {
    let g = *a.grid();
    let diff = |x: Vec<f64>, y: Vec<f64>| -> Result<RadialProfile<f64>> {
        RadialProfile::from_values(g, x.iter().zip(&y).map(|(p, q)| p - q).collect())
    };
    let mut out = PairDiagnostics {
        n,
        m,
        times: a.times().to_vec(),
        energy: Vec::new(),
        l2: Vec::new(),
        regions: [Vec::new(), Vec::new(), Vec::new()],
    };
    let regions: Vec<Option<RegionSpec<f64>>> = if eps_n < eps_m {
        vec![Some(RegionSpec::Ball(eps_n)), Some(RegionSpec::Annulus(eps_n, eps_m)), Some(RegionSpec::Exterior(eps_m))]
    } else {
        vec![Some(RegionSpec::Ball(eps_n)), None, Some(RegionSpec::Exterior(eps_n))]
    };
    for k in 0..a.n_snapshots() {
        let z = diff(a.u(k), b.u(k))?;
        let zt = diff(a.ut(k), b.ut(k))?;
        let energy_on = |r: RegionSpec<f64>| -> Result<f64> {
            let nz = norms(&z, r)?;
            let nt = norms(&zt, r)?;
            Ok(0.5 * (nt.l2 * nt.l2 + c * c * nz.h1_semi * nz.h1_semi))
        };
        out.energy.push(energy_on(RegionSpec::AllSpace)?);
        out.l2.push(norms(&z, RegionSpec::AllSpace)?.l2);
        for (slot, r) in out.regions.iter_mut().zip(&regions) {
            slot.push(match r {
                Some(r) => energy_on(*r)?,
                None => 0.0,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::spec::dyadic_ladder;

    fn small(bc: BoundaryKind) -> StudySpec {
        let mut s = StudySpec::gaussian(bc);
        s.ladder = dyadic_ladder(2, 4);
        s.max_snapshots = 33;
        s
    }

    #[test]
    fn zero_data_gives_zero_distances_and_residuals() {
        for bc in [BoundaryKind::NeumannForU, BoundaryKind::DirichletForU] {
            let s = small(bc).with_data(Shape::zero(), Shape::zero());
            let rep = solution_convergence_study(&s).unwrap();
            assert!(rep.rows.iter().all(|r| r.value == 0.0), "{bc}");
        }
        let s = small(BoundaryKind::DirichletForU).with_data(Shape::zero(), Shape::zero());
        let r = residual_study(&s).unwrap();
        assert!(r.report.values("residual").iter().all(|v| *v == 0.0));
        assert_eq!(r.shell_residual, 0.0);
    }

    #[test]
    fn shell_test_function_has_zero_residual() {
        let r = residual_study(&small(BoundaryKind::DirichletForU)).unwrap();
        assert_eq!(r.shell_residual, 0.0);
        assert!(r.report.values("residual").iter().all(|v| *v > 0.0));
    }

    #[test]
    fn pair_with_itself_is_zero() {
        let d = cauchy_pair_diagnostics(&small(BoundaryKind::NeumannForU), 1, 1).unwrap();
        assert_eq!(d.sup_energy(), 0.0);
        assert_eq!(d.sup_l2(), 0.0);
    }

    #[test]
    fn pair_regions_add_up() {
        let d = cauchy_pair_diagnostics(&small(BoundaryKind::NeumannForU), 2, 0).unwrap();
        for k in 0..d.times.len() {
            let parts: f64 = d.regions.iter().map(|r| r[k]).sum();
            assert!((parts - d.energy[k]).abs() <= 1e-9 * d.energy[k].max(1e-300), "{parts} vs {}", d.energy[k]);
        }
        assert!(cauchy_pair_diagnostics(&small(BoundaryKind::NeumannForU), 0, 2).is_err());
        assert!(cauchy_pair_diagnostics(&small(BoundaryKind::NeumannForU), 3, 0).is_err());
    }

    #[test]
    fn residual_study_rejects_neumann() {
        assert!(residual_study(&small(BoundaryKind::NeumannForU)).is_err());
    }
}
