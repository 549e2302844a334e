use radial_limits::harness::{
    cauchy_pair_diagnostics, data_rate_study, residual_study, solution_convergence_study, StudySpec,
};
use radial_limits::profiles::Shape;
use radial_limits::solver::{energies, solve_with, BoundaryKind};

#[test]
fn scaling_data_scales_norms_and_energies() {
    let lambda = 3.0;
    for bc in [BoundaryKind::NeumannForU, BoundaryKind::DirichletForU] {
        let spec = StudySpec::gaussian(bc);
        let scaled = spec.clone().with_data(spec.position.clone().scaled(lambda), spec.velocity.clone().scaled(lambda));
        let (a, b) = (data_rate_study(&spec).unwrap(), data_rate_study(&scaled).unwrap());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert!((rb.value - lambda * ra.value).abs() <= 1e-10 * rb.value, "{ra:?} {rb:?}");
        }
        for q in ["l2", "h1", "h2"] {
            assert!((a.slope(q).unwrap() - b.slope(q).unwrap()).abs() < 1e-10);
        }
        let base = spec.base_data().unwrap();
        let sbase = scaled.base_data().unwrap();
        let sched = spec.schedule(base.grid()).unwrap();
        let ea = energies(&solve_with(&spec.problem(&base, 0.125).unwrap(), &sched).unwrap());
        let eb = energies(&solve_with(&scaled.problem(&sbase, 0.125).unwrap(), &sched).unwrap());
        for (x, y) in ea.first_order.iter().zip(&eb.first_order).chain(ea.second_order.iter().zip(&eb.second_order)) {
            assert!((y - lambda * lambda * x).abs() <= 1e-10 * y, "{x} {y}");
        }
    }
}

#[test]
fn slopes_are_stable_under_grid_refinement() {
    for bc in [BoundaryKind::NeumannForU, BoundaryKind::DirichletForU] {
        let spec = StudySpec::gaussian(bc);
        let mut fine = spec.clone();
        fine.grid.scale = 2;
        let (a, b) = (data_rate_study(&spec).unwrap(), data_rate_study(&fine).unwrap());
        for q in ["l2", "h1", "h2"] {
            let d = (a.slope(q).unwrap() - b.slope(q).unwrap()).abs();
            assert!(d < 0.2, "{bc} {q}: slope moved by {d}");
        }
    }
    let spec = StudySpec::gaussian(BoundaryKind::DirichletForU);
    let mut fine = spec.clone();
    fine.grid.scale = 2;
    let (a, b) = (residual_study(&spec).unwrap(), residual_study(&fine).unwrap());
    let d = (a.report.slope("residual").unwrap() - b.report.slope("residual").unwrap()).abs();
    assert!(d < 0.3, "residual slope moved by {d}");
}

#[test]
fn finer_cauchy_pairs_are_closer() {
    let spec = StudySpec::gaussian(BoundaryKind::NeumannForU);
    let fine = cauchy_pair_diagnostics(&spec, 5, 4).unwrap();
    let coarse = cauchy_pair_diagnostics(&spec, 3, 2).unwrap();
    assert!(fine.sup_energy() < coarse.sup_energy(), "{} vs {}", fine.sup_energy(), coarse.sup_energy());
    assert!(fine.sup_l2() < coarse.sup_l2());
    assert!(fine.energy.iter().all(|e| *e >= 0.0));
    assert!(cauchy_pair_diagnostics(&spec, 9, 1).is_err());
    let zero = spec.clone().with_data(Shape::zero(), Shape::zero());
    assert_eq!(cauchy_pair_diagnostics(&zero, 5, 4).unwrap().sup_energy(), 0.0);
}

#[test]
fn under_resolved_ladder_is_rejected() {
    let mut spec = StudySpec::gaussian(BoundaryKind::NeumannForU);
    spec.grid.n_r = Some(1 << 10);
    let err = data_rate_study(&spec).unwrap_err().to_string();
    assert!(err.contains("eps_resolution"), "{err}");
    assert!(solution_convergence_study(&spec).is_err());
}

#[test]
fn dirichlet_h2_grows_while_neumann_stays_bounded() {
    let d = data_rate_study(&StudySpec::gaussian(BoundaryKind::DirichletForU)).unwrap();
    let n = data_rate_study(&StudySpec::gaussian(BoundaryKind::NeumannForU)).unwrap();
    let (dh, nh) = (d.values("h2"), n.values("h2"));
    assert!(dh.windows(2).all(|w| w[1] > w[0]));
    assert!(nh.iter().all(|v| *v <= nh[0]));
    let ratio = dh.iter().zip(&nh).map(|(a, b)| a / b).fold(0.0, f64::max);
    assert!(ratio >= 10.0, "{ratio}");
}
