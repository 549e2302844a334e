//! Leapfrog solver for the reduced unknown `z = r·u`, the exact full-space
//! reference, extensions onto the ball, energies and boundary traces.

mod energy;
mod field;
mod problem;
mod reference;
mod schedule;
mod solve;

pub use energy::{energies, relative_drift, EnergyReport};
pub use field::{field_distance, lipschitz, BoundaryHistory, ExtensionRule, LipschitzReport, Trace, WaveField};
pub use problem::{BoundaryKind, ExteriorProblem, SUPPORT_TOL};
pub use reference::reference_cauchy;
pub use schedule::{TimeSchedule, DEFAULT_MAX_SNAPSHOTS};
pub use solve::{solve, solve_with};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{dirichlet_data, neumann_data};
    use crate::norms::Order;
    use crate::profiles::{CauchyDataPair, RadialGrid, RadialProfile, Regularity, Shape};

    fn grid(log_n: u32) -> RadialGrid<f64> {
        RadialGrid::new(8.0, (1 << log_n) + 1).unwrap()
    }

    fn gaussian(g: RadialGrid<f64>) -> CauchyDataPair<f64> {
        CauchyDataPair::new(
            RadialProfile::sample(Shape::gaussian_bump(1.0), g),
            RadialProfile::sample(Shape::gaussian_bump(2.0), g),
            Regularity::SmoothCompact,
        )
        .unwrap()
    }

    #[test]
    fn zero_data_gives_zero_field() {
        let g = grid(10);
        let p = ExteriorProblem::new(0.25, BoundaryKind::NeumannForU, CauchyDataPair::zeros(g), 1.0, 1.0).unwrap();
        let f = solve(&p, 0.5).unwrap();
        assert!(f.z.iter().chain(&f.zt).all(|row| row.iter().all(|v| *v == 0.0)));
        let e = energies(&f);
        assert!(e.first_order.iter().chain(&e.second_order).all(|v| *v == 0.0));
        assert!(f.boundary_trace(Trace::UtAtEps).1.iter().all(|v| *v == 0.0));
        let r = reference_cauchy(&CauchyDataPair::zeros(g), 1.0, f.schedule()).unwrap();
        assert!(r.z.iter().all(|row| row.iter().all(|v| *v == 0.0)));
    }

    #[test]
    fn problem_validation() {
        let g = grid(10);
        let d = gaussian(g);
        assert!(ExteriorProblem::new(0.25, BoundaryKind::NeumannForU, d.clone(), 1.0, 1.0).is_err());
        assert!(ExteriorProblem::new(0.25, BoundaryKind::DirichletForU, d.clone(), 1.0, 1.0).is_err());
        assert!(ExteriorProblem::new(0.0, BoundaryKind::DirichletForU, d.clone(), 1.0, 9.0).is_err());
        assert!(ExteriorProblem::new(0.0, BoundaryKind::DirichletForU, d.clone(), -1.0, 1.0).is_err());
        let n = neumann_data(&d, 0.25).unwrap();
        let p = ExteriorProblem::new(0.25, BoundaryKind::NeumannForU, n, 1.0, 1.0).unwrap();
        let s = TimeSchedule { dt: 0.1, n_steps: 10, stride: 1, horizon: 1.0 };
        assert!(solve_with(&p, &s).is_err(), "CFL violation must be rejected");
        assert!(solve(&p, 1.5).is_err());
    }

    #[test]
    fn reference_reproduces_data_at_time_zero() {
        let g = grid(11);
        let d = gaussian(g);
        let s = TimeSchedule::new(&g, 1.0, 0.5, 1.0, 16).unwrap();
        let r = reference_cauchy(&d, 1.0, &s).unwrap();
        let u0 = r.u(0);
        let ut0 = r.ut(0);
        // the origin value comes from a one-sided 4th-order slope of z
        assert!((u0[0] - 1.0).abs() < 1e-8);
        for j in 1..g.len() - 1 {
            assert!((u0[j] - d.position.values()[j]).abs() < 1e-10, "node {j}: {} vs {}", u0[j], d.position.values()[j]);
            assert!((ut0[j] - d.velocity.values()[j]).abs() < 1e-10, "node {j}: {} vs {}", ut0[j], d.velocity.values()[j]);
        }
    }

    #[test]
    fn neumann_extension_is_c1_and_constant_on_ball() {
        let max_slope = |log_n: u32| {
            let g = grid(log_n);
            let n = neumann_data(&gaussian(g), 0.25).unwrap();
            let p = ExteriorProblem::new(0.25, BoundaryKind::NeumannForU, n, 1.0, 1.0).unwrap();
            let f = solve(&p, 0.5).unwrap();
            let ur = f.boundary_trace(Trace::UrAtEps).1;
            (f, ur.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        };
        let (_, coarse) = max_slope(11);
        let (f, fine) = max_slope(12);
        assert!(coarse / fine > 3.5, "one-sided slope at ε should shrink like Δr²: {coarse} -> {fine}");
        let g = *f.grid();
        let e = f.extend().unwrap();
        assert!(e.extend().is_err());
        let j = g.index_of(0.125).unwrap();
        for k in [0, 7, e.n_snapshots() - 1] {
            let u = e.u(k);
            assert_eq!(u[j], u[g.index_of(0.25).unwrap()]);
        }
    }

    #[test]
    fn dirichlet_field_pins_boundary_and_conserves_1d_energies() {
        let g = grid(12);
        let d = dirichlet_data(&gaussian(g), 0.25).unwrap();
        let p = ExteriorProblem::new(0.25, BoundaryKind::DirichletForU, d, 1.0, 1.0).unwrap();
        let f = solve(&p, 0.5).unwrap();
        let j0 = g.index_of(0.25).unwrap();
        assert!(f.z.iter().all(|row| row[j0] == 0.0));
        assert!(f.boundary_trace(Trace::UtAtEps).1.iter().all(|v| *v == 0.0));
        let e = energies(&f);
        assert!(relative_drift(&e.z_energy) < 1e-3);
        assert!(relative_drift(&e.w_energy) < 1e-3);
        let x = f.extend().unwrap();
        assert!(x.u(3)[..j0].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn field_distance_contracts() {
        let g = grid(10);
        let d = dirichlet_data(&gaussian(g), 0.25).unwrap();
        let p = ExteriorProblem::new(0.25, BoundaryKind::DirichletForU, d, 1.0, 1.0).unwrap();
        let f = solve(&p, 0.5).unwrap();
        assert!(field_distance(&f, &f, Order::L2).is_err(), "unextended fields are rejected");
        let x = f.extend().unwrap();
        assert_eq!(field_distance(&x, &x, Order::H1).unwrap(), 0.0);
        let coarse = TimeSchedule::new(&g, 1.0, 0.5, 1.0, 8).unwrap();
        let other = solve_with(&p, &coarse).unwrap().extend().unwrap();
        assert!(field_distance(&x, &other, Order::L2).is_err());
    }

    #[test]
    fn lipschitz_quotient_below_bound() {
        let g = grid(11);
        let n = neumann_data(&gaussian(g), 0.25).unwrap();
        let p = ExteriorProblem::new(0.25, BoundaryKind::NeumannForU, n, 1.0, 1.0).unwrap();
        let f = solve(&p, 0.5).unwrap().extend().unwrap();
        let l = lipschitz(&f).unwrap();
        assert!(l.max_quotient <= l.bound * 1.01, "{l:?}");
    }

    #[test]
    fn single_precision_solve_runs() {
        let g = RadialGrid::<f32>::new(8.0, 1025).unwrap();
        let d = CauchyDataPair::new(
            RadialProfile::sample(Shape::gaussian_bump(1.0f32), g),
            RadialProfile::zeros(g),
            Regularity::SmoothCompact,
        )
        .unwrap();
        let p = ExteriorProblem::full_space(d, 1.0, 1.0).unwrap();
        let f = solve(&p, 0.5).unwrap();
        let e = energies(&f);
        assert!(relative_drift(&e.first_order) < 1e-2);
    }
}
