#![allow(dead_code)]

//! Closed-form oracles shared by the integration tests. The oracles never call the
//! library's data construction, reference solution or norms.

use radial_limits::construction::dirichlet_data;
use radial_limits::profiles::{CauchyDataPair, RadialGrid, RadialProfile, Regularity, Shape};
use radial_limits::quadrature::GaussRule;
use radial_limits::solver::{solve_with, BoundaryKind, ExteriorProblem, TimeSchedule};

/// Quintic smoothstep cutoff: 0 on [0,1], 1 on [2,∞).
pub fn chi(s: f64) -> f64 {
    if s <= 1.0 {
        0.0
    } else if s >= 2.0 {
        1.0
    } else {
        let t = s - 1.0;
        t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// Exterior Dirichlet problem for `z = r·u` on `r > ε`, solved by d'Alembert's formula
/// after odd reflection about `r = ε`.
pub struct ReflectedDalembert {
    pub eps: f64,
    pub c: f64,
    z0: Box<dyn Fn(f64) -> f64 + Sync>,
    z1: Box<dyn Fn(f64) -> f64 + Sync>,
    /// Cumulative `∫_ε^{ε+k·cell} z1` at cell boundaries.
    cumulative: Vec<f64>,
    cell: f64,
    rule: GaussRule<f64>,
}

impl ReflectedDalembert {
    pub fn new(
        eps: f64,
        c: f64,
        reach: f64,
        z0: impl Fn(f64) -> f64 + Sync + 'static,
        z1: impl Fn(f64) -> f64 + Sync + 'static,
    ) -> Self {
        let rule = GaussRule::new(12);
        let cell = eps / 64.0;
        let cells = (reach / cell).ceil() as usize + 1;
        let mut cumulative = Vec::with_capacity(cells + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..cells {
            let a = eps + k as f64 * cell;
            acc += rule.integrate(a, a + cell, &z1);
            cumulative.push(acc);
        }
        Self { eps, c, z0: Box::new(z0), z1: Box::new(z1), cumulative, cell, rule }
    }

    fn odd(&self, f: &dyn Fn(f64) -> f64, s: f64) -> f64 {
        if s >= 0.0 {
            f(self.eps + s)
        } else {
            -f(self.eps - s)
        }
    }

    /// `∫_0^{|s|} z1(ε + σ) dσ`, even in `s`.
    fn even_primitive(&self, s: f64) -> f64 {
        let s = s.abs();
        let k = ((s / self.cell) as usize).min(self.cumulative.len() - 1);
        let a = self.eps + k as f64 * self.cell;
        self.cumulative[k] + self.rule.integrate(a, self.eps + s, &*self.z1)
    }

    pub fn z(&self, t: f64, r: f64) -> f64 {
        let s = r - self.eps;
        let ct = self.c * t;
        0.5 * (self.odd(&*self.z0, s + ct) + self.odd(&*self.z0, s - ct))
            + 0.5 / self.c * (self.even_primitive(s + ct) - self.even_primitive(s - ct))
    }
}

/// Gaussian data on an 8-unit grid with `n` intervals, solved for ε = 1/4 with 9 snapshots;
/// max-norm error of the exterior Dirichlet leapfrog against reflected d'Alembert.
pub fn dirichlet_oracle_error(n: usize) -> f64 {
    let eps = 0.25;
    let g = RadialGrid::new(8.0, n + 1).unwrap();
    let data = dirichlet_data(&gaussian_pair(g), eps).unwrap();
    let p = ExteriorProblem::new(eps, BoundaryKind::DirichletForU, data, 1.0, 1.0).unwrap();
    let s = TimeSchedule::new(&g, 1.0, 0.5, 1.0, 9).unwrap();
    let f = solve_with(&p, &s).unwrap();
    let oracle = ReflectedDalembert::new(
        eps,
        1.0,
        8.0,
        move |r| r * (-r * r).exp() * chi(r / eps),
        move |r| r * (-2.0 * r * r).exp() * chi(r / eps),
    );
    let j0 = g.index_of(eps).unwrap();
    let mut err = 0.0f64;
    for (k, &t) in f.times().iter().enumerate() {
        for j in j0..g.len() {
            err = err.max((f.z(k)[j] - oracle.z(t, g.node(j))).abs());
        }
    }
    err
}

pub fn gaussian_pair(g: RadialGrid<f64>) -> CauchyDataPair<f64> {
    CauchyDataPair::new(
        RadialProfile::sample(Shape::gaussian_bump(1.0), g),
        RadialProfile::sample(Shape::gaussian_bump(2.0), g),
        Regularity::SmoothCompact,
    )
    .unwrap()
}
