use crate::construction::{dirichlet_data, neumann_data};
use crate::error::{invalid, Result};
use crate::profiles::{CauchyDataPair, RadialGrid, RadialProfile, Regularity, Shape};
use crate::solver::{BoundaryKind, ExteriorProblem, TimeSchedule, DEFAULT_MAX_SNAPSHOTS};

/// Space-time test function `V(t,x) = a(t)·b(|x|)` with `a(t) = (1 - (t/T)²)⁴`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub horizon: f64,
    pub b: Shape<f64>,
}

impl TestFunction {
    pub fn new(horizon: f64, b: Shape<f64>) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(invalid("test function horizon must be positive"));
        }
        if !b.support_radius().is_finite() {
            return Err(invalid("test function must have compact spatial support"));
        }
        Ok(Self { horizon, b })
    }

    /// `(a, a′, a″)` at `t`; all three vanish for `t >= T`.
    pub fn time_jet(&self, t: f64) -> (f64, f64, f64) {
        let s = t / self.horizon;
        if s.abs() >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let q = 1.0 - s * s;
        let t2 = self.horizon * self.horizon;
        let a = q.powi(4);
        let da = -8.0 * t / t2 * q.powi(3);
        let dda = -8.0 / t2 * q.powi(3) + 48.0 * t * t / (t2 * t2) * q.powi(2);
        (a, da, dda)
    }
}

/// Grid refinement policy shared by every rung of a ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    pub r_max: f64,
    /// Cells across the smallest ε; ignored when `n_r` is set.
    pub cells_per_min_eps: usize,
    /// Explicit number of intervals on `[0, r_max]`.
    pub n_r: Option<usize>,
    /// Refinement multiplier applied to the interval count.
    pub scale: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { r_max: 8.0, cells_per_min_eps: 16, n_r: None, scale: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudySpec {
    pub position: Shape<f64>,
    pub velocity: Shape<f64>,
    pub regularity: Regularity,
    pub ladder: Vec<f64>,
    pub bc: BoundaryKind,
    pub c: f64,
    pub horizon: f64,
    pub cfl: f64,
    pub grid: GridPolicy,
    pub max_snapshots: usize,
    pub test_fn: TestFunction,
}

pub fn dyadic_ladder(n_min: u32, n_max: u32) -> Vec<f64> {
    (n_min..=n_max).map(|n| 0.5f64.powi(n as i32)).collect()
}

impl StudySpec {
    /// Gaussian data `(e^{-r²}, e^{-2r²})` on the ladder `2^-2..2^-7`.
    pub fn gaussian(bc: BoundaryKind) -> Self {
        Self {
            position: Shape::gaussian_bump(1.0),
            velocity: Shape::gaussian_bump(2.0),
            regularity: Regularity::SmoothCompact,
            ladder: dyadic_ladder(2, 7),
            bc,
            c: 1.0,
            horizon: 1.0,
            cfl: 0.5,
            grid: GridPolicy::default(),
            max_snapshots: DEFAULT_MAX_SNAPSHOTS,
            test_fn: TestFunction { horizon: 1.0, b: Shape::poly_bump(1.5, 4) },
        }
    }

    pub fn with_data(mut self, position: Shape<f64>, velocity: Shape<f64>) -> Self {
        self.position = position;
        self.velocity = velocity;
        self
    }

    pub fn eps_min(&self) -> f64 {
        self.ladder.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn intervals(&self) -> usize {
        let base = match self.grid.n_r {
            Some(n) => n,
            None => (self.grid.r_max / self.eps_min() * self.grid.cells_per_min_eps as f64).round() as usize,
        };
        base * self.grid.scale.max(1)
    }

    pub fn make_grid(&self) -> Result<RadialGrid<f64>> {
        RadialGrid::new(self.grid.r_max, self.intervals() + 1)
    }

    /// Structural checks; returns the list of violations (empty when valid).
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.ladder.is_empty() {
            v.push("ladder is empty".to_string());
        }
        if self.ladder.iter().any(|e| !(*e > 0.0)) {
            v.push("ladder entries must be positive".to_string());
        }
        if self.ladder.windows(2).any(|w| w[1] >= w[0]) {
            v.push("ladder must be strictly decreasing".to_string());
        }
        if !(self.c > 0.0) || !(self.horizon > 0.0) {
            v.push("wave speed and horizon must be positive".to_string());
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            v.push(format!("cfl {} outside (0, 1]", self.cfl));
        }
        if self.test_fn.horizon != self.horizon {
            v.push("test function horizon differs from the study horizon".to_string());
        }
        let grid = match self.make_grid() {
            Ok(g) => g,
            Err(e) => {
                v.push(format!("grid: {e}"));
                return v;
            }
        };
        let h = grid.spacing();
        for &e in &self.ladder {
            if e < 8.0 * h * (1.0 - 1e-9) {
                v.push(format!("eps_resolution: ε = {e} has fewer than 8 cells (Δr = {h})"));
            } else if grid.index_of(e).is_none() {
                v.push(format!("eps_on_grid: ε = {e} is not a grid node (Δr = {h})"));
            }
            if 2.0 * e >= grid.r_max() {
                v.push(format!("eps_range: 2ε = {} reaches r_max", 2.0 * e));
            }
        }
        let data = self.base_data_on(grid);
        let reach = data.effective_support(crate::solver::SUPPORT_TOL) + self.c * self.horizon;
        if reach > grid.r_max() {
            v.push(format!("truncation: data support plus c·T = {reach} exceeds r_max = {}", grid.r_max()));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(invalid(v.join("; ")))
        }
    }

    fn base_data_on(&self, grid: RadialGrid<f64>) -> CauchyDataPair<f64> {
        CauchyDataPair {
            position: RadialProfile::sample(self.position.clone(), grid),
            velocity: RadialProfile::sample(self.velocity.clone(), grid),
            regularity: self.regularity,
        }
    }

    pub fn base_data(&self) -> Result<CauchyDataPair<f64>> {
        Ok(self.base_data_on(self.make_grid()?))
    }

    /// Boundary-compatible data for one rung.
    pub fn constructed(&self, base: &CauchyDataPair<f64>, eps: f64) -> Result<CauchyDataPair<f64>> {
        match self.bc {
            BoundaryKind::NeumannForU => neumann_data(base, eps),
            BoundaryKind::DirichletForU => dirichlet_data(base, eps),
        }
    }

    pub fn problem(&self, base: &CauchyDataPair<f64>, eps: f64) -> Result<ExteriorProblem<f64>> {
        ExteriorProblem::new(eps, self.bc, self.constructed(base, eps)?, self.c, self.horizon)
    }

    pub fn schedule(&self, grid: &RadialGrid<f64>) -> Result<TimeSchedule<f64>> {
        TimeSchedule::new(grid, self.c, self.cfl, self.horizon, self.max_snapshots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_policy() {
        let s = StudySpec::gaussian(BoundaryKind::NeumannForU);
        assert_eq!(s.intervals(), 1 << 14);
        let g = s.make_grid().unwrap();
        assert_eq!(g.spacing(), 2f64.powi(-11));
        assert!(s.violations().is_empty(), "{:?}", s.violations());
    }

    #[test]
    fn under_resolved_ladder_is_named() {
        let mut s = StudySpec::gaussian(BoundaryKind::DirichletForU);
        s.grid.n_r = Some(1 << 9);
        let v = s.violations();
        assert!(v.iter().any(|m| m.starts_with("eps_resolution")), "{v:?}");
    }

    #[test]
    fn time_jet_matches_differences() {
        let tf = TestFunction::new(1.0, Shape::poly_bump(1.5, 4)).unwrap();
        let h = 1e-5;
        for t in [0.0, 0.3, 0.77] {
            let (_, da, dda) = tf.time_jet(t);
            let (ap, dap, _) = tf.time_jet(t + h);
            let (am, dam, _) = tf.time_jet(t - h);
            assert!((da - (ap - am) / (2.0 * h)).abs() < 1e-7);
            assert!((dda - (dap - dam) / (2.0 * h)).abs() < 1e-6);
        }
        assert_eq!(tf.time_jet(1.0), (0.0, 0.0, 0.0));
        assert!(TestFunction::new(1.0, Shape::gaussian_bump(1.0)).is_err());
    }
}
