use std::fmt::Write as _;

use super::problem::{BoundaryKind, ExteriorProblem};
use super::schedule::TimeSchedule;
use crate::error::{invalid, Result};
use crate::norms::{norms, Order, RegionSpec};
use crate::profiles::{RadialGrid, RadialProfile};
use crate::scalar::Real;
use crate::stencil::fornberg;

/// How `u` is continued onto the ball `r < ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionRule {
    None,
    ConstantOnBall,
    ZeroOnBall,
}

/// `z` at the first three nodes from the boundary at every time level, plus `z_t` at the boundary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryHistory<T> {
    pub z: Vec<[T; 3]>,
    pub zt: Vec<T>,
}

/// Stored snapshots of `z = r·u` and `z_t` on the full grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField<T> {
    pub(crate) problem: ExteriorProblem<T>,
    pub(crate) schedule: TimeSchedule<T>,
    pub(crate) times: Vec<T>,
    pub(crate) z: Vec<Vec<T>>,
    pub(crate) zt: Vec<Vec<T>>,
    pub(crate) extension: ExtensionRule,
    pub(crate) boundary: BoundaryHistory<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trace {
    UtAtEps,
    UrAtEps,
    ZrAtEps,
}

impl<T: Real> WaveField<T> {
    pub fn problem(&self) -> &ExteriorProblem<T> {
        &self.problem
    }

    pub fn grid(&self) -> &RadialGrid<T> {
        self.problem.data.grid()
    }

    pub fn schedule(&self) -> &TimeSchedule<T> {
        &self.schedule
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn n_snapshots(&self) -> usize {
        self.times.len()
    }

    pub fn z(&self, k: usize) -> &[T] {
        &self.z[k]
    }

    pub fn zt(&self, k: usize) -> &[T] {
        &self.zt[k]
    }

    pub fn extension(&self) -> ExtensionRule {
        self.extension
    }

    pub fn boundary_history(&self) -> &BoundaryHistory<T> {
        &self.boundary
    }

    /// First node where `u` is defined without an extension.
    pub fn first_node(&self) -> usize {
        match self.extension {
            ExtensionRule::None => self.problem.boundary_index(),
            _ => 0,
        }
    }

    fn origin_slope(&self, row: &[T]) -> T {
        let xs: Vec<T> = (0..5).map(T::from_index).collect();
        let w = fornberg(T::zero(), &xs, 1);
        (0..5).map(|k| w[1][k] * row[k]).sum::<T>() / self.grid().spacing()
    }

    fn to_u(&self, row: &[T]) -> Vec<T> {
        let g = self.grid();
        let j0 = self.problem.boundary_index();
        let mut u: Vec<T> = (0..g.len())
            .map(|j| if j == 0 { T::zero() } else { row[j] / g.node(j) })
            .collect();
        if self.problem.is_full_space() {
            u[0] = self.origin_slope(row);
        } else {
            match self.extension {
                ExtensionRule::ConstantOnBall => {
                    let ue = row[j0] / self.problem.eps;
                    u[..j0].iter_mut().for_each(|v| *v = ue);
                }
                ExtensionRule::ZeroOnBall | ExtensionRule::None => {
                    u[..j0].iter_mut().for_each(|v| *v = T::zero());
                }
            }
        }
        u
    }

    /// `u(t_k, ·)` on the full grid; zero inside the ball unless extended.
    pub fn u(&self, k: usize) -> Vec<T> {
        self.to_u(&self.z[k])
    }

    pub fn ut(&self, k: usize) -> Vec<T> {
        self.to_u(&self.zt[k])
    }

    /// Continues the exterior field onto the ball.
    pub fn extend(&self) -> Result<Self> {
        if self.problem.is_full_space() {
            return Err(invalid("full-space fields have no ball to extend onto"));
        }
        if self.extension != ExtensionRule::None {
            return Err(invalid("field is already extended"));
        }
        let mut out = self.clone();
        let g = *self.grid();
        let j0 = self.problem.boundary_index();
        let eps = self.problem.eps;
        match self.problem.bc {
            BoundaryKind::NeumannForU => {
                for rows in [&mut out.z, &mut out.zt] {
                    for row in rows.iter_mut() {
                        let ue = row[j0] / eps;
                        for (j, v) in row.iter_mut().enumerate().take(j0) {
                            *v = g.node(j) * ue;
                        }
                    }
                }
                out.extension = ExtensionRule::ConstantOnBall;
            }
            BoundaryKind::DirichletForU => {
                for rows in [&mut out.z, &mut out.zt] {
                    for row in rows.iter_mut() {
                        row[..j0].iter_mut().for_each(|v| *v = T::zero());
                    }
                }
                out.extension = ExtensionRule::ZeroOnBall;
            }
        }
        Ok(out)
    }

    /// Per-level trace at `r = ε` from one-sided second-order differences.
    /// Returns `(times, values)` over all time levels.
    pub fn boundary_trace(&self, which: Trace) -> (Vec<T>, Vec<T>) {
        let h = self.grid().spacing();
        let eps = self.problem.eps;
        let two = T::lit(2.0);
        let times = (0..self.boundary.z.len()).map(|l| self.schedule.level_time(l)).collect();
        let vals = self
            .boundary
            .z
            .iter()
            .zip(&self.boundary.zt)
            .map(|(z, &zt)| {
                let zr = (T::lit(-3.0) * z[0] + T::lit(4.0) * z[1] - z[2]) / (two * h);
                match which {
                    Trace::ZrAtEps => zr,
                    Trace::UtAtEps if eps.is_zero() => T::zero(),
                    Trace::UtAtEps => zt / eps,
                    Trace::UrAtEps if eps.is_zero() => T::zero(),
                    Trace::UrAtEps => zr / eps - z[0] / (eps * eps),
                }
            })
            .collect();
        (times, vals)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.grid().same_as(other.grid()) || self.times.len() != other.times.len() {
            return Err(invalid("fields have different discretizations"));
        }
        if self
            .times
            .iter()
            .zip(&other.times)
            .any(|(a, b)| (*a - *b).abs() > T::lit(1e-12) * (T::one() + a.abs()))
        {
            return Err(invalid("fields have different time nodes"));
        }
        for f in [self, other] {
            if !f.problem.is_full_space() && f.extension == ExtensionRule::None {
                return Err(invalid("field must be extended over the ball first"));
            }
        }
        Ok(())
    }

    /// `‖u_a(t_k) − u_b(t_k)‖` over all space, per snapshot.
    pub fn distance_series(&self, other: &Self, order: Order) -> Result<Vec<T>> {
        self.check_compatible(other)?;
        (0..self.times.len())
            .map(|k| {
                let diff: Vec<T> = self.u(k).iter().zip(other.u(k)).map(|(a, b)| *a - b).collect();
                snapshot_norm(self.grid(), diff, order)
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let g = self.grid();
        let mut s = String::from("t,r,z,u\n");
        for k in 0..self.times.len() {
            let u = self.u(k);
            for j in 0..g.len() {
                let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e}", self.times[k], g.node(j), self.z[k][j], u[j]);
            }
        }
        s
    }
}

pub(crate) fn snapshot_norm<T: Real>(grid: &RadialGrid<T>, values: Vec<T>, order: Order) -> Result<T> {
    if values.iter().all(|v| v.is_zero()) {
        return Ok(T::zero());
    }
    let p = RadialProfile::from_values(*grid, values)?;
    Ok(norms(&p, RegionSpec::AllSpace)?.full(order))
}

/// Sup over stored snapshots of the distance between two extended fields.
pub fn field_distance<T: Real>(a: &WaveField<T>, b: &WaveField<T>, order: Order) -> Result<T> {
    Ok(a.distance_series(b, order)?.into_iter().fold(T::zero(), T::max))
}

/// Lipschitz-in-time check: largest snapshot difference quotient of `‖u(t)‖_{H¹}`
/// against the bound `sup_k ‖u_t(t_k)‖_{H¹}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzReport<T> {
    pub max_quotient: T,
    pub bound: T,
}

pub fn lipschitz<T: Real>(field: &WaveField<T>) -> Result<LipschitzReport<T>> {
    let g = field.grid();
    let n = field.n_snapshots();
    let mut max_quotient = T::zero();
    let mut bound = T::zero();
    let mut prev = field.u(0);
    for k in 0..n {
        bound = bound.max(snapshot_norm(g, field.ut(k), Order::H1)?);
        if k > 0 {
            let cur = field.u(k);
            let diff: Vec<T> = cur.iter().zip(&prev).map(|(a, b)| *a - *b).collect();
            let dt = field.times[k] - field.times[k - 1];
            max_quotient = max_quotient.max(snapshot_norm(g, diff, Order::H1)? / dt);
            prev = cur;
        }
    }
    Ok(LipschitzReport { max_quotient, bound })
}
