use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, LabError, Result};
use crate::profiles::CauchyDataPair;
use crate::scalar::Real;

/// Boundary condition imposed on `u` at `r = ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    NeumannForU,
    DirichletForU,
}

impl FromStr for BoundaryKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "neumann" | "neumann_for_u" => Ok(Self::NeumannForU),
            "dirichlet" | "dirichlet_for_u" => Ok(Self::DirichletForU),
            other => Err(invalid(format!("unknown boundary kind '{other}'"))),
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NeumannForU => "neumann",
            Self::DirichletForU => "dirichlet",
        })
    }
}

/// Relative amplitude below which data is treated as vanished when checking supports.
pub const SUPPORT_TOL: f64 = 1e-13;

/// Radial wave problem on `{|x| > ε}`; `ε = 0` is the full-space Cauchy problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorProblem<T> {
    pub eps: T,
    pub bc: BoundaryKind,
    pub data: CauchyDataPair<T>,
    pub c: T,
    pub horizon: T,
}

impl<T: Real> ExteriorProblem<T> {
    pub fn new(eps: T, bc: BoundaryKind, data: CauchyDataPair<T>, c: T, horizon: T) -> Result<Self> {
        if !(eps >= T::zero()) {
            return Err(invalid(format!("ε must be nonnegative, got {eps}")));
        }
        if !(c > T::zero()) || !(horizon > T::zero()) {
            return Err(invalid("wave speed and horizon must be positive"));
        }
        let g = data.grid();
        if eps > T::zero() {
            if g.index_of(eps).is_none() {
                return Err(invalid(format!("ε = {eps} must be a grid node (Δr = {})", g.spacing())));
            }
            if T::lit(2.0) * eps >= g.r_max() {
                return Err(invalid("ε must be below r_max/2"));
            }
        }
        let reach = data.effective_support(T::lit(SUPPORT_TOL)) + c * horizon;
        if reach > g.r_max() {
            return Err(invalid(format!(
                "r_max = {} too small: data support plus c·T reaches {reach}",
                g.r_max()
            )));
        }
        let p = Self { eps, bc, data, c, horizon };
        p.check_compatibility()?;
        Ok(p)
    }

    /// Full-space problem with the regularity condition `z(t,0) = 0`.
    pub fn full_space(data: CauchyDataPair<T>, c: T, horizon: T) -> Result<Self> {
        Self::new(T::zero(), BoundaryKind::DirichletForU, data, c, horizon)
    }

    pub fn is_full_space(&self) -> bool {
        self.eps.is_zero()
    }

    pub fn boundary_index(&self) -> usize {
        if self.is_full_space() {
            0
        } else {
            self.data.grid().index_of(self.eps).expect("ε on grid")
        }
    }

    fn check_compatibility(&self) -> Result<()> {
        if self.is_full_space() {
            return Ok(());
        }
        let j = self.boundary_index();
        for (name, p) in [("position", &self.data.position), ("velocity", &self.data.velocity)] {
            match self.bc {
                BoundaryKind::DirichletForU => {
                    let v = p.values()[j];
                    let scale = p.values().iter().fold(T::zero(), |m, x| m.max(x.abs()));
                    if v.abs() > T::lit(1e-12) * (T::one() + scale) {
                        return Err(invalid(format!("{name} data does not vanish at r = ε ({v})")));
                    }
                }
                BoundaryKind::NeumannForU => {
                    let d = match p.jet(self.eps) {
                        Some(jet) => jet.d1,
                        None => p.derivatives().0[j],
                    };
                    let scale = p.derivatives().0.iter().fold(T::zero(), |m, x| m.max(x.abs()));
                    if d.abs() > T::lit(1e-6) * (T::one() + scale) {
                        return Err(invalid(format!("{name} data has nonzero slope at r = ε ({d})")));
                    }
                }
            }
        }
        Ok(())
    }
}
