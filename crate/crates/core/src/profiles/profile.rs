use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::grid::RadialGrid;
use super::shape::{Jet, Shape};
use crate::error::{invalid, io_error, LabError, Result};
use crate::scalar::Real;
use crate::stencil::{lagrange_interpolate, Differentiator};

/// Analytic tag retained alongside sampled values.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor<T> {
    pub shape: Shape<T>,
    /// Radius at which the origin node is sampled (`h/2` for shapes singular at 0).
    pub origin_sample: T,
}

/// Samples of a radial function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<T> {
    grid: RadialGrid<T>,
    values: Vec<T>,
    descriptor: Option<Descriptor<T>>,
    support_radius: T,
}

fn sampled_support<T: Real>(grid: &RadialGrid<T>, values: &[T]) -> T {
    match values.iter().rposition(|v| !v.is_zero()) {
        None => T::zero(),
        Some(i) if i + 1 < values.len() => grid.node(i + 1),
        Some(_) => T::infinity(),
    }
}

impl<T: Real> RadialProfile<T> {
    /// Samples an analytic shape, keeping it as descriptor.
    pub fn sample(shape: Shape<T>, grid: RadialGrid<T>) -> Self {
        let origin_sample = if shape.singular_at_origin() {
            grid.spacing() / T::lit(2.0)
        } else {
            T::zero()
        };
        let mut values: Vec<T> = (0..grid.len()).map(|i| shape.value(grid.node(i))).collect();
        values[0] = shape.value(origin_sample);
        let support_radius = shape.support_radius().min(sampled_support(&grid, &values));
        Self { grid, values, descriptor: Some(Descriptor { shape, origin_sample }), support_radius }
    }

    pub fn from_values(grid: RadialGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "expected {} values for the grid, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite value at node {i}")));
        }
        let support_radius = sampled_support(&grid, &values);
        Ok(Self { grid, values, descriptor: None, support_radius })
    }

    pub fn from_fn(grid: RadialGrid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::from_values(grid, values)
    }

    pub fn zeros(grid: RadialGrid<T>) -> Self {
        Self::sample(Shape::zero(), grid)
    }

    pub fn constant(grid: RadialGrid<T>, c: T) -> Self {
        let values = vec![c; grid.len()];
        let support_radius = if c.is_zero() { T::zero() } else { T::infinity() };
        Self { grid, values, descriptor: None, support_radius }
    }

    pub(crate) fn with_parts(
        grid: RadialGrid<T>,
        values: Vec<T>,
        descriptor: Option<Descriptor<T>>,
        support_radius: T,
    ) -> Self {
        Self { grid, values, descriptor, support_radius }
    }

    pub fn grid(&self) -> &RadialGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn descriptor(&self) -> Option<&Descriptor<T>> {
        self.descriptor.as_ref()
    }

    pub fn shape(&self) -> Option<&Shape<T>> {
        self.descriptor.as_ref().map(|d| &d.shape)
    }

    pub fn support_radius(&self) -> T {
        self.support_radius
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn singular_at_origin(&self) -> bool {
        self.shape().is_some_and(Shape::singular_at_origin)
    }

    /// Smallest node radius beyond which `|f| <= rel_tol · max|f|`.
    pub fn effective_support(&self, rel_tol: T) -> T {
        let peak = self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let cut = peak * rel_tol;
        let r = match self.values.iter().rposition(|v| v.abs() > cut) {
            None => T::zero(),
            Some(i) if i + 1 < self.values.len() => self.grid.node(i + 1),
            Some(_) => T::infinity(),
        };
        r.min(self.support_radius)
    }

    /// First and second derivatives at every node: analytic from the descriptor
    /// when present, 4th-order finite differences otherwise.
    pub fn derivatives(&self) -> (Vec<T>, Vec<T>) {
        match &self.descriptor {
            Some(d) => {
                let (mut d1, mut d2) = (Vec::with_capacity(self.values.len()), Vec::with_capacity(self.values.len()));
                for i in 0..self.grid.len() {
                    let r = if i == 0 { d.origin_sample } else { self.grid.node(i) };
                    let j = d.shape.jet(r);
                    d1.push(j.d1);
                    d2.push(j.d2);
                }
                (d1, d2)
            }
            None => Differentiator::new(self.grid.spacing()).derivatives(&self.values),
        }
    }

    /// Value at an arbitrary radius inside the grid.
    pub fn interpolate(&self, r: T) -> T {
        match &self.descriptor {
            Some(d) if r > T::zero() || !d.shape.singular_at_origin() => d.shape.value(r),
            _ => lagrange_interpolate(&self.values, self.grid.spacing(), r.min(self.grid.r_max())),
        }
    }

    /// Analytic jet at `r`, if a descriptor is present.
    pub fn jet(&self, r: T) -> Option<Jet<T>> {
        self.shape().map(|s| s.jet(r))
    }

    /// `a·self + b·other`. The descriptor survives only if both sides carry
    /// one with the same origin convention.
    pub fn lin_comb(&self, a: T, b: T, other: &Self) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(invalid("profiles live on different grids"));
        }
        let values: Vec<T> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| a * x + b * y)
            .collect();
        let descriptor = match (&self.descriptor, &other.descriptor) {
            (Some(p), Some(q)) if p.origin_sample == q.origin_sample => Some(Descriptor {
                shape: Shape::Combination(vec![(a, p.shape.clone()), (b, q.shape.clone())]),
                origin_sample: p.origin_sample,
            }),
            _ => None,
        };
        let mut support = T::zero();
        for (c, s) in [(a, self.support_radius), (b, other.support_radius)] {
            if !c.is_zero() {
                support = support.max(s);
            }
        }
        let support = support.min(sampled_support(&self.grid, &values));
        Ok(Self { grid: self.grid, values, descriptor, support_radius: support })
    }

    pub fn scale(&self, a: T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= a);
        out.descriptor = self.descriptor.as_ref().map(|d| Descriptor {
            shape: d.shape.clone().scaled(a),
            origin_sample: d.origin_sample,
        });
        if a.is_zero() {
            out.support_radius = T::zero();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(T::one(), -T::one(), other)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{:.16e},{:.16e}", self.grid.node(i), v);
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(io_error(path))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        text.parse()
    }
}

impl<T: Real> FromStr for RadialProfile<T> {
    type Err = LabError;

    /// Parses the `r,value` CSV layout; rows must sit on a uniform grid from 0.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "r,value" => {}
            _ => return Err(invalid("profile CSV must start with header 'r,value'")),
        }
        let mut rs = Vec::new();
        let mut vs = Vec::new();
        for (k, line) in lines.enumerate() {
            let (r, v) = line
                .split_once(',')
                .ok_or_else(|| invalid(format!("row {} is not 'r,value'", k + 1)))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| invalid(format!("bad number '{x}' in row {}", k + 1)))
            };
            rs.push(parse(r)?);
            vs.push(parse(v)?);
        }
        if rs.len() < 3 {
            return Err(invalid("profile CSV needs at least 3 rows"));
        }
        let grid = RadialGrid::new(rs[rs.len() - 1], rs.len())?;
        for (i, &r) in rs.iter().enumerate() {
            if (r - grid.node(i)).abs() > T::lit(1e-9) * grid.r_max() {
                return Err(invalid(format!("row {} is off the uniform grid", i + 1)));
            }
        }
        Self::from_values(grid, vs)
    }
}

/// Declared regularity class of a data pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regularity {
    H2xH1,
    H1xL2,
    SmoothCompact,
}

impl FromStr for Regularity {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "H2xH1" | "h2xh1" => Ok(Self::H2xH1),
            "H1xL2" | "h1xl2" => Ok(Self::H1xL2),
            "smooth_compact" => Ok(Self::SmoothCompact),
            other => Err(invalid(format!("unknown regularity class '{other}'"))),
        }
    }
}

impl std::fmt::Display for Regularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::H2xH1 => "H2xH1",
            Self::H1xL2 => "H1xL2",
            Self::SmoothCompact => "smooth_compact",
        })
    }
}

/// Position and velocity profiles of radial Cauchy data.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyDataPair<T> {
    pub position: RadialProfile<T>,
    pub velocity: RadialProfile<T>,
    pub regularity: Regularity,
}

impl<T: Real> CauchyDataPair<T> {
    pub fn new(position: RadialProfile<T>, velocity: RadialProfile<T>, regularity: Regularity) -> Result<Self> {
        if !position.grid().same_as(velocity.grid()) {
            return Err(invalid("position and velocity must share one grid"));
        }
        Ok(Self { position, velocity, regularity })
    }

    pub fn zeros(grid: RadialGrid<T>) -> Self {
        Self {
            position: RadialProfile::zeros(grid),
            velocity: RadialProfile::zeros(grid),
            regularity: Regularity::SmoothCompact,
        }
    }

    pub fn grid(&self) -> &RadialGrid<T> {
        self.position.grid()
    }

    pub fn support_radius(&self) -> T {
        self.position.support_radius().max(self.velocity.support_radius())
    }

    pub fn effective_support(&self, rel_tol: T) -> T {
        self.position
            .effective_support(rel_tol)
            .max(self.velocity.effective_support(rel_tol))
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            position: self.position.scale(a),
            velocity: self.velocity.scale(a),
            regularity: self.regularity,
        }
    }

    pub fn map(&self, f: impl Fn(&RadialProfile<T>) -> Result<RadialProfile<T>>) -> Result<Self> {
        Ok(Self { position: f(&self.position)?, velocity: f(&self.velocity)?, regularity: self.regularity })
    }
}

/// Zeroes the profile on `r >= r_n`.
pub fn cutoff_truncate<T: Real>(p: &RadialProfile<T>, r_n: T) -> Result<RadialProfile<T>> {
    if !(r_n > T::zero()) {
        return Err(invalid(format!("truncation radius must be positive, got {r_n}")));
    }
    let grid = *p.grid();
    let first_cut = grid.ceil_index(r_n);
    if first_cut >= grid.len() || p.values()[first_cut..].iter().all(|v| v.is_zero()) {
        return Ok(p.clone());
    }
    let mut values = p.values().to_vec();
    values[first_cut..].iter_mut().for_each(|v| *v = T::zero());
    let support = sampled_support(&grid, &values).min(r_n);
    Ok(RadialProfile::with_parts(grid, values, None, support))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn grid() -> RadialGrid<f64> {
        RadialGrid::new(4.0, 401).unwrap()
    }

    #[test]
    fn descriptor_matches_samples() {
        let g = grid();
        for s in ["gaussian_bump(1)", "poly_bump(1.5,4)", "exp_decay(1)", "shell_bump(1,0.5,4)"] {
            let shape: Shape<f64> = s.parse().unwrap();
            let p = RadialProfile::sample(shape.clone(), g);
            for i in 0..g.len() {
                assert_relative_eq!(p.values()[i], shape.value(g.node(i)), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn singular_origin_uses_half_cell() {
        let g = grid();
        let p = RadialProfile::sample(Shape::hardy_edge(0.25, 1.0), g);
        assert_eq!(p.descriptor().unwrap().origin_sample, 0.005);
        assert!(p.values()[0].is_finite());
        assert_relative_eq!(p.values()[0], Shape::hardy_edge(0.25, 1.0).value(0.005));
    }

    #[test]
    fn truncation_examples() {
        let g = grid();
        let one = RadialProfile::constant(g, 1.0);
        let t = cutoff_truncate(&one, 0.5).unwrap();
        for i in 0..g.len() {
            let expect = if g.node(i) < 0.5 { 1.0 } else { 0.0 };
            assert_eq!(t.values()[i], expect);
        }
        assert!(t.support_radius() <= 0.5);
        let z = RadialProfile::zeros(g);
        assert_eq!(cutoff_truncate(&z, 1.0).unwrap().values(), z.values());
        let gb = RadialProfile::sample(Shape::gaussian_bump(1.0), g);
        assert_eq!(cutoff_truncate(&gb, 10.0).unwrap(), gb);
        assert!(cutoff_truncate(&gb, 0.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let p = RadialProfile::sample(Shape::gaussian_bump(1.0), RadialGrid::new(2.0, 11).unwrap());
        let q: RadialProfile<f64> = p.to_csv().parse().unwrap();
        assert_eq!(q.values(), p.values());
        assert!("x,y\n".parse::<RadialProfile<f64>>().is_err());
    }

    #[test]
    fn fd_derivatives_for_sampled_profiles() {
        let g = RadialGrid::new(4.0, 4001).unwrap();
        let p = RadialProfile::from_fn(g, |r: f64| (-r * r).exp()).unwrap();
        let (d1, d2) = p.derivatives();
        for i in (0..g.len()).step_by(97) {
            let r: f64 = g.node(i);
            assert!((d1[i] + 2.0 * r * (-r * r).exp()).abs() < 1e-9);
            assert!((d2[i] - (4.0 * r * r - 2.0) * (-r * r).exp()).abs() < 1e-7);
        }
    }

    #[test]
    fn pair_requires_shared_grid() {
        let a = RadialProfile::zeros(grid());
        let b = RadialProfile::zeros(RadialGrid::new(4.0, 201).unwrap());
        assert!(CauchyDataPair::new(a, b, Regularity::SmoothCompact).is_err());
    }

    proptest! {
        #[test]
        fn truncation_is_idempotent(r_n in 0.01f64..5.0, a in 0.1f64..3.0) {
            let p = RadialProfile::sample(Shape::gaussian_bump(a), grid());
            let once = cutoff_truncate(&p, r_n).unwrap();
            let twice = cutoff_truncate(&once, r_n).unwrap();
            prop_assert_eq!(once.values(), twice.values());
            prop_assert!(once.support_radius() <= r_n.max(p.support_radius()));
        }
    }
}
