//! Analytic radial shapes with exact first and second derivatives.

use std::fmt;
use std::str::FromStr;

use crate::construction::{beta_jet, chi_jet};
use crate::error::{invalid, LabError, Result};
use crate::scalar::Real;

/// Value and first two radial derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Real> Jet<T> {
    pub fn zero() -> Self {
        Self { value: T::zero(), d1: T::zero(), d2: T::zero() }
    }

    pub fn constant(value: T) -> Self {
        Self { value, d1: T::zero(), d2: T::zero() }
    }

    fn product(self, o: Self) -> Self {
        Self {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + T::lit(2.0) * self.d1 * o.d1 + self.value * o.d2,
        }
    }

    fn scaled(self, a: T) -> Self {
        Self { value: a * self.value, d1: a * self.d1, d2: a * self.d2 }
    }
}

/// Built-in radial families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T> {
    /// `exp(-a r²)`
    GaussianBump { a: T },
    /// `(1 - (r/R)²)^k` on `r < R`
    PolyBump { radius: T, power: u32 },
    /// `r^(δ - 1/2) · (1 - (r/R)²)^4` on `r < R`; singular at the origin for `δ < 1/2`
    HardyEdge { delta: T, radius: T },
    /// `exp(-a r)`
    ExpDecay { a: T },
    /// `(1 - ((r - c)/w)²)^k` on `|r - c| < w`
    ShellBump { center: T, half_width: T, power: u32 },
}

fn bump_jet<T: Real>(x: T, dx: T, power: u32) -> Jet<T> {
    // (1 - x²)^k with x = x(r), dx = x'(r), x'' = 0
    if x.abs() >= T::one() {
        return Jet::zero();
    }
    let k = T::from_u32(power).unwrap();
    let q = T::one() - x * x;
    let dq = T::lit(-2.0) * x * dx;
    let ddq = T::lit(-2.0) * dx * dx;
    if power == 0 {
        return Jet::constant(T::one());
    }
    let p = power as i32;
    let d2 = if power == 1 {
        ddq
    } else {
        k * (k - T::one()) * q.powi(p - 2) * dq * dq + k * q.powi(p - 1) * ddq
    };
    Jet { value: q.powi(p), d1: k * q.powi(p - 1) * dq, d2 }
}

impl<T: Real> Family<T> {
    fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            Family::GaussianBump { a } | Family::ExpDecay { a } => pos("rate", a),
            Family::PolyBump { radius, .. } => pos("radius", radius),
            Family::HardyEdge { delta, radius } => pos("delta", delta).and(pos("radius", radius)),
            Family::ShellBump { center, half_width, .. } => {
                pos("half_width", half_width)?;
                if center < half_width {
                    return Err(invalid("shell_bump must vanish near the origin (center >= half_width)"));
                }
                Ok(())
            }
        }
    }

    pub fn jet(&self, r: T) -> Jet<T> {
        match *self {
            Family::GaussianBump { a } => {
                let e = (-a * r * r).exp();
                Jet {
                    value: e,
                    d1: T::lit(-2.0) * a * r * e,
                    d2: (T::lit(4.0) * a * a * r * r - T::lit(2.0) * a) * e,
                }
            }
            Family::PolyBump { radius, power } => bump_jet(r / radius, radius.recip(), power),
            Family::HardyEdge { delta, radius } => {
                let p = delta - T::lit(0.5);
                let m = Jet {
                    value: r.powf(p),
                    d1: p * r.powf(p - T::one()),
                    d2: p * (p - T::one()) * r.powf(p - T::lit(2.0)),
                };
                if r >= radius {
                    return Jet::zero();
                }
                m.product(bump_jet(r / radius, radius.recip(), 4))
            }
            Family::ExpDecay { a } => {
                let e = (-a * r).exp();
                Jet { value: e, d1: -a * e, d2: a * a * e }
            }
            Family::ShellBump { center, half_width, power } => {
                bump_jet((r - center) / half_width, half_width.recip(), power)
            }
        }
    }

    pub fn support_radius(&self) -> T {
        match *self {
            Family::GaussianBump { .. } | Family::ExpDecay { .. } => T::infinity(),
            Family::PolyBump { radius, .. } | Family::HardyEdge { radius, .. } => radius,
            Family::ShellBump { center, half_width, .. } => center + half_width,
        }
    }

    pub fn singular_at_origin(&self) -> bool {
        matches!(self, Family::HardyEdge { .. })
    }
}

/// Shape expression tree: a family, a β-warp or χ-cutoff of a shape, or a linear combination.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T> {
    Family(Family<T>),
    /// `r ↦ inner(ε·β(r/ε))`
    Warped { inner: Box<Shape<T>>, eps: T },
    /// `r ↦ inner(r)·χ(r/ε)`
    CutOff { inner: Box<Shape<T>>, eps: T },
    Combination(Vec<(T, Shape<T>)>),
}

impl<T: Real> Shape<T> {
    pub fn family(f: Family<T>) -> Result<Self> {
        f.validate()?;
        Ok(Shape::Family(f))
    }

    pub fn gaussian_bump(a: T) -> Self {
        Self::family(Family::GaussianBump { a }).expect("valid gaussian_bump")
    }

    pub fn poly_bump(radius: T, power: u32) -> Self {
        Self::family(Family::PolyBump { radius, power }).expect("valid poly_bump")
    }

    pub fn hardy_edge(delta: T, radius: T) -> Self {
        Self::family(Family::HardyEdge { delta, radius }).expect("valid hardy_edge")
    }

    pub fn exp_decay(a: T) -> Self {
        Self::family(Family::ExpDecay { a }).expect("valid exp_decay")
    }

    pub fn shell_bump(center: T, half_width: T, power: u32) -> Self {
        Self::family(Family::ShellBump { center, half_width, power }).expect("valid shell_bump")
    }

    pub fn zero() -> Self {
        Shape::Combination(Vec::new())
    }

    pub fn scaled(self, a: T) -> Self {
        Shape::Combination(vec![(a, self)])
    }

    pub fn warped(self, eps: T) -> Self {
        Shape::Warped { inner: Box::new(self), eps }
    }

    pub fn cut_off(self, eps: T) -> Self {
        Shape::CutOff { inner: Box::new(self), eps }
    }

    pub fn value(&self, r: T) -> T {
        self.jet(r).value
    }

    pub fn jet(&self, r: T) -> Jet<T> {
        match self {
            Shape::Family(f) => f.jet(r),
            Shape::Warped { inner, eps } => {
                let eps = *eps;
                if r >= T::lit(2.0) * eps {
                    return inner.jet(r);
                }
                if r <= eps {
                    return Jet::constant(inner.value(eps));
                }
                let b = beta_jet(r / eps);
                let g = inner.jet(eps * b.value);
                Jet {
                    value: g.value,
                    d1: g.d1 * b.d1,
                    d2: g.d2 * b.d1 * b.d1 + g.d1 * b.d2 / eps,
                }
            }
            Shape::CutOff { inner, eps } => {
                let eps = *eps;
                if r >= T::lit(2.0) * eps {
                    return inner.jet(r);
                }
                if r <= eps {
                    return Jet::zero();
                }
                let x = chi_jet(r / eps);
                let chi = Jet { value: x.value, d1: x.d1 / eps, d2: x.d2 / (eps * eps) };
                inner.jet(r).product(chi)
            }
            Shape::Combination(terms) => terms.iter().fold(Jet::zero(), |acc, (a, s)| {
                let j = s.jet(r).scaled(*a);
                Jet { value: acc.value + j.value, d1: acc.d1 + j.d1, d2: acc.d2 + j.d2 }
            }),
        }
    }

    pub fn support_radius(&self) -> T {
        match self {
            Shape::Family(f) => f.support_radius(),
            Shape::Warped { inner, eps } => inner.support_radius().max(T::lit(2.0) * *eps),
            Shape::CutOff { inner, .. } => inner.support_radius(),
            Shape::Combination(terms) => terms
                .iter()
                .filter(|(a, _)| !a.is_zero())
                .map(|(_, s)| s.support_radius())
                .fold(T::zero(), T::max),
        }
    }

    pub fn singular_at_origin(&self) -> bool {
        match self {
            Shape::Family(f) => f.singular_at_origin(),
            // both constructions are flat near the origin
            Shape::Warped { .. } | Shape::CutOff { .. } => false,
            Shape::Combination(terms) => terms.iter().any(|(_, s)| s.singular_at_origin()),
        }
    }
}

impl<T: Real> fmt::Display for Family<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::GaussianBump { a } => write!(f, "gaussian_bump({a})"),
            Family::PolyBump { radius, power } => write!(f, "poly_bump({radius},{power})"),
            Family::HardyEdge { delta, radius } => write!(f, "hardy_edge({delta},{radius})"),
            Family::ExpDecay { a } => write!(f, "exp_decay({a})"),
            Family::ShellBump { center, half_width, power } => {
                write!(f, "shell_bump({center},{half_width},{power})")
            }
        }
    }
}

impl<T: Real> fmt::Display for Shape<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Family(fam) => write!(f, "{fam}"),
            Shape::Warped { inner, eps } => write!(f, "warp({inner},{eps})"),
            Shape::CutOff { inner, eps } => write!(f, "cutoff({inner},{eps})"),
            Shape::Combination(terms) if terms.is_empty() => write!(f, "zero"),
            Shape::Combination(terms) => {
                for (k, (a, s)) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{a}*{s}")?;
                }
                Ok(())
            }
        }
    }
}

impl<T: Real> FromStr for Family<T> {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| invalid(format!("expected name(args), got '{s}'")))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| invalid(format!("missing ')' in '{s}'")))?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let real = |i: usize| -> Result<T> {
            let a = args.get(i).ok_or_else(|| invalid(format!("too few arguments in '{s}'")))?;
            a.parse::<f64>()
                .map(T::lit)
                .map_err(|_| invalid(format!("bad number '{a}' in '{s}'")))
        };
        let int = |i: usize| -> Result<u32> {
            let a = args.get(i).ok_or_else(|| invalid(format!("too few arguments in '{s}'")))?;
            a.parse::<u32>()
                .map_err(|_| invalid(format!("power must be a non-negative integer in '{s}'")))
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(invalid(format!("{name} takes {n} argument(s), got {}", args.len())))
            }
        };
        let fam = match name.trim() {
            "gaussian_bump" => {
                arity(1)?;
                Family::GaussianBump { a: real(0)? }
            }
            "poly_bump" => {
                arity(2)?;
                Family::PolyBump { radius: real(0)?, power: int(1)? }
            }
            "hardy_edge" => {
                arity(2)?;
                Family::HardyEdge { delta: real(0)?, radius: real(1)? }
            }
            "exp_decay" => {
                arity(1)?;
                Family::ExpDecay { a: real(0)? }
            }
            "shell_bump" => {
                arity(3)?;
                Family::ShellBump { center: real(0)?, half_width: real(1)?, power: int(2)? }
            }
            other => return Err(invalid(format!("unknown profile family '{other}'"))),
        };
        fam.validate()?;
        Ok(fam)
    }
}

impl<T: Real> FromStr for Shape<T> {
    type Err = LabError;

    /// Accepts a single family, `zero`, or `<coef>*<family>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" {
            return Ok(Shape::zero());
        }
        if let Some((coef, fam)) = s.split_once('*') {
            let a: f64 = coef
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad coefficient in '{s}'")))?;
            return Ok(Shape::Family(fam.parse()?).scaled(T::lit(a)));
        }
        Ok(Shape::Family(s.parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn check_jet(shape: &Shape<f64>, r: f64) {
        let h = 1e-4;
        let j = shape.jet(r);
        let (p, m) = (shape.jet(r + h), shape.jet(r - h));
        let scale = 1.0 + j.d1.abs() + j.d2.abs();
        assert!((j.d1 - (p.value - m.value) / (2.0 * h)).abs() < 1e-6 * scale, "{shape} d1 at {r}");
        assert!((j.d2 - (p.d1 - m.d1) / (2.0 * h)).abs() < 1e-5 * scale, "{shape} d2 at {r}");
    }

    #[test]
    fn documented_values() {
        assert_eq!(Shape::gaussian_bump(1.0).value(0.0), 1.0);
        assert_eq!(Shape::poly_bump(1.0, 4).value(1.0), 0.0);
        let v = Shape::hardy_edge(0.25, 1.0).value(0.5);
        assert_relative_eq!(v, 0.5_f64.powf(-0.25) * 0.75_f64.powi(4), max_relative = 1e-14);
        assert_relative_eq!(v, 0.376_27, epsilon = 5e-6);
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let shapes: Vec<Shape<f64>> = vec![
            Shape::gaussian_bump(1.3),
            Shape::poly_bump(1.0, 4),
            Shape::poly_bump(2.0, 1),
            Shape::hardy_edge(0.25, 1.0),
            Shape::exp_decay(0.7),
            Shape::shell_bump(1.0, 0.5, 4),
            Shape::gaussian_bump(1.0).warped(0.25),
            Shape::gaussian_bump(1.0).cut_off(0.25),
            Shape::Combination(vec![(2.0, Shape::poly_bump(1.5, 3)), (-0.5, Shape::exp_decay(1.0))]),
        ];
        for s in &shapes {
            for r in [0.1, 0.3, 0.37, 0.45, 0.8, 1.2] {
                check_jet(s, r);
            }
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for text in ["gaussian_bump(1)", "poly_bump(1.5,4)", "hardy_edge(0.25,1)", "exp_decay(2)", "shell_bump(1,0.5,4)"] {
            let s: Shape<f64> = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert!(matches!("sinc(1)".parse::<Shape<f64>>(), Err(LabError::InvalidArgument(_))));
        assert!("poly_bump(1,2.5)".parse::<Shape<f64>>().is_err());
        assert!("gaussian_bump(-1)".parse::<Shape<f64>>().is_err());
        assert!("gaussian_bump(1,2)".parse::<Shape<f64>>().is_err());
        let s: Shape<f64> = "2*gaussian_bump(1)".parse().unwrap();
        assert_eq!(s.value(0.0), 2.0);
    }

    #[test]
    fn supports() {
        assert_eq!(Shape::poly_bump(1.5, 4).support_radius(), 1.5);
        assert!(Shape::<f64>::gaussian_bump(1.0).support_radius().is_infinite());
        assert_eq!(Shape::shell_bump(1.0, 0.5, 4).value(0.4), 0.0);
        assert!(Shape::hardy_edge(0.25, 1.0).singular_at_origin());
        assert!(!Shape::gaussian_bump(1.0).singular_at_origin());
    }
}
