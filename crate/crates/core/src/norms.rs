//! Radial Sobolev norms, region restriction and Hardy ratios.

use std::fmt;

use crate::error::{invalid, Result};
use crate::profiles::{CauchyDataPair, RadialProfile};
use crate::quadrature::{simpson, GaussRule};
use crate::scalar::Real;

/// Integration region; radii are snapped to the nearest grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionSpec<T> {
    AllSpace,
    Ball(T),
    Annulus(T, T),
    Exterior(T),
}

impl<T: Real> RegionSpec<T> {
    fn node_range(&self, p: &RadialProfile<T>) -> Result<(usize, usize)> {
        let g = p.grid();
        let last = g.len() - 1;
        let snap = |r: T| -> Result<usize> {
            if !(r >= T::zero()) {
                return Err(invalid(format!("region radius must be nonnegative, got {r}")));
            }
            if r > g.r_max() * (T::one() + T::lit(1e-12)) {
                return Err(invalid(format!("region radius {r} exceeds r_max = {}", g.r_max())));
            }
            Ok(g.nearest_index(r))
        };
        match *self {
            RegionSpec::AllSpace => Ok((0, last)),
            RegionSpec::Ball(r) => Ok((0, snap(r)?)),
            RegionSpec::Exterior(r) => Ok((snap(r)?, last)),
            RegionSpec::Annulus(a, b) => {
                if !(a < b) {
                    return Err(invalid("annulus needs inner < outer radius"));
                }
                Ok((snap(a)?, snap(b)?))
            }
        }
    }
}

impl<T: Real> fmt::Display for RegionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionSpec::AllSpace => write!(f, "all_space"),
            RegionSpec::Ball(r) => write!(f, "ball({r})"),
            RegionSpec::Annulus(a, b) => write!(f, "annulus({a};{b})"),
            RegionSpec::Exterior(r) => write!(f, "exterior({r})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport<T> {
    pub l2: T,
    pub h1_semi: T,
    pub h2_semi: T,
    pub region: RegionSpec<T>,
}

impl<T: Real> NormReport<T> {
    pub fn h1(&self) -> T {
        (self.l2 * self.l2 + self.h1_semi * self.h1_semi).sqrt()
    }

    pub fn h2(&self) -> T {
        (self.l2 * self.l2 + self.h1_semi * self.h1_semi + self.h2_semi * self.h2_semi).sqrt()
    }

    pub fn full(&self, order: Order) -> T {
        match order {
            Order::L2 => self.l2,
            Order::H1 => self.h1(),
            Order::H2 => self.h2(),
        }
    }

    pub fn csv_header() -> &'static str {
        "region,l2,h1_semi,h2_semi"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{:.16e},{:.16e},{:.16e}", self.region, self.l2, self.h1_semi, self.h2_semi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    L2,
    H1,
    H2,
}

impl Order {
    pub fn lower(self) -> Self {
        match self {
            Order::L2 | Order::H1 => Order::L2,
            Order::H2 => Order::H1,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::L2 => "L2",
            Order::H1 => "H1",
            Order::H2 => "H2",
        })
    }
}

const GRADED_POINTS: usize = 24;
const GRADING: i32 = 8;

/// Squared integrals `[∫f²r², ∫f′²r², ∫(f″²r² + 2f′²)]` over the node range.
fn weighted_squares<T: Real>(p: &RadialProfile<T>, lo: usize, hi: usize) -> [T; 3] {
    if hi <= lo {
        return [T::zero(); 3];
    }
    let g = p.grid();
    let h = g.spacing();
    let (d1, d2) = p.derivatives();
    let f = p.values();
    // singular shapes: the first two cells go to a graded Gauss rule on the analytic jet
    let graded = lo == 0 && p.singular_at_origin() && hi >= 2;
    let start = if graded { 2 } else { lo };
    let mut acc = [T::zero(); 3];
    let mut buf = Vec::with_capacity(hi - start + 1);
    for (k, a) in acc.iter_mut().enumerate() {
        buf.clear();
        buf.extend((start..=hi).map(|i| {
            let r = g.node(i);
            match k {
                0 => f[i] * f[i] * r * r,
                1 => d1[i] * d1[i] * r * r,
                _ => d2[i] * d2[i] * r * r + T::lit(2.0) * d1[i] * d1[i],
            }
        }));
        *a = simpson(&buf, h);
    }
    if graded {
        let shape = p.shape().expect("singular profiles carry a descriptor");
        let rule = GaussRule::new(GRADED_POINTS);
        let b = g.node(2);
        acc[0] += rule.graded(b, GRADING, |r| {
            let v = shape.value(r);
            v * v * r * r
        });
        acc[1] += rule.graded(b, GRADING, |r| {
            let j = shape.jet(r);
            j.d1 * j.d1 * r * r
        });
        acc[2] += rule.graded(b, GRADING, |r| {
            let j = shape.jet(r);
            j.d2 * j.d2 * r * r + T::lit(2.0) * j.d1 * j.d1
        });
    }
    acc
}

pub fn norms<T: Real>(p: &RadialProfile<T>, region: RegionSpec<T>) -> Result<NormReport<T>> {
    let (lo, hi) = region.node_range(p)?;
    let four_pi = T::lit(4.0) * T::PI();
    let [a, b, c] = weighted_squares(p, lo, hi);
    let root = |x: T| (four_pi * x).max(T::zero()).sqrt();
    Ok(NormReport { l2: root(a), h1_semi: root(b), h2_semi: root(c), region })
}

/// `‖f/|x|‖_{L²(ℝ³)}`, i.e. `sqrt(4π∫f² dr)`, over the node range.
fn weighted_l2_over_r<T: Real>(p: &RadialProfile<T>, lo: usize, hi: usize) -> T {
    let g = p.grid();
    let f = p.values();
    let graded = lo == 0 && p.singular_at_origin() && hi >= 2;
    let start = if graded { 2 } else { lo };
    let buf: Vec<T> = (start..=hi).map(|i| f[i] * f[i]).collect();
    let mut s = simpson(&buf, g.spacing());
    if graded {
        let shape = p.shape().expect("descriptor");
        s += GaussRule::new(GRADED_POINTS).graded(g.node(2), GRADING, |r| shape.value(r).powi(2));
    }
    (T::lit(4.0) * T::PI() * s).sqrt()
}

/// `‖p/|x|‖_{L²(ℝ³)} / ‖∇P‖_{L²(ℝ³)}`.
pub fn hardy_ratio<T: Real>(p: &RadialProfile<T>) -> Result<T> {
    if p.is_zero() {
        return Err(invalid("Hardy ratio of the zero profile is undefined"));
    }
    let last = p.grid().len() - 1;
    let den = norms(p, RegionSpec::AllSpace)?.h1_semi;
    if !(den > T::zero()) {
        return Err(invalid("profile has vanishing gradient norm"));
    }
    Ok(weighted_l2_over_r(p, 0, last) / den)
}

/// `‖p/|x|‖_{L²(B_ρ)} / ‖p‖_{H¹(B_ρ)}` with the full H¹ norm in the denominator.
pub fn hardy_ratio_ball<T: Real>(p: &RadialProfile<T>, radius: T) -> Result<T> {
    if p.is_zero() {
        return Err(invalid("Hardy ratio of the zero profile is undefined"));
    }
    let region = RegionSpec::Ball(radius);
    let (_, hi) = region.node_range(p)?;
    let den = norms(p, region)?.h1();
    if !(den > T::zero()) {
        return Err(invalid("profile vanishes on the ball"));
    }
    Ok(weighted_l2_over_r(p, 0, hi) / den)
}

/// Position distance at `order` plus velocity distance one order lower (L² floor).
pub fn pair_distance<T: Real>(a: &CauchyDataPair<T>, b: &CauchyDataPair<T>, order: Order) -> Result<T> {
    pair_distance_on(a, b, order, RegionSpec::AllSpace)
}

pub fn pair_distance_on<T: Real>(
    a: &CauchyDataPair<T>,
    b: &CauchyDataPair<T>,
    order: Order,
    region: RegionSpec<T>,
) -> Result<T> {
    if !a.grid().same_as(b.grid()) {
        return Err(invalid("data pairs live on different grids"));
    }
    let dp = norms(&a.position.sub(&b.position)?, region)?.full(order);
    let dv = norms(&a.velocity.sub(&b.velocity)?, region)?.full(order.lower());
    Ok(dp + dv)
}

/// `‖Ψ‖_{H¹} + ‖Φ‖_{H²}`, the data size in the trace bound.
pub fn data_size<T: Real>(d: &CauchyDataPair<T>) -> Result<T> {
    Ok(norms(&d.position, RegionSpec::AllSpace)?.h2() + norms(&d.velocity, RegionSpec::AllSpace)?.h1())
}
