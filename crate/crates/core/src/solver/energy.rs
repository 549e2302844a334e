use std::fmt::Write as _;

use super::field::WaveField;
use super::problem::BoundaryKind;
use crate::quadrature::simpson;
use crate::scalar::Real;

/// Energy time series at every stored snapshot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyReport<T> {
    pub times: Vec<T>,
    /// `2π∫_{r>ε}(u_t² + c²u_r²) r² dr`
    pub first_order: Vec<T>,
    /// `2π∫_{r>ε}(u_tr² + c²(u_rr² + 2u_r²/r²)) r² dr`
    pub second_order: Vec<T>,
    /// `∫_{r>ε} z_r² dr`
    pub one_d_c: Vec<T>,
    /// `∫_{r>ε} z_rr² dr`
    pub one_d_d: Vec<T>,
    /// `∫_{r>ε} z_t² + c² z_r² dr`
    pub z_energy: Vec<T>,
    /// `∫_{r>ε} z_tr² + c² z_rr² dr`, the energy of `w = z_r`
    pub w_energy: Vec<T>,
}

/// Relative drift `max|E(t) - E(0)| / E(0)` of a series; zero for a zero series.
pub fn relative_drift<T: Real>(series: &[T]) -> T {
    let Some(&e0) = series.first() else { return T::zero() };
    let dev = series.iter().fold(T::zero(), |m, e| m.max((*e - e0).abs()));
    if e0.is_zero() {
        if dev.is_zero() {
            T::zero()
        } else {
            T::infinity()
        }
    } else {
        dev / e0.abs()
    }
}

impl<T: Real> EnergyReport<T> {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,E1,E2,Cn,Dn\n");
        for k in 0..self.times.len() {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[k], self.first_order[k], self.second_order[k], self.one_d_c[k], self.one_d_d[k]
            );
        }
        s
    }
}

/// Centered first and second differences on `[j0, last]` with a ghost value left of `j0`.
fn differences<T: Real>(z: &[T], j0: usize, ghost: T, h: T) -> (Vec<T>, Vec<T>) {
    let n = z.len();
    let two = T::lit(2.0);
    let mut d1 = Vec::with_capacity(n - j0);
    let mut d2 = Vec::with_capacity(n - j0);
    for j in j0..n {
        let left = if j == j0 { ghost } else { z[j - 1] };
        let right = if j + 1 == n { T::zero() } else { z[j + 1] };
        d1.push((right - left) / (two * h));
        d2.push((right - two * z[j] + left) / (h * h));
    }
    (d1, d2)
}

pub fn energies<T: Real>(field: &WaveField<T>) -> EnergyReport<T> {
    let g = field.grid();
    let h = g.spacing();
    let p = field.problem();
    let c2 = p.c * p.c;
    let eps = p.eps;
    let j0 = p.boundary_index();
    let neumann = !p.is_full_space() && p.bc == BoundaryKind::NeumannForU;
    let two = T::lit(2.0);
    let two_pi = two * T::PI();
    // z-based ghost: Robin for Neumann-for-u, odd reflection otherwise
    let ghost = |z: &[T]| {
        if neumann {
            z[j0 + 1] - two * h * z[j0] / eps
        } else {
            two * z[j0] - z[j0 + 1]
        }
    };
    let mut rep = EnergyReport { times: field.times().to_vec(), ..Default::default() };
    let m = g.len() - j0;
    let mut buf = [vec![T::zero(); m], vec![T::zero(); m], vec![T::zero(); m], vec![T::zero(); m], vec![T::zero(); m], vec![T::zero(); m]];
    for k in 0..field.n_snapshots() {
        let z = field.z(k);
        let zt = field.zt(k);
        let (zr, zrr) = differences(z, j0, ghost(z), h);
        let (ztr, _) = differences(zt, j0, ghost(zt), h);
        for i in 0..m {
            let j = j0 + i;
            let r = g.node(j);
            buf[2][i] = zr[i] * zr[i];
            buf[3][i] = zrr[i] * zrr[i];
            buf[4][i] = zt[j] * zt[j] + c2 * zr[i] * zr[i];
            buf[5][i] = ztr[i] * ztr[i] + c2 * zrr[i] * zrr[i];
            if r.is_zero() {
                buf[0][i] = T::zero();
                buf[1][i] = T::zero();
                continue;
            }
            // u_t r = z_t, u_r r = z_r - z/r, u_tr r = z_tr - z_t/r, u_rr r = z_rr - 2(z_r - z/r)/r
            let ur_r = zr[i] - z[j] / r;
            let utr_r = ztr[i] - zt[j] / r;
            let urr_r = zrr[i] - two * ur_r / r;
            buf[0][i] = zt[j] * zt[j] + c2 * ur_r * ur_r;
            buf[1][i] = utr_r * utr_r + c2 * (urr_r * urr_r + two * ur_r * ur_r / (r * r));
        }
        rep.first_order.push(two_pi * simpson(&buf[0], h));
        rep.second_order.push(two_pi * simpson(&buf[1], h));
        rep.one_d_c.push(simpson(&buf[2], h));
        rep.one_d_d.push(simpson(&buf[3], h));
        rep.z_energy.push(simpson(&buf[4], h));
        rep.w_energy.push(simpson(&buf[5], h));
    }
    rep
}
