use super::field::{BoundaryHistory, ExtensionRule, WaveField};
use super::problem::{BoundaryKind, ExteriorProblem};
use super::schedule::{TimeSchedule, DEFAULT_MAX_SNAPSHOTS};
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// `z = r·f` on the nodes.
fn times_r<T: Real>(p: &crate::profiles::RadialProfile<T>) -> Vec<T> {
    let g = p.grid();
    p.values().iter().enumerate().map(|(j, v)| g.node(j) * *v).collect()
}

/// Second difference `z_{j+1} - 2z_j + z_{j-1}` with the boundary ghost node.
struct Laplacian<T> {
    j0: usize,
    last: usize,
    /// Neumann-for-u ghost: `z_{j0-1} = z_{j0+1} - robin·z_{j0}`
    robin: Option<T>,
}

impl<T: Real> Laplacian<T> {
    fn at(&self, z: &[T], j: usize) -> T {
        let two = T::lit(2.0);
        if j == self.j0 {
            match self.robin {
                Some(k) => two * z[j + 1] - (two + k) * z[j],
                None => T::zero(),
            }
        } else if j == self.last {
            T::zero()
        } else {
            z[j + 1] - two * z[j] + z[j - 1]
        }
    }
}

/// Leapfrog solve of `z_tt = c² z_rr` on `[ε, r_max]` with default snapshot count.
pub fn solve<T: Real>(problem: &ExteriorProblem<T>, cfl: T) -> Result<WaveField<T>> {
    let schedule = TimeSchedule::new(problem.data.grid(), problem.c, cfl, problem.horizon, DEFAULT_MAX_SNAPSHOTS)?;
    solve_with(problem, &schedule)
}

pub fn solve_with<T: Real>(problem: &ExteriorProblem<T>, schedule: &TimeSchedule<T>) -> Result<WaveField<T>> {
    let grid = *problem.data.grid();
    let lambda = schedule.cfl(&grid, problem.c);
    if lambda > T::one() + T::lit(1e-12) {
        return Err(invalid(format!("CFL violation: c·Δt/Δr = {lambda} > 1")));
    }
    if (schedule.horizon - problem.horizon).abs() > T::lit(1e-12) * problem.horizon {
        return Err(invalid("schedule horizon differs from the problem horizon"));
    }
    let n = grid.len();
    let last = n - 1;
    let h = grid.spacing();
    let j0 = problem.boundary_index();
    if last < j0 + 3 {
        return Err(invalid("grid too short beyond the boundary"));
    }
    let robin = match (problem.is_full_space(), problem.bc) {
        (false, BoundaryKind::NeumannForU) => Some(T::lit(2.0) * h / problem.eps),
        _ => None,
    };
    let lap = Laplacian { j0, last, robin };
    let dirichlet_left = robin.is_none();
    let l2 = lambda * lambda;
    let dt = schedule.dt;

    let mut z0 = times_r(&problem.data.position);
    let mut z1 = times_r(&problem.data.velocity);
    for v in [&mut z0, &mut z1] {
        v[..j0].iter_mut().for_each(|x| *x = T::zero());
        v[last] = T::zero();
        if dirichlet_left {
            v[j0] = T::zero();
        }
    }

    let stride = schedule.stride;
    let n_snap = schedule.n_snapshots();
    let mut zs = Vec::with_capacity(n_snap);
    let mut zts = Vec::with_capacity(n_snap);
    let levels = schedule.n_steps + 2;
    let mut bz = Vec::with_capacity(levels);
    let mut bzt = Vec::with_capacity(levels);
    let edge = |z: &[T]| [z[j0], z[j0 + 1], z[j0 + 2]];

    let mut prev = z0.clone();
    let mut cur = vec![T::zero(); n];
    let half = T::lit(0.5);
    for j in j0..=last {
        cur[j] = z0[j] + dt * z1[j] + half * l2 * lap.at(&z0, j);
    }
    if dirichlet_left {
        cur[j0] = T::zero();
    }
    zs.push(z0.clone());
    zts.push(z1.clone());
    bz.push(edge(&z0));
    bzt.push(z1[j0]);
    bz.push(edge(&cur));

    let mut next = vec![T::zero(); n];
    let two = T::lit(2.0);
    let inv_2dt = (two * dt).recip();
    // level k -> k+1; the extra level past the horizon gives centered z_t at the end
    for k in 1..=schedule.n_steps {
        next[j0] = if dirichlet_left {
            T::zero()
        } else {
            two * cur[j0] - prev[j0] + l2 * lap.at(&cur, j0)
        };
        for j in j0 + 1..last {
            next[j] = two * cur[j] - prev[j] + l2 * (cur[j + 1] - two * cur[j] + cur[j - 1]);
        }
        next[last] = T::zero();
        bz.push(edge(&next));
        bzt.push((next[j0] - prev[j0]) * inv_2dt);
        if k % stride == 0 {
            zs.push(cur.clone());
            zts.push(next.iter().zip(&prev).map(|(a, b)| (*a - *b) * inv_2dt).collect());
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    bz.pop();

    Ok(WaveField {
        problem: problem.clone(),
        schedule: *schedule,
        times: schedule.snapshot_times(),
        z: zs,
        zt: zts,
        extension: ExtensionRule::None,
        boundary: BoundaryHistory { z: bz, zt: bzt },
    })
}
