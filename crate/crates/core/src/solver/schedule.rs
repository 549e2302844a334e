use crate::error::{invalid, Result};
use crate::profiles::RadialGrid;
use crate::scalar::Real;

pub const DEFAULT_MAX_SNAPSHOTS: usize = 128;

/// Uniform time stepping with every `stride`-th level stored as a snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSchedule<T> {
    pub dt: T,
    pub n_steps: usize,
    pub stride: usize,
    pub horizon: T,
}

impl<T: Real> TimeSchedule<T> {
    pub fn new(grid: &RadialGrid<T>, c: T, cfl: T, horizon: T, max_snapshots: usize) -> Result<Self> {
        if !(cfl > T::zero() && cfl <= T::one()) {
            return Err(invalid(format!("CFL number must lie in (0, 1], got {cfl}")));
        }
        if !(horizon > T::zero()) || !(c > T::zero()) {
            return Err(invalid("horizon and wave speed must be positive"));
        }
        if max_snapshots < 2 {
            return Err(invalid("need room for at least 2 snapshots"));
        }
        let dt0 = cfl * grid.spacing() / c;
        let n = (horizon / dt0).ceil().to_usize().unwrap().max(1);
        let stride = n.div_ceil(max_snapshots - 1);
        let n_steps = n.div_ceil(stride) * stride;
        Ok(Self { dt: horizon / T::from_index(n_steps), n_steps, stride, horizon })
    }

    pub fn n_snapshots(&self) -> usize {
        self.n_steps / self.stride + 1
    }

    pub fn snapshot_times(&self) -> Vec<T> {
        (0..self.n_snapshots()).map(|k| self.level_time(k * self.stride)).collect()
    }

    pub fn level_time(&self, level: usize) -> T {
        if level == self.n_steps {
            self.horizon
        } else {
            T::from_index(level) * self.dt
        }
    }

    pub fn cfl(&self, grid: &RadialGrid<T>, c: T) -> T {
        c * self.dt / grid.spacing()
    }
}
