use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{io_error, LabError, Result};
use crate::harness::{dyadic_ladder, GridPolicy, StudySpec, TestFunction};
use crate::profiles::{Regularity, Shape};
use crate::solver::{BoundaryKind, DEFAULT_MAX_SNAPSHOTS};

/// Built-in configuration used when no `--config` is given.
pub const DEFAULT_CONFIG: &str = "\
# Gaussian data on the dyadic ladder 2^-2 .. 2^-7
data.position = gaussian_bump(1)
data.velocity = gaussian_bump(2)
data.regularity = smooth_compact
ladder.n_min = 2
ladder.n_max = 7
solver.c = 1
solver.horizon = 1
solver.cfl = 0.5
grid.r_max = 8
grid.cells_per_min_eps = 16
grid.max_snapshots = 128
test.b = poly_bump(1.5,4)
run.seed = 20
";

const KEYS: [&str; 15] = [
    "data.position",
    "data.velocity",
    "data.regularity",
    "ladder.n_min",
    "ladder.n_max",
    "solver.c",
    "solver.horizon",
    "solver.cfl",
    "grid.r_max",
    "grid.cells_per_min_eps",
    "grid.n_r",
    "grid.max_snapshots",
    "test.b",
    "run.seed",
    "run.out",
];

const REQUIRED: [&str; 2] = ["data.position", "data.velocity"];

/// Parsed configuration: a study spec plus run-level settings.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub spec: StudySpec,
    /// Seed for synthetic fixtures.
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn cfg_err(line: usize, msg: impl std::fmt::Display) -> LabError {
    LabError::Config(format!("line {line}: {msg}"))
}

impl StudyConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| cfg_err(i + 1, "expected `section.key = value`"))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(cfg_err(i + 1, format!("unknown key '{k}'")));
            }
            if map.insert(k, (i + 1, v)).is_some() {
                return Err(cfg_err(i + 1, format!("duplicate key '{k}'")));
            }
        }
        for k in REQUIRED {
            if !map.contains_key(k) {
                return Err(LabError::Config(format!("missing required key '{k}'")));
            }
        }
        fn get<T: std::str::FromStr>(map: &BTreeMap<&str, (usize, &str)>, key: &str, default: T) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            match map.get(key) {
                None => Ok(default),
                Some(&(line, v)) => v.parse().map_err(|e| cfg_err(line, format!("{key}: {e}"))),
            }
        }
        let mut spec = StudySpec::gaussian(BoundaryKind::NeumannForU);
        spec.position = get(&map, "data.position", Shape::zero())?;
        spec.velocity = get(&map, "data.velocity", Shape::zero())?;
        spec.regularity = get(&map, "data.regularity", Regularity::SmoothCompact)?;
        let n_min: u32 = get(&map, "ladder.n_min", 2)?;
        let n_max: u32 = get(&map, "ladder.n_max", 7)?;
        if n_min > n_max || n_max > 30 {
            return Err(LabError::Config(format!("ladder.n_min = {n_min}, ladder.n_max = {n_max} is not a valid range")));
        }
        spec.ladder = dyadic_ladder(n_min, n_max);
        spec.c = get(&map, "solver.c", 1.0)?;
        spec.horizon = get(&map, "solver.horizon", 1.0)?;
        spec.cfl = get(&map, "solver.cfl", 0.5)?;
        let defaults = GridPolicy::default();
        spec.grid = GridPolicy {
            r_max: get(&map, "grid.r_max", defaults.r_max)?,
            cells_per_min_eps: get(&map, "grid.cells_per_min_eps", defaults.cells_per_min_eps)?,
            n_r: match map.get("grid.n_r") {
                None => None,
                Some(_) => Some(get(&map, "grid.n_r", 0usize)?),
            },
            scale: 1,
        };
        spec.max_snapshots = get(&map, "grid.max_snapshots", DEFAULT_MAX_SNAPSHOTS)?;
        if spec.max_snapshots < 3 {
            return Err(LabError::Config("grid.max_snapshots must be at least 3".into()));
        }
        let b: Shape<f64> = get(&map, "test.b", Shape::poly_bump(1.5, 4))?;
        spec.test_fn = TestFunction::new(spec.horizon, b).map_err(|e| LabError::Config(format!("test.b: {e}")))?;
        Ok(Self {
            spec,
            seed: get(&map, "run.seed", 20)?,
            out: map.get("run.out").map(|&(_, v)| PathBuf::from(v)),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        Self::parse(&text)
    }

    pub fn default_config() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("built-in configuration parses")
    }
}
