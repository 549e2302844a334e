use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::StudyConfig;
use crate::construction::{validate_warp, WarpKind};
use crate::error::{io_error, LabError, Result};
use crate::harness::{fit_rate, run_study, ConvergenceReport, Study, StudyOutcome};
use crate::norms::hardy_ratio;
use crate::profiles::RadialProfile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "radial-limits", version, about = "Exterior Neumann/Dirichlet approximation studies for the radial 3-d wave equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file (`section.key = value` lines); built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for run artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for ladder studies.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Multiplies the number of radial intervals.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=16))]
    pub grid_scale: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the configuration, warp function, Hardy ratios and fit machinery.
    Validate,
    /// Run one study and write its artifacts.
    Run {
        #[arg(value_enum)]
        study: Study,
    },
    /// Turn run artifacts into plot data and a consolidated summary.
    Report,
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match &cli.command {
        Command::Validate => cmd_validate(&cli),
        Command::Run { study } => cmd_run(&cli, *study),
        Command::Report => cmd_report(&out_dir(&cli, None)),
    }
}

fn load_config(cli: &Cli) -> Result<StudyConfig> {
    let mut cfg = match &cli.config {
        Some(p) => StudyConfig::load(p)?,
        None => StudyConfig::default_config(),
    };
    cfg.spec.grid.scale = cli.grid_scale as usize;
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: Option<&StudyConfig>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.and_then(|c| c.out.clone()))
        .unwrap_or_else(|| PathBuf::from("out"))
}

pub fn cmd_validate(cli: &Cli) -> i32 {
    let cfg = match load_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut problems = cfg.spec.violations();
    match validate_warp(WarpKind::BetaQuintic, 10_000) {
        Ok(w) if w.passed => eprintln!("warp: min(s-β) = {:.3e}, min β' = {:.3e}, c_beta = {:.3e}", w.min_gap, w.min_slope, w.c_beta),
        Ok(_) => problems.push("warp: β fails its sampled properties".into()),
        Err(e) => problems.push(format!("warp: {e}")),
    }
    if let Ok(grid) = cfg.spec.make_grid() {
        for (name, shape) in [("data.position", &cfg.spec.position), ("data.velocity", &cfg.spec.velocity)] {
            let p = RadialProfile::sample(shape.clone(), grid);
            if p.is_zero() {
                continue;
            }
            match hardy_ratio(&p) {
                Ok(h) if h <= 2.001 => eprintln!("hardy: {name} ratio {h:.6}"),
                Ok(h) => problems.push(format!("hardy: {name} ratio {h} exceeds 2.001")),
                Err(e) => problems.push(format!("hardy: {name}: {e}")),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rows: Vec<(f64, f64)> = cfg
        .spec
        .ladder
        .iter()
        .map(|&e| (e, e.powf(0.75) * (1.0 + rng.random_range(-0.05..0.05))))
        .collect();
    match fit_rate(&rows) {
        Ok(f) if (0.7..=0.8).contains(&f.slope) => eprintln!("fit: synthetic ε^0.75 recovered as {:.4}", f.slope),
        Ok(f) => problems.push(format!("fit: synthetic ε^0.75 fitted as {}", f.slope)),
        Err(LabError::InsufficientData { usable }) => {
            eprintln!("fit: skipped, ladder has {usable} rungs (a slope needs 3)")
        }
        Err(e) => problems.push(format!("fit: {e}")),
    }
    for p in &problems {
        eprintln!("violation: {p}");
    }
    if problems.is_empty() {
        eprintln!("configuration valid");
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn with_pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn cmd_run(cli: &Cli, study: Study) -> i32 {
    let cfg = match load_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = cfg.spec.validate() {
        eprintln!("error: configuration violates study preconditions: {e}");
        return EXIT_USAGE;
    }
    let dir = out_dir(cli, Some(&cfg));
    let outcome = match with_pool(cli.jobs, || run_study(study, &cfg.spec)).and_then(|r| r) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: study {study} failed: {e}");
            return EXIT_RUNTIME;
        }
    };
    if let Err(e) = write_outcome(&dir, &outcome) {
        eprintln!("error: writing artifacts to {}: {e}", dir.display());
        return EXIT_RUNTIME;
    }
    print!("{}", outcome.summary.to_text());
    if outcome.summary.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn write(path: PathBuf, text: &str) -> Result<()> {
    fs::write(&path, text).map_err(io_error(&path))
}

pub fn write_outcome(dir: &Path, outcome: &StudyOutcome) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let study = outcome.summary.study;
    if let Some(r) = &outcome.report {
        write(dir.join(format!("{study}.report.csv")), &r.to_csv())?;
    }
    for (name, text) in &outcome.tables {
        write(dir.join(format!("{study}.{name}")), text)?;
    }
    write(dir.join(format!("{study}.summary.txt")), &outcome.summary.to_text())
}

fn sorted_with_suffix(dir: &Path, suffix: &str) -> Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_error(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(suffix)))
        .collect();
    v.sort();
    Ok(v)
}

fn stem(path: &Path, suffix: &str) -> String {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    name.strip_suffix(suffix).unwrap_or(name).to_string()
}

pub fn cmd_report(dir: &Path) -> i32 {
    match build_report(dir) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("error: {} holds no run artifacts", dir.display());
            EXIT_USAGE
        }
        Err(e @ LabError::Io { .. }) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Writes `<study>.<quantity>.dat` per quantity and `report.txt`; `false` when nothing to report.
fn build_report(dir: &Path) -> Result<bool> {
    let reports = sorted_with_suffix(dir, ".report.csv")?;
    let summaries = sorted_with_suffix(dir, ".summary.txt")?;
    if reports.is_empty() && summaries.is_empty() {
        return Ok(false);
    }
    let mut text = String::new();
    for s in &summaries {
        text.push_str(&fs::read_to_string(s).map_err(io_error(s))?);
        text.push('\n');
    }
    for path in &reports {
        let study = stem(path, ".report.csv");
        let rep = ConvergenceReport::from_csv(&fs::read_to_string(path).map_err(io_error(path))?)?;
        let _ = writeln!(text, "slopes for {study}");
        for q in rep.quantities() {
            let mut dat = String::from("# log_eps log_value\n");
            for (e, v) in rep.series(&q) {
                if v > 0.0 {
                    let _ = writeln!(dat, "{:.16e} {:.16e}", e.ln(), v.ln());
                }
            }
            write(dir.join(format!("{study}.{q}.dat")), &dat)?;
            let fit = rep.fits.get(&q);
            let slope = fit.and_then(|f| f.fit.as_ref()).map_or("-".to_string(), |f| format!("{:.4}", f.slope));
            let theory = fit.and_then(|f| f.theory_slope).map_or("-".to_string(), |t| format!("{t}"));
            let _ = writeln!(text, "  {q:<24} slope {slope:>9}  theory {theory}");
        }
    }
    write(dir.join("report.txt"), &text)?;
    Ok(true)
}
