use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use super::report::ConvergenceReport;
use super::spec::StudySpec;
use super::studies::{
    data_rate_study, energy_conservation_study, hardy_study, residual_study, solution_convergence_study,
    solution_convergence_with_pairs, weak_form_study,
};
use crate::error::{invalid, Result};
use crate::solver::BoundaryKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Study {
    DataRatesNeumann,
    DataRatesDirichlet,
    SolutionConvergenceNeumann,
    SolutionConvergenceDirichlet,
    ResidualDecay,
    EnergyConservation,
    Hardy,
    WeakForm,
}

impl Study {
    pub const ALL: [Study; 8] = [
        Study::DataRatesNeumann,
        Study::DataRatesDirichlet,
        Study::SolutionConvergenceNeumann,
        Study::SolutionConvergenceDirichlet,
        Study::ResidualDecay,
        Study::EnergyConservation,
        Study::Hardy,
        Study::WeakForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Study::DataRatesNeumann => "data_rates_neumann",
            Study::DataRatesDirichlet => "data_rates_dirichlet",
            Study::SolutionConvergenceNeumann => "solution_convergence_neumann",
            Study::SolutionConvergenceDirichlet => "solution_convergence_dirichlet",
            Study::ResidualDecay => "residual_decay",
            Study::EnergyConservation => "energy_conservation",
            Study::Hardy => "hardy",
            Study::WeakForm => "weak_form",
        }
    }

    /// Boundary condition the study runs with, whatever the spec says.
    pub fn bc(self) -> BoundaryKind {
        match self {
            Study::DataRatesDirichlet | Study::SolutionConvergenceDirichlet | Study::ResidualDecay => {
                BoundaryKind::DirichletForU
            }
            _ => BoundaryKind::NeumannForU,
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Study {
    type Err = crate::LabError;
    fn from_str(s: &str) -> Result<Self> {
        Study::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| invalid(format!("unknown study '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Between(f64, f64),
    AtLeast(f64),
    AtMost(f64),
    Below(f64),
}

impl Window {
    pub fn contains(self, x: f64) -> bool {
        match self {
            Window::Between(a, b) => x >= a && x <= b,
            Window::AtLeast(a) => x >= a,
            Window::AtMost(b) => x <= b,
            Window::Below(b) => x < b,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Between(a, b) => write!(f, "[{a}, {b}]"),
            Window::AtLeast(a) => write!(f, ">= {a}"),
            Window::AtMost(b) => write!(f, "<= {b}"),
            Window::Below(b) => write!(f, "< {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub name: String,
    pub measured: f64,
    pub window: Window,
    pub passed: bool,
}

impl Criterion {
    /// NaN never passes.
    pub fn new(name: &str, measured: f64, window: Window) -> Self {
        Self { name: name.to_string(), measured, window, passed: window.contains(measured) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub study: Study,
    pub criteria: Vec<Criterion>,
    pub wall_clock: Duration,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "study = {}", self.study);
        let _ = writeln!(s, "wall_clock_s = {:.3}", self.wall_clock.as_secs_f64());
        for c in &self.criteria {
            let _ = writeln!(
                s,
                "{} {} measured={:.6e} window={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.window
            );
        }
        let _ = writeln!(s, "overall = {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Everything a study run produces: summary, ladder report and extra tables.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOutcome {
    pub summary: RunSummary,
    pub report: Option<ConvergenceReport>,
    /// `(file name, CSV text)` pairs.
    pub tables: Vec<(String, String)>,
}

fn slope_or_nan(r: &ConvergenceReport, q: &str) -> f64 {
    r.slope(q).unwrap_or(f64::NAN)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NAN, f64::max)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    match s.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => s[n / 2],
        n => 0.5 * (s[n / 2 - 1] + s[n / 2]),
    }
}

/// Adjacent ladder pairs where the value fails to decrease.
pub fn non_monotone_pairs(values: &[f64]) -> usize {
    values.windows(2).filter(|w| w[1] >= w[0]).count()
}

/// Pairs `(n, n-1)` at the fine and coarse ends of the ladder used by the Cauchy-pair check.
fn check_pairs(len: usize) -> Option<[(usize, usize); 2]> {
    (len >= 4).then(|| [(len - 1, len - 2), (len - 3, len - 4)])
}

/// Runs `study` with the spec's data and discretization; the boundary condition is the study's.
pub fn run_study(study: Study, spec: &StudySpec) -> Result<StudyOutcome> {
    let start = Instant::now();
    let mut spec = spec.clone();
    spec.bc = study.bc();
    let mut tables = Vec::new();
    let (criteria, report) = match study {
        Study::DataRatesNeumann => {
            let r = data_rate_study(&spec)?;
            let h2 = r.values("h2");
            let c = vec![
                Criterion::new("neumann_l2_slope", slope_or_nan(&r, "l2"), Window::Between(1.8, 2.2)),
                Criterion::new("neumann_h1_slope", slope_or_nan(&r, "h1"), Window::Between(0.8, 1.2)),
                Criterion::new("neumann_h2_max_over_median", max_of(&h2) / median(&h2), Window::AtMost(2.0)),
            ];
            (c, Some(r))
        }
        Study::DataRatesDirichlet => {
            let r = data_rate_study(&spec)?;
            let mut neumann = spec.clone();
            neumann.bc = BoundaryKind::NeumannForU;
            let n = data_rate_study(&neumann)?.values("h2");
            let ratio = r.values("h2").iter().zip(&n).map(|(d, n)| d / n).fold(f64::NAN, f64::max);
            let c = vec![
                Criterion::new("dirichlet_h1_slope", slope_or_nan(&r, "h1"), Window::AtLeast(0.4)),
                Criterion::new("dirichlet_h2_slope", slope_or_nan(&r, "h2"), Window::Between(-0.8, -0.2)),
                Criterion::new("h2_dirichlet_over_neumann", ratio, Window::AtLeast(10.0)),
            ];
            (c, Some(r))
        }
        Study::SolutionConvergenceNeumann => {
            let pairs = check_pairs(spec.ladder.len());
            let (r, diags) = solution_convergence_with_pairs(&spec, pairs.as_ref().map_or(&[][..], |p| &p[..]))?;
            let k = r.values("trace_ratio");
            let mut c = vec![
                Criterion::new(
                    "neumann_h1_distance_non_monotone_pairs",
                    non_monotone_pairs(&r.values("h1_distance")) as f64,
                    Window::AtMost(1.0),
                ),
                Criterion::new("trace_ratio_max", max_of(&k), Window::Below(f64::INFINITY)),
                Criterion::new("trace_ratio_growth", max_of(&k) / k.first().copied().unwrap_or(f64::NAN), Window::AtMost(2.0)),
            ];
            let (e, l) = match diags.as_slice() {
                [fine, coarse] => {
                    let mut csv = String::from("t,fine_energy,fine_l2,coarse_energy,coarse_l2\n");
                    for i in 0..fine.times.len() {
                        let _ = writeln!(
                            csv,
                            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                            fine.times[i], fine.energy[i], fine.l2[i], coarse.energy[i], coarse.l2[i]
                        );
                    }
                    tables.push(("cauchy_pairs.csv".to_string(), csv));
                    (fine.sup_energy() / coarse.sup_energy(), fine.sup_l2() / coarse.sup_l2())
                }
                _ => (f64::NAN, f64::NAN),
            };
            c.push(Criterion::new("pair_energy_fine_over_coarse", e, Window::Below(1.0)));
            c.push(Criterion::new("pair_l2_fine_over_coarse", l, Window::Below(1.0)));
            (c, Some(r))
        }
        Study::SolutionConvergenceDirichlet => {
            let r = solution_convergence_study(&spec)?;
            let c = vec![Criterion::new(
                "dirichlet_l2_distance_non_monotone_pairs",
                non_monotone_pairs(&r.values("l2_distance")) as f64,
                Window::AtMost(1.0),
            )];
            (c, Some(r))
        }
        Study::ResidualDecay => {
            let r = residual_study(&spec)?;
            let c = vec![
                Criterion::new("residual_slope", slope_or_nan(&r.report, "residual"), Window::AtLeast(0.7)),
                Criterion::new("identity_gap_max", max_of(&r.report.values("identity_gap")), Window::AtMost(1e-6)),
                Criterion::new("shell_residual", r.shell_residual, Window::AtMost(0.0)),
            ];
            (c, Some(r.report))
        }
        Study::EnergyConservation => {
            let r = energy_conservation_study(&spec)?;
            let shrink = |q: &str| {
                let (c, f) = (r.report.values(q), r.report.values(&format!("{q}_fine")));
                c.iter().zip(&f).map(|(c, f)| c / f).fold(f64::NAN, f64::min)
            };
            let c = vec![
                Criterion::new("E1_drift_max", max_of(&r.report.values("E1_drift")), Window::AtMost(1e-5)),
                Criterion::new("E2_drift_max", max_of(&r.report.values("E2_drift")), Window::AtMost(1e-5)),
                Criterion::new("E1_drift_refinement_min", shrink("E1_drift"), Window::AtLeast(3.0)),
                Criterion::new("E2_drift_refinement_min", shrink("E2_drift"), Window::AtLeast(3.0)),
            ];
            for (k, (_, en)) in r.series.iter().enumerate() {
                tables.push((format!("energy_rung{k}.csv"), en.to_csv()));
            }
            (c, Some(r.report))
        }
        Study::Hardy => {
            let rows = hardy_study()?;
            let mut csv = String::from("family,hardy_ratio,ball1_ratio\n");
            for h in &rows {
                let _ = writeln!(csv, "{},{:.16e},{:.16e}", h.family.replace(',', ";"), h.ratio, h.ball_ratio);
            }
            tables.push(("ratios.csv".to_string(), csv));
            let worst = rows.iter().map(|h| h.ratio).fold(f64::NAN, f64::max);
            let exp = rows.iter().find(|h| h.family.starts_with("exp_decay")).map_or(f64::NAN, |h| h.ratio);
            let c = vec![
                Criterion::new("hardy_ratio_max", worst, Window::AtMost(2.001)),
                Criterion::new("exp_decay_ratio_error", (exp - 2f64.sqrt()).abs(), Window::AtMost(1e-3)),
            ];
            (c, None)
        }
        Study::WeakForm => {
            let w = weak_form_study(&spec)?;
            let c = vec![
                Criterion::new("reference_h1_form", w.reference_h1.abs(), Window::AtMost(1e-6)),
                Criterion::new("reference_l2_form", w.reference_l2.abs(), Window::AtMost(1e-6)),
            ];
            (c, Some(w.report))
        }
    };
    Ok(StudyOutcome { summary: RunSummary { study, criteria, wall_clock: start.elapsed() }, report, tables })
}
