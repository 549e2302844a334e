//! Ladder studies over vanishing boundary radii and their acceptance windows.

mod criteria;
mod fit;
mod report;
mod spec;
mod studies;
mod weak;

pub use criteria::{non_monotone_pairs, run_study, Criterion, RunSummary, Study, StudyOutcome, Window};
pub use fit::{fit_rate, RateFit, ZERO_FLOOR};
pub use report::{ConvergenceReport, QuantityFit, Row};
pub use spec::{dyadic_ladder, GridPolicy, StudySpec, TestFunction};
pub use weak::{dirichlet_boundary_residual, weak_form_residual, WeakForm};
pub use studies::{
    cauchy_pair_diagnostics, data_rate_study, energy_conservation_study, extended_solution, hardy_families,
    hardy_study, reference_solution, residual_study, solution_convergence_study, solution_convergence_with_pairs,
    EnergyStudy, HardyRow, PairDiagnostics, ResidualStudy, WeakFormStudy,
};
pub use studies::weak_form_study;
