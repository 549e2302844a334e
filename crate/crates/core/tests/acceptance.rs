//! The twelve acceptance criteria at their stated tolerances, one PASS/FAIL line each.
//! Slopes and windows are evaluated here, independently of the library's criteria layer.

mod common;

use std::io::Write;
use std::time::Instant;

use radial_limits::harness::{
    data_rate_study, energy_conservation_study, hardy_study, residual_study, solution_convergence_study,
    weak_form_study, StudySpec,
};
use radial_limits::solver::BoundaryKind::{DirichletForU, NeumannForU};

struct Line {
    id: u32,
    title: &'static str,
    detail: String,
    pass: bool,
    secs: f64,
    limit: f64,
}

/// Least-squares slope of `ln v` against `ln ε`, skipping values at or below 1e-14.
fn slope(rows: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.1 > 1e-14).map(|r| (r.0.ln(), r.1.ln())).collect();
    if pts.len() < 3 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn rises(v: &[f64]) -> usize {
    v.windows(2).filter(|w| w[1] >= w[0]).count()
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(" "))
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 { s[n / 2] } else { 0.5 * (s[n / 2 - 1] + s[n / 2]) }
}

#[test]
fn acceptance_criteria() {
    let mut lines: Vec<Line> = Vec::new();
    let mut add = |id, title, detail: String, pass: bool, secs: f64, limit: f64| {
        lines.push(Line { id, title, detail, pass: pass && secs < limit, secs, limit })
    };

    // 1-3: Neumann data rates, one run
    let t = Instant::now();
    let r = data_rate_study(&StudySpec::gaussian(NeumannForU)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let s = slope(&r.series("l2"));
    add(1, "Neumann data L2 rate", format!("slope {s:.4}, window [1.8, 2.2]"), within(s, 1.8, 2.2), secs, 10.0);
    let s = slope(&r.series("h1"));
    add(2, "Neumann data H1 rate", format!("slope {s:.4}, window [0.8, 1.2]"), within(s, 0.8, 1.2), secs, 10.0);
    let h2 = r.values("h2");
    let (mx, med) = (h2.iter().copied().fold(f64::NAN, f64::max), median(&h2));
    add(3, "Neumann data H2 boundedness", format!("max {mx:.4e} vs 2 x median {:.4e}", 2.0 * med), mx <= 2.0 * med, secs, 10.0);

    // 4: Dirichlet data rates
    let t = Instant::now();
    let r = data_rate_study(&StudySpec::gaussian(DirichletForU)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let (s1, s2) = (slope(&r.series("h1")), slope(&r.series("h2")));
    add(
        4,
        "Dirichlet data H1 convergence, H2 blowup",
        format!("H1 slope {s1:.4} (>= 0.4), H2 slope {s2:.4} in [-0.8, -0.2]"),
        s1 >= 0.4 && within(s2, -0.8, -0.2),
        secs,
        10.0,
    );

    // 5: energy conservation at the default grid and under grid-scale 2
    let t = Instant::now();
    let e = energy_conservation_study(&StudySpec::gaussian(NeumannForU)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let worst = |q: &str| e.report.values(q).into_iter().fold(f64::NAN, f64::max);
    let shrink = |q: &str| {
        let (c, f) = (e.report.values(q), e.report.values(&format!("{q}_fine")));
        c.iter().zip(&f).map(|(c, f)| c / f).fold(f64::NAN, f64::min)
    };
    let (d1, d2, k1, k2) = (worst("E1_drift"), worst("E2_drift"), shrink("E1_drift"), shrink("E2_drift"));
    add(
        5,
        "Energy conservation",
        format!("drift E1 {d1:.2e}, E2 {d2:.2e} (<= 1e-5); refinement shrink E1 {k1:.2}x, E2 {k2:.2}x (>= 3x)"),
        d1 <= 1e-5 && d2 <= 1e-5 && k1 >= 3.0 && k2 >= 3.0,
        secs,
        30.0,
    );

    // 6: Dirichlet leapfrog against reflected d'Alembert
    let t = Instant::now();
    let rows: Vec<(f64, f64)> =
        [1usize << 12, 1 << 13, 1 << 14].iter().map(|&n| (8.0 / n as f64, common::dirichlet_oracle_error(n))).collect();
    let secs = t.elapsed().as_secs_f64();
    let order = slope(&rows);
    add(6, "Solver oracle equivalence", format!("max-norm order {order:.4}, window [1.8, 2.2]"), within(order, 1.8, 2.2), secs, 60.0);

    // 7 and 10: Neumann solution convergence and trace bound, one run
    let t = Instant::now();
    let r = solution_convergence_study(&StudySpec::gaussian(NeumannForU)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let d = r.values("h1_distance");
    add(7, "Neumann solution convergence", format!("H1 distances {}, {} rises (<= 1)", list(&d), rises(&d)), rises(&d) <= 1, secs, 300.0);
    let k = r.values("trace_ratio");
    let kmax = k.iter().copied().fold(f64::NAN, f64::max);
    add(
        10,
        "Trace bound",
        format!("K = {kmax:.4e}, growth over ladder {:.3} (<= 2)", kmax / k[0]),
        kmax.is_finite() && kmax <= 2.0 * k[0],
        secs,
        300.0,
    );

    // 8: Dirichlet solution convergence
    let t = Instant::now();
    let r = solution_convergence_study(&StudySpec::gaussian(DirichletForU)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let d = r.values("l2_distance");
    add(8, "Dirichlet solution convergence", format!("L2 distances {}, {} rises (<= 1)", list(&d), rises(&d)), rises(&d) <= 1, secs, 300.0);

    // 9: boundary residual rate and weak identity
    let t = Instant::now();
    let r = residual_study(&StudySpec::gaussian(DirichletForU)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let s = slope(&r.report.series("residual"));
    let gap = r.report.values("identity_gap").into_iter().fold(f64::NAN, f64::max);
    add(
        9,
        "Residual decay",
        format!("slope {s:.4} (>= 0.7), identity gap max {gap:.3e} (<= 1e-6)"),
        s >= 0.7 && gap <= 1e-6,
        secs,
        300.0,
    );

    // 11: Hardy suite
    let t = Instant::now();
    let rows = hardy_study().unwrap();
    let secs = t.elapsed().as_secs_f64();
    let worst = rows.iter().map(|h| h.ratio).fold(f64::NAN, f64::max);
    let exp = rows.iter().find(|h| h.family == "exp_decay(1)").map(|h| h.ratio).unwrap();
    add(
        11,
        "Hardy suite",
        format!("max ratio {worst:.6} (<= 2.001), exp_decay(1) {exp:.6} vs sqrt 2"),
        worst <= 2.001 && (exp - 2f64.sqrt()).abs() <= 1e-3,
        secs,
        5.0,
    );

    // 12: weak-form defect of the reference solution
    let t = Instant::now();
    let w = weak_form_study(&StudySpec::gaussian(NeumannForU)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    add(
        12,
        "Weak-form defect",
        format!("H1 form {:.3e}, L2 form {:.3e} (<= 1e-6, {} snapshots)", w.reference_h1, w.reference_l2, w.snapshots),
        w.reference_h1.abs() <= 1e-6 && w.reference_l2.abs() <= 1e-6 && w.snapshots <= 512,
        secs,
        60.0,
    );

    lines.sort_by_key(|l| l.id);
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "\nacceptance criteria");
    for l in &lines {
        let _ = writeln!(
            out,
            "{} {:>2} {}: {} [{:.2} s of {} s]",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.title,
            l.detail,
            l.secs,
            l.limit
        );
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    let _ = writeln!(out, "{} of {} criteria pass", lines.len() - failed.len(), lines.len());
    drop(out);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
