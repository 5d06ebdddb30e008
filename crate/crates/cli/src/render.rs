use crate::commands::{CompareReport, Report};
use crate::{CliError, Format};
use narrow_escape_mc::{McEstimate, SweepRow};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// One CSV row of `simulate` and `sweep` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub epsilon: Option<f64>,
    pub mean: f64,
    pub stderr: f64,
    pub n_absorbed: u64,
    pub n_censored: u64,
    pub mean_times_epsilon: Option<f64>,
}

impl EstimateRow {
    pub fn new(epsilon: Option<f64>, e: &McEstimate) -> Self {
        Self {
            epsilon,
            mean: e.mean,
            stderr: e.stderr,
            n_absorbed: e.n_absorbed,
            n_censored: e.n_censored,
            mean_times_epsilon: epsilon.map(|eps| e.mean * eps),
        }
    }
}

impl From<&SweepRow> for EstimateRow {
    fn from(r: &SweepRow) -> Self {
        Self::new(Some(r.eps), &r.estimate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRow {
    pub term: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub case: String,
    pub formula: f64,
    pub mean: f64,
    pub stderr: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub verdict: String,
}

impl From<&CompareReport> for CompareRow {
    fn from(c: &CompareReport) -> Self {
        Self {
            case: c.case.clone(),
            formula: c.formula,
            mean: c.simulation.mean,
            stderr: c.simulation.stderr,
            relative_error: c.relative_error,
            tolerance: c.tolerance,
            verdict: verdict(c.pass).into(),
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(vec![]);
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match report {
            Report::Asymptotic(a) => csv(a.result.terms.iter().map(|t| TermRow {
                term: t.name.clone(),
                value: t.value,
            })),
            Report::Series(s) => csv(s
                .solution
                .c
                .iter()
                .enumerate()
                .map(|(n, &c)| CoefficientRow { n, c })),
            Report::Simulate(s) => csv([EstimateRow::new(s.epsilon, &s.estimate)]),
            Report::Sweep(s) => csv(s.rows.iter().map(EstimateRow::from)),
            Report::Compare(c) => csv([CompareRow::from(c)]),
        },
        Format::Table => Ok(table(report)),
    }
}

fn estimate_lines(out: &mut String, e: &McEstimate) {
    let _ = writeln!(out, "mean        {:.6} ± {:.6}", e.mean, e.stderr);
    let _ = writeln!(
        out,
        "paths       {} absorbed, {} censored",
        e.n_absorbed, e.n_censored
    );
    let _ = writeln!(out, "dt          {:e}", e.dt_used);
    let _ = writeln!(out, "mean steps  {:.1}", e.mean_steps);
}

fn table(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Asymptotic(a) => {
            let r = &a.result;
            let _ = writeln!(out, "formula: {}", a.case);
            for t in &r.terms {
                let _ = writeln!(out, "  {:<24} {:>14.6}", t.name, t.value);
            }
            let _ = writeln!(out, "  {:<24} {:>14.6}", "total", r.value);
            let _ = writeln!(out, "error order: {}", r.error_order);
            if let Some(alt) = &r.alternative {
                let _ = writeln!(out, "alternative: {:.6} ({})", alt.value, alt.error_order);
            }
            for w in &r.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
        }
        Report::Series(s) => {
            let sol = &s.solution;
            let _ = writeln!(out, "series: {} ({})", s.case, sol.method);
            let _ = writeln!(
                out,
                "F = {:.6}, eps = {:.6}, beta = {:.6}, N = {}",
                sol.problem.rhs, sol.problem.eps, sol.problem.beta, sol.problem.order
            );
            let _ = writeln!(out, "c0          {:.8}", sol.c0);
            if let Some(m) = &s.mfpt {
                let _ = writeln!(out, "mfpt avg    {:.8}", m.value);
            }
            let _ = writeln!(out, "compatibility residual {:.3e}", sol.compatibility_residual);
            let r = &sol.residuals;
            for (name, v) in [
                ("dirichlet residual", r.dirichlet),
                ("edge balance", r.edge_balance),
                ("condition number", r.condition_number),
                ("operator norm", r.operator_norm),
            ] {
                if let Some(v) = v {
                    let _ = writeln!(out, "{name:<22} {v:.3e}");
                }
            }
            for (n, c) in sol.c.iter().enumerate().take(8) {
                let _ = writeln!(out, "  c_{n:<3} {c:>16.8}");
            }
        }
        Report::Simulate(s) => {
            if let Some(eps) = s.epsilon {
                let _ = writeln!(out, "eps         {eps}");
            }
            estimate_lines(&mut out, &s.estimate);
            for w in &s.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
        }
        Report::Sweep(s) => {
            let _ = writeln!(
                out,
                "{:>10} {:>12} {:>10} {:>12}",
                "eps", "mean", "stderr", "mean*eps"
            );
            for r in &s.rows {
                let _ = writeln!(
                    out,
                    "{:>10} {:>12.5} {:>10.5} {:>12.5}",
                    r.eps,
                    r.estimate.mean,
                    r.estimate.stderr,
                    r.estimate.mean * r.eps
                );
            }
            let _ = writeln!(
                out,
                "slope vs log(1/eps) {:.5}, intercept {:.5}",
                s.slope, s.intercept
            );
        }
        Report::Compare(c) => {
            let _ = writeln!(out, "case        {}", c.case);
            let _ = writeln!(out, "formula     {:.6} ({})", c.formula, c.error_order);
            estimate_lines(&mut out, &c.simulation);
            let _ = writeln!(
                out,
                "rel. error  {:.4} (tolerance {:.4})",
                c.relative_error, c.tolerance
            );
            for w in &c.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            let _ = writeln!(out, "{}", verdict(c.pass));
        }
    }
    out
}
