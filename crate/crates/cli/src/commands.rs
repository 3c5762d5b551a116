//! The five queries and their reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;
use skewdet::expansion::smith_exponents;
use skewdet::field::Twist;
use skewdet::linalg::ScalarMatrix;
use skewdet::relax::zeta_comb_relax_observed;
use skewdet::skew::{Algorithm, DegDet, Dimension, OrdDet, SkewPolyMatrix};
use skewdet::ZetaOutcome;

use crate::problem::{algorithm_name, Problem};
use crate::report::Report;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// ζ of A s^{−ℓ}, the valuation of its Dieudonné determinant.
    Zeta,
    /// deg Det A.
    Degdet,
    /// ord Det A (twists without derivation).
    Orddet,
    /// Solution dimension of A y = 0.
    Dimension,
    /// Smith–McMillan exponents and the rank and minor sequences.
    Smith,
}

/// Settings from the command line; unset values fall back to the problem
/// file, then to the relaxation engine and the budget ℓn.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub algorithm: Option<Algorithm>,
    pub bound: Option<u64>,
    pub trace: Option<PathBuf>,
}

const CAVEAT: &str = "solutions are counted in an extension of the coefficient field where \
                      every scalar equation of this kind has a full solution space";

pub fn run(cmd: Command, problem: &Problem, opts: &Options) -> Result<Report, CliError> {
    let a = &problem.matrix;
    let algo = opts
        .algorithm
        .or(problem.algorithm)
        .unwrap_or(Algorithm::Relax);
    let bound = opts.bound.or(problem.bound);
    let mut report = Report::default();
    let start = Instant::now();
    // the ζ problem that was solved, for the summary lines and the trace
    let (coeffs, budget, engine) = match cmd {
        Command::Zeta => {
            let m = bound.unwrap_or(a.default_budget());
            match a.zeta(m, algo)? {
                ZetaOutcome::Zeta(z) => report.push("zeta", z.to_string(), z),
                ZetaOutcome::InfiniteBeyond(m) => {
                    report.push("zeta", format!("beyond {m}"), json!({ "beyond": m }))
                }
            }
            (a.proper_coeffs(), m, algorithm_name(algo))
        }
        Command::Degdet => {
            let m = bound.unwrap_or(a.default_budget());
            match a.deg_det_with_budget(algo, Some(m))? {
                DegDet::Deg(d) => report.push("degdet", d.to_string(), d),
                DegDet::MinusInfinity => report.push("degdet", "-inf (singular)", "-inf"),
                DegDet::Below(b) => {
                    report.push("degdet", format!("below {b}"), json!({ "below": b }))
                }
            }
            (a.proper_coeffs(), m, algorithm_name(algo))
        }
        Command::Orddet => {
            match a.ord_det(algo)? {
                OrdDet::Ord(o) => report.push("orddet", o.to_string(), o),
                OrdDet::PlusInfinity => report.push("orddet", "+inf (singular)", "+inf"),
            }
            let rev = a.reversed()?;
            (
                rev.proper_coeffs(),
                rev.default_budget(),
                algorithm_name(algo),
            )
        }
        Command::Dimension => {
            match a.solution_dimension(algo)? {
                Dimension::Dim(d) => {
                    report.push("dimension", format!("{d} (over an adequate extension)"), d)
                }
                Dimension::Infinite => report.push("dimension", "inf (singular)", "inf"),
            }
            report.value("caveat", CAVEAT);
            if matches!(a.field().twist(), Twist::QShift(_)) {
                report.value(
                    "note",
                    "for q-shifts the difference-operator formula deg - ord is applied by analogy",
                );
            }
            (a.proper_coeffs(), a.default_budget(), algorithm_name(algo))
        }
        Command::Smith => {
            let m = bound.unwrap_or(a.default_budget());
            let p = smith_exponents(&a.proper_coeffs(), m)?;
            report.value("alpha", &p.exponents);
            report.value("omega", &p.omegas);
            report.value("zeta_k", &p.zetas);
            report.value("rank", p.rank);
            (a.proper_coeffs(), m, "expand")
        }
    };
    let elapsed = start.elapsed();
    summary(&mut report, a, budget, engine);
    report.push(
        "time_ms",
        format!("{:.3}", elapsed.as_secs_f64() * 1e3),
        elapsed.as_secs_f64() * 1e3,
    );
    if let Some(path) = &opts.trace {
        let steps = write_trace(path, &coeffs, budget)?;
        report.value("trace_steps", steps);
    }
    Ok(report)
}

fn summary(report: &mut Report, a: &SkewPolyMatrix, budget: u64, engine: &str) {
    report.value("field", a.field().describe());
    report.value("n", a.n());
    report.value("ell", a.ell());
    report.value("budget", budget);
    report.value("algorithm", engine);
}

/// Run the relaxation on `coeffs` and write one JSON object per pass.
fn write_trace(path: &PathBuf, coeffs: &[ScalarMatrix], budget: u64) -> Result<usize, CliError> {
    let mut lines = Vec::new();
    zeta_comb_relax_observed(coeffs, budget, |step| {
        lines.push(serde_json::to_string(step).expect("steps serialize"));
    })
    .map_err(skewdet::Error::from)?;
    let mut out = BufWriter::new(File::create(path)?);
    for l in &lines {
        writeln!(out, "{l}")?;
    }
    out.flush()?;
    Ok(lines.len())
}
