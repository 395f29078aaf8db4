//! `sdd` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a bound is violated or a
//! solver fails, 2 for usage and input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sdd_core::bounds::{
    adjugate_bound, block_det_ratio, conjecture_search, det_lower_bound,
    det_upper_bound_balanced, lu_det_ratio, BoundReport, ConjectureMode,
};
use sdd_core::graphlimit::{
    analyze_bipartition, limit_closed_form, limit_inf_norm, limit_numeric, limit_u_route,
};
use sdd_core::io::{load_graph, load_matrix};
use sdd_core::matcore::{classify, default_tol, eigen_sym, inverse_dense};
use sdd_core::retina::{consistency_experiment, ThetaRange};
use sdd_core::suites::{run_suite, Suite};
use sdd_core::{Error, SForm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sdd", version, about = "Inverse, limit and determinant bounds for SDD matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dominance class, entry range, inverse norm and spectrum of a matrix file.
    Inspect {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Limit of (S + tP)^-1 for the signless Laplacian P of a graph.
    Limit(LimitArgs),
    /// Randomized verification suite for one inequality.
    Verify(VerifyArgs),
    /// Determinant ratio and its bounds for a matrix file.
    Detbounds(DetArgs),
    /// Consistency experiment for the degree-sequence estimator.
    Mle(MleArgs),
    /// Random search for counterexamples to an open inequality.
    Explore(ExploreArgs),
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// "n,alpha,ell"
    #[arg(long)]
    sform: SForm,
    #[arg(long)]
    graph: PathBuf,
    /// Evaluate (S + tP)^-1 at this finite t.
    #[arg(long, conflicts_with_all = ["closed_form", "u_route"])]
    t: Option<f64>,
    #[arg(long, conflicts_with = "u_route")]
    closed_form: bool,
    #[arg(long)]
    u_route: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: Suite,
    /// "a,b", inclusive
    #[arg(long, default_value = "3,12", value_parser = parse_range)]
    n_range: (usize, usize),
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Lower bound on off-diagonal entries; defaults to the observed minimum.
    #[arg(long)]
    ell: Option<f64>,
    /// Upper bound on off-diagonal entries; defaults to the observed maximum.
    #[arg(long)]
    m: Option<f64>,
}

#[derive(Debug, Args)]
struct MleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// "a,b", bounds of the uniform distribution of true parameters
    #[arg(long, default_value = "0.5,2", value_parser = parse_theta_range)]
    theta_range: ThetaRange,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExploreArgs {
    #[arg(long)]
    conjecture: ConjectureMode,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "3,10", value_parser = parse_range)]
    n_range: (usize, usize),
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"a,b\", got {s:?}"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<T>()
            .map_err(|_| format!("cannot parse {t:?}"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = parse_pair::<usize>(s)?;
    if a < 3 || b < a {
        return Err(format!("need 3 <= a <= b, got {a},{b}"));
    }
    Ok((a, b))
}

fn parse_theta_range(s: &str) -> Result<ThetaRange, String> {
    let (a, b) = parse_pair::<f64>(s)?;
    ThetaRange::new(a, b).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular { .. }
            | Error::AsymmetricInverse { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::NoConvergence { .. }
            | Error::SingularUpdate { .. }
            | Error::SingularBlock { .. }
            | Error::Internal(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn input_error(path: &Path, e: Error) -> Failure {
    match e {
        // already names the path
        Error::Io { .. } => Failure::Usage(e.to_string()),
        _ => Failure::Usage(format!("{}: {e}", path.display())),
    }
}

fn load_matrix_at(path: &Path) -> Result<sdd_core::SymMatrix, Failure> {
    load_matrix(path).map_err(|e| input_error(path, e))
}

/// Parses `args` (program name first) and runs the command, writing the
/// human-readable summary to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Inspect { matrix } => inspect(&matrix, out),
        Command::Limit(a) => limit(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Detbounds(a) => detbounds(&a, out),
        Command::Mle(a) => mle(&a, out),
        Command::Explore(a) => explore(&a, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn inspect(path: &Path, out: &mut impl Write) -> Outcome {
    let j = load_matrix_at(path)?;
    let dom = classify(&j, default_tol(&j));
    let class = if dom.is_balanced {
        "balanced"
    } else if dom.is_strictly_dominant {
        "strictly diagonally dominant"
    } else if dom.is_dominant {
        "diagonally dominant"
    } else {
        "not diagonally dominant"
    };
    writeln!(out, "n = {}", j.n())?;
    writeln!(out, "class = {class}")?;
    if let Some(off) = dom.off_diagonal {
        writeln!(out, "ell = {}", off.min)?;
        writeln!(out, "m = {}", off.max)?;
    }
    writeln!(out, "delta = {}", dom.max_delta)?;
    writeln!(out, "norm_inf = {}", j.inf_norm())?;
    writeln!(out, "inverse_norm_inf = {}", inverse_dense(&j)?.inf_norm())?;
    let ev = eigen_sym(&j)?;
    writeln!(out, "lambda_min = {}", ev[0])?;
    writeln!(out, "lambda_max = {}", ev[ev.len() - 1])?;
    Ok(true)
}

fn limit(a: &LimitArgs, out: &mut impl Write) -> Outcome {
    let g = load_graph(&a.graph).map_err(|e| input_error(&a.graph, e))?;
    if g.n() != a.sform.n() {
        return Err(Failure::Usage(format!(
            "graph has {} vertices, S-form has n = {}",
            g.n(),
            a.sform.n()
        )));
    }
    let b = analyze_bipartition(&g);
    let (label, m) = if let Some(t) = a.t {
        (format!("(S + tP)^-1 at t = {t}"), limit_numeric(&a.sform, &g, t)?)
    } else if a.u_route {
        ("N via U basis".to_string(), limit_u_route(&a.sform, &b)?)
    } else {
        ("N closed form".to_string(), limit_closed_form(&a.sform, &b)?)
    };
    writeln!(out, "{label}")?;
    write!(out, "{m}")?;
    writeln!(out, "bipartite components = {}", b.r)?;
    writeln!(out, "gamma = {}", b.gamma)?;
    writeln!(out, "d = {}", b.d)?;
    writeln!(out, "norm_inf = {}", m.inf_norm())?;
    if a.t.is_none() {
        writeln!(out, "norm_inf formula = {}", limit_inf_norm(&a.sform, &b))?;
    }
    writeln!(out, "S inverse norm_inf = {}", a.sform.inf_norm_inverse())?;
    Ok(true)
}

fn write_report_row(
    w: &mut csv::Writer<std::fs::File>,
    lead: &[String],
    r: &BoundReport,
) -> Result<(), Failure> {
    let mut row = lead.to_vec();
    row.extend([
        r.params_string(),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.slack.to_string(),
        r.holds.to_string(),
        r.vacuous.to_string(),
    ]);
    w.write_record(&row)?;
    Ok(())
}

fn verify(a: &VerifyArgs, out: &mut impl Write) -> Outcome {
    let records = run_suite(a.suite, a.n_range, a.trials, a.seed)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["suite", "trial", "n", "params", "lhs", "rhs", "slack", "holds", "vacuous"])?;
        for r in &records {
            let lead = [r.report.name.to_string(), r.trial.to_string(), r.n.to_string()];
            write_report_row(&mut w, &lead, &r.report)?;
        }
        w.flush()?;
    }
    let failed: Vec<_> = records.iter().filter(|r| !r.report.holds).collect();
    let vacuous = records.iter().filter(|r| r.report.vacuous).count();
    let min_slack = records
        .iter()
        .map(|r| r.report.slack)
        .fold(f64::INFINITY, f64::min);
    writeln!(out, "suite = {}", a.suite)?;
    writeln!(out, "trials = {}", a.trials)?;
    writeln!(out, "records = {}", records.len())?;
    writeln!(out, "vacuous = {vacuous}")?;
    writeln!(out, "min_slack = {min_slack}")?;
    writeln!(out, "violations = {}", failed.len())?;
    for r in failed.iter().take(10) {
        writeln!(
            out,
            "  trial {} n={} {}: lhs={} rhs={} {}",
            r.trial,
            r.n,
            r.report.name,
            r.report.lhs,
            r.report.rhs,
            r.report.note.as_deref().unwrap_or("")
        )?;
    }
    Ok(failed.is_empty())
}

fn detbounds(a: &DetArgs, out: &mut impl Write) -> Outcome {
    let j = load_matrix_at(&a.matrix)?;
    let dom = classify(&j, default_tol(&j));
    let ell = a.ell.or(dom.min_offdiag()).unwrap_or(0.0);
    let m = a.m.or(dom.max_offdiag()).unwrap_or(0.0);
    let block = block_det_ratio(&j)?;
    writeln!(out, "ell = {ell}")?;
    writeln!(out, "m = {m}")?;
    writeln!(out, "det_ratio (block) = {}", block.ratio)?;
    writeln!(out, "det_ratio (lu) = {}", lu_det_ratio(&j)?)?;
    let factors: Vec<String> = block.factors.iter().map(|f| f.to_string()).collect();
    writeln!(out, "factors = {}", factors.join(" "))?;
    let mut ok = true;
    for r in [
        det_lower_bound(&j, ell, m)?,
        det_upper_bound_balanced(&j, ell, m)?,
        adjugate_bound(&j, ell, m)?,
    ] {
        if r.applicable {
            let verdict = if r.vacuous {
                "vacuous"
            } else if r.holds {
                "holds"
            } else {
                "VIOLATED"
            };
            writeln!(out, "{}: lhs={} rhs={} {verdict}", r.name, r.lhs, r.rhs)?;
            ok &= r.holds;
        } else {
            writeln!(
                out,
                "{}: not applicable ({})",
                r.name,
                r.note.as_deref().unwrap_or("")
            )?;
        }
    }
    Ok(ok)
}

fn mle(a: &MleArgs, out: &mut impl Write) -> Outcome {
    let (trials, summary) = consistency_experiment(a.n, a.k, a.trials, &a.theta_range, a.seed)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "trial",
            "n",
            "err_inf",
            "bound",
            "within_bound",
            "residual_inf",
            "iterations",
            "converged",
        ])?;
        for t in &trials {
            w.write_record([
                t.trial.to_string(),
                t.n.to_string(),
                t.err_inf.to_string(),
                t.bound.to_string(),
                t.within_bound.to_string(),
                t.residual_inf.to_string(),
                t.iterations.to_string(),
                t.converged.to_string(),
            ])?;
        }
        w.flush()?;
    }
    writeln!(out, "n = {}", summary.n)?;
    writeln!(out, "k = {}", summary.k)?;
    writeln!(out, "trials = {}", summary.trials)?;
    writeln!(out, "converged = {}", summary.converged)?;
    writeln!(out, "within_bound = {}", summary.within_bound)?;
    writeln!(out, "fraction_within = {}", summary.fraction_within)?;
    writeln!(out, "target_fraction = {}", summary.target_fraction)?;
    writeln!(out, "median_err = {}", summary.median_err)?;
    writeln!(out, "max_err = {}", summary.max_err)?;
    Ok(summary.converged == summary.trials && summary.fraction_within >= summary.target_fraction)
}

fn explore(a: &ExploreArgs, out: &mut impl Write) -> Outcome {
    let ledger = conjecture_search(a.conjecture, a.trials, a.seed, a.n_range)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["conjecture", "trial", "n", "params", "lhs", "rhs", "slack", "holds", "vacuous"])?;
        for r in &ledger.records {
            let lead = [a.conjecture.to_string(), r.trial.to_string(), r.n.to_string()];
            write_report_row(&mut w, &lead, &r.report)?;
        }
        w.flush()?;
    }
    writeln!(out, "conjecture = {}", ledger.mode)?;
    writeln!(out, "trials = {}", ledger.records.len())?;
    writeln!(out, "min_slack = {}", ledger.min_slack)?;
    writeln!(out, "violations = {}", ledger.violations.len())?;
    for t in ledger.violations.iter().take(10) {
        let r = &ledger.records[*t as usize];
        writeln!(out, "  finding: trial {} n={} lhs={} rhs={}", t, r.n, r.report.lhs, r.report.rhs)?;
    }
    // violations are findings, not failures
    Ok(true)
}
