//! Command-line front end.
//!
//! [`run`] parses arguments and writes reports to the given streams; the
//! binary only forwards `std::env::args` and the exit code.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::compactify::{compactify, CompactifiedProblem, CompactifyError};
use crate::conicsolve::{self, SolveOptions, SolveResult, SolveStatus};
use crate::hierarchy::{assemble, ConicProgram, HierarchyError};
use crate::ocpmodel::{load_problem_with, ModelError};
use crate::oracles::{self, OracleError, MomentVar};
use crate::polyalg::{Monomial, PolyError, Polynomial, VariableSpace};
use crate::seqsim::{self, SeqError};

/// Largest admissible moment discrepancy for `compare`.
pub const COMPARE_TOL: f64 = 5e-4;

/// Bound decrease tolerated between consecutive orders in `sweep`.
pub const MONOTONE_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("no oracle registered for problem `{0}`")]
    NoOracle(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Compactify(#[from] CompactifyError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "relaxocp", version, about = "Moment relaxations of optimal control problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SolverArgs {
    /// Feasibility tolerance (default from RELAXOCP_TOL, else 1e-8).
    #[arg(long)]
    pub feas_tol: Option<f64>,
    /// Duality-gap tolerance (default from RELAXOCP_TOL, else 1e-8).
    #[arg(long)]
    pub gap_tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Print solver iterations to stderr.
    #[arg(long)]
    pub verbose: bool,
}

impl SolverArgs {
    pub fn options(&self) -> SolveOptions {
        let mut o = SolveOptions::from_env();
        if let Some(t) = self.feas_tol {
            o.feasibility_tol = t;
        }
        if let Some(t) = self.gap_tol {
            o.gap_tol = t;
        }
        if let Some(n) = self.max_iter {
            o.max_iterations = n;
        }
        o.verbose = self.verbose;
        o
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProblemArgs {
    /// JSON problem file.
    #[arg(long)]
    pub problem: PathBuf,
    /// Parameter override `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
}

impl ProblemArgs {
    fn overrides(&self) -> Result<BTreeMap<String, f64>, CliError> {
        parse_params(&self.params)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one relaxation and print the bound and marginal moments.
    Solve {
        #[command(flatten)]
        problem: ProblemArgsOpt,
        /// Relaxation order d (moments up to degree 2d).
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Write the SDP in sparse SDPA format.
        #[arg(long, value_name = "PATH")]
        export_sdp: Option<PathBuf>,
        /// Stop after exporting.
        #[arg(long, requires = "export_sdp")]
        export_only: bool,
        /// Solve a program read from a sparse SDPA file instead of a problem.
        #[arg(long, value_name = "PATH", conflicts_with_all = ["problem", "order"])]
        sdpa: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Solve a range of orders and check that the bounds do not decrease.
    Sweep {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 1)]
        min_order: u32,
        #[arg(long)]
        max_order: u32,
        /// Number of orders solved concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Print the moments of a catalog measure.
    Oracle {
        /// Catalog entry, e.g. `sec7`, `sec7(0.1)`, `ex2`.
        #[arg(long, default_value = "sec7")]
        name: String,
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Largest moment degree.
        #[arg(long, default_value_t = 12)]
        max_k: u32,
        /// `1`: marginal moments by degree; `2`: closed forms.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
    },
    /// Integrate along a control sequence for growing k.
    Seq {
        /// osc, conc, oscconc, ex1, ex2 or sec7(eps).
        #[arg(long)]
        name: String,
        /// Test function in t.
        #[arg(long, default_value = "1")]
        f: String,
        /// Test function in s = u/(1+|u|).
        #[arg(long, default_value = "1")]
        g0: String,
        /// Test function in y.
        #[arg(long, default_value = "1")]
        h: String,
        /// Report the cost instead of the test-function integral.
        #[arg(long)]
        cost: bool,
        /// k = 2, 4, ..., 2^max_exp.
        #[arg(long, default_value_t = 14)]
        max_exp: u32,
        /// Write staircase data of (u_k, y_k) for k = 1, 2, 4, 8.
        #[arg(long, value_name = "PATH")]
        gnuplot: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 4, 8])]
        plot_ks: Vec<u64>,
    },
    /// Solve a relaxation and compare its marginal moments with the oracle.
    Compare {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

/// [`ProblemArgs`] for `solve`, where `--sdpa` may replace the problem.
#[derive(Debug, Clone, clap::Args)]
pub struct ProblemArgsOpt {
    #[arg(long)]
    pub problem: Option<PathBuf>,
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    items
        .iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("parameter `{s}` is not NAME=VALUE")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("parameter `{s}` has a non-numeric value")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn check_order(order: u32) -> Result<u32, CliError> {
    if order == 0 {
        return Err(CliError::Usage("--order must be at least 1".into()));
    }
    Ok(order)
}

/// Everything produced by one relaxation.
pub struct Outcome {
    pub program: ConicProgram,
    pub compact: Option<CompactifiedProblem>,
    pub result: SolveResult,
    pub params: BTreeMap<String, f64>,
    pub name: String,
}

impl Outcome {
    pub fn succeeded(&self) -> bool {
        matches!(self.result.status, SolveStatus::Optimal | SolveStatus::NearOptimal)
    }

    /// Marginal moments in original coordinates, one vector per variable.
    pub fn marginals(&self) -> Vec<(String, Vec<f64>)> {
        let names = self.program.space.names();
        (0..names.len())
            .map(|v| {
                let raw = self.result.moments.marginal(v);
                let m = self.compact.as_ref().map_or(raw.clone(), |cp| cp.unscale_marginal(v, &raw));
                (names[v].clone(), m)
            })
            .collect()
    }
}

/// Loads, compactifies, assembles and solves.
pub fn relax(problem: &ProblemArgs, order: u32, opts: &SolveOptions) -> Result<Outcome, CliError> {
    let (program, compact, params, name) = build(problem, order)?;
    let result = conicsolve::solve(&program, opts);
    Ok(Outcome { program, compact: Some(compact), result, params, name })
}

fn build(
    problem: &ProblemArgs,
    order: u32,
) -> Result<(ConicProgram, CompactifiedProblem, BTreeMap<String, f64>, String), CliError> {
    check_order(order)?;
    let p = load_problem_with(&problem.problem, &problem.overrides()?)?;
    let cp = compactify(&p)?;
    let prog = assemble(&cp, order)?;
    Ok((prog, cp, p.parameters.clone(), p.name.clone()))
}

fn write_sdpa(prog: &ConicProgram, path: &PathBuf) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let f = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(f);
    prog.write_sdpa(&mut w)?;
    w.flush().map_err(io)?;
    Ok(())
}

fn fmt_params(params: &BTreeMap<String, f64>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// Table with a `k` column and one column per variable.
fn moment_table(cols: &[(String, Vec<f64>)], format: Format) -> String {
    let rows = cols.iter().map(|c| c.1.len()).max().unwrap_or(0);
    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(out, "k,{}", cols.iter().map(|c| c.0.as_str()).collect::<Vec<_>>().join(","));
            for k in 0..rows {
                let vals: Vec<String> = cols.iter().map(|c| c.1.get(k).map_or(String::new(), |v| format!("{v:.10e}"))).collect();
                let _ = writeln!(out, "{k},{}", vals.join(","));
            }
        }
        Format::Table => {
            let head: Vec<String> = cols.iter().map(|c| format!("{:>10}", format!("int {}^k", c.0))).collect();
            let _ = writeln!(out, "{:>3} |{}", "k", head.join(""));
            let _ = writeln!(out, "{}", "-".repeat(5 + 10 * cols.len()));
            for k in 0..rows {
                let vals: Vec<String> = cols.iter().map(|c| c.1.get(k).map_or(" ".repeat(10), |v| format!("{v:>10.4}"))).collect();
                let _ = writeln!(out, "{k:>3} |{}", vals.join(""));
            }
        }
    }
    out
}

fn summary(o: &Outcome, order: Option<u32>, format: Format) -> String {
    let r = &o.result;
    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(out, "problem,order,bound,status,equality_residual,min_eigenvalue,iterations");
            let _ = writeln!(
                out,
                "{},{},{:.10e},{},{:.3e},{:.3e},{}",
                o.name,
                order.map_or(String::new(), |d| d.to_string()),
                r.bound,
                r.status,
                r.residuals.equality,
                r.residuals.min_eigenvalue,
                r.iterations
            );
        }
        Format::Table => {
            let _ = write!(out, "problem {}", o.name);
            if let Some(d) = order {
                let _ = write!(out, "  order {d}");
            }
            if !o.params.is_empty() {
                let _ = write!(out, "  {}", fmt_params(&o.params));
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "bound {:.8}  status {}", r.bound, r.status);
            let _ = writeln!(
                out,
                "equality residual {:.3e}  min eigenvalue {:.3e}  iterations {}",
                r.residuals.equality, r.residuals.min_eigenvalue, r.iterations
            );
        }
    }
    out
}

fn status_line(o: &Outcome) -> Option<String> {
    (!o.succeeded()).then(|| format!("solver did not reach an optimal point (status {})", o.result.status))
}

/// Parses arguments and runs a subcommand. Returns the process exit code:
/// 0 when every check passed, 1 on a failed check or error, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, CliError::Usage(_)) {
                2
            } else {
                1
            }
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    match cmd {
        Command::Solve { problem, order, format, export_sdp, export_only, sdpa, solver } => {
            let opts = solver.options();
            let outcome = if let Some(path) = sdpa {
                let f = std::fs::File::open(&path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                let program = ConicProgram::read_sdpa(BufReader::new(f))?;
                if let Some(p) = &export_sdp {
                    write_sdpa(&program, p)?;
                }
                if export_only {
                    return Ok(true);
                }
                let result = conicsolve::solve(&program, &opts);
                let name = path.file_name().map_or("sdpa".into(), |n| n.to_string_lossy().into_owned());
                Outcome { program, compact: None, result, params: BTreeMap::new(), name }
            } else {
                let path = problem.problem.ok_or_else(|| CliError::Usage("--problem or --sdpa is required".into()))?;
                let order = order.ok_or_else(|| CliError::Usage("--order is required".into()))?;
                let pa = ProblemArgs { problem: path, params: problem.params };
                let (program, compact, params, name) = build(&pa, order)?;
                if let Some(p) = &export_sdp {
                    write_sdpa(&program, p)?;
                }
                if export_only {
                    return Ok(true);
                }
                let result = conicsolve::solve(&program, &opts);
                Outcome { program, compact: Some(compact), result, params, name }
            };
            let order = outcome.program.index.order() / 2;
            emit(out, &summary(&outcome, Some(order), format))?;
            if format == Format::Csv {
                emit(out, "\n")?;
            }
            emit(out, &moment_table(&outcome.marginals(), format))?;
            if let Some(msg) = status_line(&outcome) {
                let _ = writeln!(err, "{msg}");
                return Ok(false);
            }
            Ok(true)
        }
        Command::Sweep { problem, min_order, max_order, jobs, format, solver } => {
            check_order(min_order)?;
            if max_order < min_order {
                return Err(CliError::Usage("--max-order must be at least --min-order".into()));
            }
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            let opts = solver.options();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
            let orders: Vec<u32> = (min_order..=max_order).collect();
            let results: Vec<(u32, Result<Outcome, CliError>)> =
                pool.install(|| orders.par_iter().map(|&d| (d, relax(&problem, d, &opts))).collect());
            sweep_report(results, format, out, err)
        }
        Command::Oracle { name, params, max_k, table } => {
            let params = parse_params(&params)?;
            let name = match params.get("eps") {
                Some(eps) if name.trim() == "sec7" => format!("sec7({eps})"),
                _ => name,
            };
            let entry = oracles::entry(&name)?;
            emit(out, &oracle_report(&entry, max_k, table)?)?;
            Ok(true)
        }
        Command::Seq { name, f, g0, h, cost, max_exp, gnuplot, plot_ks } => {
            if max_exp == 0 || 1u64.checked_shl(max_exp).is_none_or(|k| k > seqsim::MAX_K) {
                return Err(CliError::Usage(format!("--max-exp must lie in 1..={}", seqsim::MAX_K.trailing_zeros())));
            }
            let ks = seqsim::dyadic_ks(max_exp);
            let rows = if cost {
                let limit = seqsim::optimal_value(&name)?;
                ks.par_iter()
                    .map(|&k| {
                        let value = seqsim::cost(&seqsim::make_sequence(&name, k)?)?;
                        Ok(seqsim::ConvergenceRow { k, value, error: (value - limit).abs() })
                    })
                    .collect::<Result<Vec<_>, SeqError>>()?
            } else {
                let sp = VariableSpace::new(["t", "y", "s"])?;
                let parse = |s: &str| Polynomial::parse(s, &sp);
                seqsim::convergence_report(&name, &parse(&f)?, &parse(&g0)?, &parse(&h)?, &ks)?
            };
            let mut text = String::from("k,value,error\n");
            for r in &rows {
                let _ = writeln!(text, "{},{:.12e},{:.6e}", r.k, r.value, r.error);
            }
            emit(out, &text)?;
            if let Some(path) = gnuplot {
                let seqs = plot_ks
                    .iter()
                    .filter_map(|&k| match seqsim::make_sequence(&name, k) {
                        Err(SeqError::KOutOfRange { .. }) => None,
                        r => Some(r),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                std::fs::write(&path, seqsim::gnuplot_data(&seqs))
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            }
            Ok(true)
        }
        Command::Compare { problem, order, format, solver } => {
            check_order(order)?;
            let p = load_problem_with(&problem.problem, &problem.overrides()?)?;
            let oracle_name = registered_oracle(&p.name, &p.parameters).ok_or_else(|| CliError::NoOracle(p.name.clone()))?;
            let entry = oracles::entry(&oracle_name)?;
            let outcome = relax(&problem, order, &solver.options())?;
            let cmp = compare_marginals(&outcome, &entry)?;
            emit(out, &summary(&outcome, Some(order), format))?;
            emit(out, &cmp.render(format))?;
            if let Some(msg) = status_line(&outcome) {
                let _ = writeln!(err, "{msg}");
                return Ok(false);
            }
            Ok(cmp.pass())
        }
    }
}

fn sweep_report(
    results: Vec<(u32, Result<Outcome, CliError>)>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, CliError> {
    let mut text = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(text, "order,bound,status,equality_residual,min_eigenvalue,iterations");
        }
        Format::Table => {
            let _ = writeln!(text, "{:>5} {:>14} {:>18} {:>10} {:>10} {:>5}", "order", "bound", "status", "eq.res", "min.eig", "iter");
        }
    }
    let mut ok = true;
    let mut bounds: Vec<(u32, f64)> = Vec::new();
    for (d, r) in results {
        match r {
            Ok(o) => {
                let r = &o.result;
                let _ = match format {
                    Format::Csv => writeln!(
                        text,
                        "{d},{:.10e},{},{:.3e},{:.3e},{}",
                        r.bound, r.status, r.residuals.equality, r.residuals.min_eigenvalue, r.iterations
                    ),
                    Format::Table => writeln!(
                        text,
                        "{d:>5} {:>14.8} {:>18} {:>10.2e} {:>10.2e} {:>5}",
                        r.bound,
                        r.status.to_string(), r.residuals.equality, r.residuals.min_eigenvalue, r.iterations
                    ),
                };
                if o.succeeded() {
                    bounds.push((d, r.bound));
                } else {
                    ok = false;
                }
            }
            Err(CliError::Hierarchy(e @ (HierarchyError::OrderTooSmall { .. } | HierarchyError::DegreeOverflow { .. }))) => {
                let _ = writeln!(err, "order {d} skipped: {e}");
            }
            Err(e) => return Err(e),
        }
    }
    let violations: Vec<String> = bounds
        .windows(2)
        .filter(|w| w[1].1 < w[0].1 - MONOTONE_TOL)
        .map(|w| format!("{}->{}", w[0].0, w[1].0))
        .collect();
    if format == Format::Table {
        let _ = writeln!(
            text,
            "monotone: {}",
            if violations.is_empty() { "yes".to_string() } else { format!("no ({})", violations.join(", ")) }
        );
    }
    emit(out, &text)?;
    if !violations.is_empty() {
        let _ = writeln!(err, "bounds decrease between orders {}", violations.join(", "));
    }
    Ok(ok && violations.is_empty())
}

fn oracle_report(entry: &oracles::OracleEntry, max_k: u32, table: u8) -> Result<String, CliError> {
    let mut out = String::new();
    if table == 2 {
        let Some(Some(eps)) = oracles::sec7_parameter(&entry.name) else {
            return Err(CliError::Usage(format!("closed forms are only tabulated for sec7, not `{}`", entry.name)));
        };
        let forms = [
            (MomentVar::T, "1/(k+1) + (1-eps)*0^k"),
            (MomentVar::Y, "(1-eps)^(k+1)/(k+1) - ((1-eps)^(k+1) - 1)/(eps*(k+1))"),
            (MomentVar::R, "0^k + (1-eps)"),
            (MomentVar::W, "eps^k + (1-eps)"),
        ];
        let _ = writeln!(out, "moment,closed_form,eps,{}", (0..=max_k).map(|k| format!("k={k}")).collect::<Vec<_>>().join(","));
        for (v, form) in forms {
            let vals: Vec<String> = (0..=max_k).map(|k| format!("{:.10e}", oracles::closed_form_moment(v, k, eps))).collect();
            let _ = writeln!(out, "int {v}^k,\"{form}\",{eps},{}", vals.join(","));
        }
        return Ok(out);
    }
    let sp = entry.measure.space();
    let cols: Vec<(String, Vec<f64>)> = (0..sp.dim())
        .map(|v| {
            let vals = (0..=max_k)
                .map(|k| {
                    let mut e = vec![0; sp.dim()];
                    e[v] = k;
                    oracles::moment_of(&entry.measure, &Monomial::new(e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((sp.names()[v].clone(), vals))
        })
        .collect::<Result<_, OracleError>>()?;
    Ok(moment_table(&cols, Format::Csv))
}

/// Catalog entry describing the optimal measure of a problem, if any.
pub fn registered_oracle(problem: &str, params: &BTreeMap<String, f64>) -> Option<String> {
    match problem {
        "sec7" => Some(format!("sec7({})", params.get("eps").copied().unwrap_or(oracles::SEC7_EPS))),
        _ => None,
    }
}

/// Per-moment comparison of a relaxation against an oracle.
pub struct Comparison {
    /// `(variable, k, relaxation, oracle)`.
    pub rows: Vec<(String, u32, f64, f64)>,
}

impl Comparison {
    pub fn max_abs_diff(&self) -> f64 {
        self.rows.iter().map(|r| (r.2 - r.3).abs()).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max_abs_diff() <= COMPARE_TOL
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        let sig = |a: f64, b: f64| {
            let d = (a - b).abs();
            if d == 0.0 {
                f64::INFINITY
            } else {
                -(d / b.abs().max(f64::MIN_POSITIVE)).log10()
            }
        };
        match format {
            Format::Csv => {
                let _ = writeln!(out, "\nvariable,k,relaxation,oracle,abs_diff,significant_digits");
                for (v, k, a, b) in &self.rows {
                    let _ = writeln!(out, "{v},{k},{a:.10e},{b:.10e},{:.3e},{:.2}", (a - b).abs(), sig(*a, *b));
                }
            }
            Format::Table => {
                let _ = writeln!(out, "{:>3} {:>3} {:>12} {:>12} {:>10} {:>6}", "var", "k", "relaxation", "oracle", "|diff|", "digits");
                for (v, k, a, b) in &self.rows {
                    let _ = writeln!(out, "{v:>3} {k:>3} {a:>12.6} {b:>12.6} {:>10.2e} {:>6.1}", (a - b).abs(), sig(*a, *b));
                }
            }
        }
        let _ = writeln!(
            out,
            "{} max |diff| = {:.3e} (tolerance {COMPARE_TOL:e})",
            if self.pass() { "PASS" } else { "FAIL" },
            self.max_abs_diff()
        );
        out
    }
}

/// Compares every marginal moment of the relaxation with the oracle
/// measure, matching variables by name.
pub fn compare_marginals(outcome: &Outcome, entry: &oracles::OracleEntry) -> Result<Comparison, CliError> {
    let osp = entry.measure.space();
    let mut rows = Vec::new();
    for (name, vals) in outcome.marginals() {
        let Some(v) = osp.index_of(&name) else { continue };
        for (k, a) in vals.iter().enumerate() {
            let mut e = vec![0; osp.dim()];
            e[v] = k as u32;
            let b = oracles::moment_of(&entry.measure, &Monomial::new(e))?;
            rows.push((name.clone(), k as u32, *a, b));
        }
    }
    if rows.is_empty() {
        return Err(CliError::NoOracle(outcome.name.clone()));
    }
    Ok(Comparison { rows })
}
