//! Solving assembled moment relaxations.
//!
//! [`solve`] eliminates the equalities, reduces every PSD block to the face
//! that contains the feasible set, hands the resulting standard-form SDP to
//! a backend and maps the answer back to moments. The reported status
//! always comes from [`verify`], which recomputes the residuals on the
//! original program.

mod dense;
mod ipm;
mod reduce;

use std::fmt;
use std::time::{Duration, Instant};

use crate::hierarchy::{ConicProgram, MomentVector};

pub use ipm::{InteriorPoint, Outcome, SdpBlock, SdpData, SdpSolution};

/// Environment variable overriding the default feasibility and gap tolerance.
pub const TOLERANCE_ENV: &str = "RELAXOCP_TOL";

/// Residual thresholds for the `optimal` status.
pub const VERIFY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    NearOptimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::NearOptimal => "near-optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::NumericalFailure => "numerical-failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub feasibility_tol: f64,
    pub gap_tol: f64,
    pub max_iterations: usize,
    /// Print one line per iteration to stderr.
    pub verbose: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            feasibility_tol: 1e-8,
            gap_tol: 1e-8,
            max_iterations: 200,
            verbose: false,
        }
    }
}

impl SolveOptions {
    /// Defaults, with both tolerances taken from `RELAXOCP_TOL` when set.
    pub fn from_env() -> Self {
        let mut o = Self::default();
        if let Some(t) = std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| *t > 0.0)
        {
            o.feasibility_tol = t;
            o.gap_tol = t;
        }
        o
    }
}

/// Adapter between the reduced SDP and a concrete solver.
pub trait SdpBackend {
    fn name(&self) -> &'static str;
    fn solve(&self, data: &SdpData, opts: &SolveOptions) -> SdpSolution;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// Largest absolute equality violation.
    pub equality: f64,
    /// Smallest eigenvalue over all PSD blocks.
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Objective value of the returned moments, a lower bound on the
    /// optimal control value.
    pub bound: f64,
    pub moments: MomentVector,
    pub residuals: Residuals,
    pub iterations: usize,
    pub wall_time: Duration,
    pub backend_outcome: Option<Outcome>,
    /// Relative primal/dual infeasibility and gap reported by the backend.
    pub backend_accuracy: (f64, f64, f64),
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub residuals: Residuals,
    pub objective: f64,
    /// Human-readable description of every breached invariant.
    pub breaches: Vec<String>,
}

impl ResidualReport {
    pub fn ok(&self) -> bool {
        self.breaches.is_empty()
    }
}

/// Recomputes residuals of a moment vector on `prog` from scratch.
pub fn verify_moments(prog: &ConicProgram, y: &[f64]) -> ResidualReport {
    let equality = prog.equality_residual(y);
    let min_eigenvalue = prog.min_eigenvalue(y);
    let mut breaches = Vec::new();
    if !(equality <= VERIFY_TOL) {
        let worst = prog
            .equalities
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.residual(y).abs().total_cmp(&b.1.residual(y).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        breaches.push(format!(
            "equality residual {equality:.3e} exceeds {VERIFY_TOL:e} (worst row {worst})"
        ));
    }
    if !(min_eigenvalue >= -VERIFY_TOL) {
        breaches.push(format!(
            "PSD residual: min eigenvalue {min_eigenvalue:.3e} below -{VERIFY_TOL:e}"
        ));
    }
    ResidualReport {
        residuals: Residuals {
            equality,
            min_eigenvalue,
        },
        objective: prog.objective_value(y),
        breaches,
    }
}

pub fn verify(result: &SolveResult, prog: &ConicProgram) -> ResidualReport {
    verify_moments(prog, &result.moments.values)
}

pub fn solve(prog: &ConicProgram, opts: &SolveOptions) -> SolveResult {
    solve_with(prog, opts, &InteriorPoint)
}

pub fn solve_with(prog: &ConicProgram, opts: &SolveOptions, backend: &dyn SdpBackend) -> SolveResult {
    let start = Instant::now();
    let el = reduce::eliminate(prog);
    let finish = |status: SolveStatus,
                  y: Vec<f64>,
                  iterations: usize,
                  outcome: Option<Outcome>,
                  acc: (f64, f64, f64)| {
        let report = verify_moments(prog, &y);
        SolveResult {
            status,
            bound: report.objective,
            moments: MomentVector {
                index: prog.index.clone(),
                values: y,
            },
            residuals: report.residuals,
            iterations,
            wall_time: start.elapsed(),
            backend_outcome: outcome,
            backend_accuracy: acc,
        }
    };
    if !el.consistent() {
        return finish(SolveStatus::Infeasible, el.yp.clone(), 0, None, (f64::NAN, f64::NAN, f64::NAN));
    }
    let blocks = reduce::reduce_blocks(prog, &el);
    if opts.verbose {
        for b in &blocks {
            eprintln!("block `{}`: {} -> {}", b.label, b.full, b.size());
        }
        eprintln!("{} moments, {} independent equalities, {} free", prog.num_moments(), el.rank, el.dim);
    }
    // objective c^T (yp + N z) = c^T yp + (N^T c)^T z
    let mut b = vec![0.0; el.dim];
    for &(k, c) in &prog.objective {
        for (bj, n) in b.iter_mut().zip(&el.n_rows[k * el.dim..(k + 1) * el.dim]) {
            *bj += c * n;
        }
    }
    let data = SdpData {
        m: el.dim,
        b,
        blocks: blocks
            .iter()
            .filter(|blk| blk.size() > 0)
            .map(|blk| SdpBlock {
                size: blk.size(),
                c: -&blk.f0,
                phi: blk.phi.clone(),
            })
            .collect(),
    };
    drop(blocks);
    let sol = backend.solve(&data, opts);
    let y = el.lift(&sol.z);
    let acc = (sol.primal_infeasibility, sol.dual_infeasibility, sol.gap);
    let report = verify_moments(prog, &y);
    let status = match sol.outcome {
        Outcome::Converged if report.ok() => SolveStatus::Optimal,
        Outcome::PrimalRay => SolveStatus::Infeasible,
        Outcome::DualRay => SolveStatus::Unbounded,
        Outcome::Breakdown if acc.0.max(acc.1) <= 1e-6 && acc.2 <= 1e-5 => SolveStatus::NearOptimal,
        Outcome::Breakdown => SolveStatus::NumericalFailure,
        _ if acc.0.max(acc.1) <= 1e-6 && acc.2 <= 1e-5 && report.residuals.min_eigenvalue >= -1e-5 => {
            SolveStatus::NearOptimal
        }
        _ => SolveStatus::NumericalFailure,
    };
    finish(status, y, sol.iterations, Some(sol.outcome), acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{localizing_matrix, LinearRow, MomentIndex, PsdBlock};
    use crate::polyalg::{Polynomial, VariableSpace};

    /// min int t^2 dmu over probability measures on [0,1] with mean 1/2.
    fn toy() -> ConicProgram {
        let space = VariableSpace::new(["t"]).unwrap();
        let index = MomentIndex::cached(1, 4);
        let one = Polynomial::constant(&space, 1.0);
        let g = Polynomial::parse("t - t^2", &space).unwrap();
        ConicProgram {
            space: space.clone(),
            index: index.clone(),
            objective: vec![(2, 1.0)],
            equalities: vec![
                LinearRow { coeffs: vec![(0, 1.0)], rhs: 1.0 },
                LinearRow { coeffs: vec![(1, 1.0)], rhs: 0.5 },
            ],
            psd_blocks: vec![
                PsdBlock { label: "m".into(), map: localizing_matrix(&one, &space, 2, &index).unwrap() },
                PsdBlock { label: "g".into(), map: localizing_matrix(&g, &space, 2, &index).unwrap() },
            ],
        }
    }

    #[test]
    fn toy_moment_problem() {
        let prog = toy();
        let r = solve(&prog, &SolveOptions::default());
        assert_eq!(r.status, SolveStatus::Optimal);
        // the Dirac at 1/2 is optimal
        assert!((r.bound - 0.25).abs() < 1e-7, "{}", r.bound);
        assert!(verify(&r, &prog).ok());
    }

    #[test]
    fn inconsistent_equalities_are_infeasible() {
        let mut prog = toy();
        prog.equalities.push(LinearRow { coeffs: vec![], rhs: 1.0 });
        assert_eq!(solve(&prog, &SolveOptions::default()).status, SolveStatus::Infeasible);
    }

    #[test]
    fn verification_flags_corruption() {
        let prog = toy();
        let mut r = solve(&prog, &SolveOptions::default());
        r.moments.values[1] += 0.1;
        let rep = verify(&r, &prog);
        assert!(rep.residuals.equality >= 0.05);
        assert!(!rep.ok());

        r.moments.values.iter_mut().for_each(|v| *v = 0.0);
        let rep = verify(&r, &prog);
        assert!((rep.residuals.equality - 1.0).abs() < 1e-15);
        assert!(rep.breaches[0].contains("equality"));
    }

    #[test]
    fn tolerance_env_override() {
        std::env::set_var(TOLERANCE_ENV, "1e-6");
        let o = SolveOptions::from_env();
        std::env::remove_var(TOLERANCE_ENV);
        assert_eq!((o.feasibility_tol, o.gap_tol), (1e-6, 1e-6));
        assert_eq!(o.max_iterations, 200);
    }
}
