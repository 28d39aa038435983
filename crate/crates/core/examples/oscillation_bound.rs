// Solving the relaxation of the chattering problem: the bound is zero
// although no classical control attains it.

use relaxocp::compactify::compactify;
use relaxocp::conicsolve::{solve, verify, SolveOptions};
use relaxocp::hierarchy::assemble;
use relaxocp::ocpmodel::load_problem;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = load_problem(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/osc.json"))?;
    let prog = assemble(&compactify(&p)?, 3)?;
    let r = solve(&prog, &SolveOptions::default());
    println!("bound {:.3e} ({}), {} iterations", r.bound, r.status, r.iterations);
    let report = verify(&r, &prog);
    println!("equality residual {:.1e}, min eigenvalue {:.1e}", report.residuals.equality, report.residuals.min_eigenvalue);
    // the control concentrates on u = +-1: int u^2 = 1
    println!("int u dmu = {:.4}, int u^2 dmu = {:.4}", r.moments.marginal(2)[1], r.moments.marginal(2)[2]);
    assert!(r.bound.abs() < 1e-3);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
