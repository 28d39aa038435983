// The worked example with eps = 0.2: relaxation moments against the
// analytic optimal measure.

use relaxocp::compactify::compactify;
use relaxocp::conicsolve::{solve, SolveOptions};
use relaxocp::hierarchy::assemble;
use relaxocp::ocpmodel::load_problem;
use relaxocp::oracles::{closed_form_moment, MomentVar};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // order 6 reproduces all moments to 4 digits; 3 is enough for a quick look
    let order = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let p = load_problem(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/sec7.json"))?;
    let r = solve(&assemble(&compactify(&p)?, order)?, &SolveOptions::default());
    println!("order {order}: bound {:.6} ({}), optimum 0.32", r.bound, r.status);
    println!("{:>3} {:>9} {:>9} {:>9} {:>9}", "k", "t", "y", "r", "w");
    let cols: Vec<Vec<f64>> = (0..4).map(|v| r.moments.marginal(v)).collect();
    for k in 0..cols[0].len() {
        print!("{k:>3}");
        for (v, which) in MomentVar::ALL.iter().enumerate() {
            let exact = closed_form_moment(*which, k as u32, 0.2);
            print!(" {:>9.4}", cols[v][k]);
            assert!((cols[v][k] - exact).abs() < 0.05);
        }
        println!();
    }
    assert!((r.bound - 0.32).abs() < 1e-3);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
