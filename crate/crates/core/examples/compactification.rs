// Mapping an unbounded control to a compact variable and listing the weak
// dynamics constraints.

use relaxocp::compactify::{compactify, weak_constraints};
use relaxocp::ocpmodel::load_problem;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = load_problem(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/sec7.json"))?;
    let cp = compactify(&p)?;
    println!("space {:?}, control map {:?}", cp.space, cp.control);
    println!("objective {}", cp.objective);
    println!("dv/dt weight {}", cp.time_factor);
    println!("dv/dy weight {}", cp.state_factors[0]);
    for g in &cp.inequalities {
        println!("  {g} >= 0");
    }
    for h in &cp.equalities {
        println!("  {h} = 0");
    }
    for c in weak_constraints(&cp, 2) {
        println!("test {}: int {} = {}", c.test.display(&cp.space), c.integrand, c.rhs);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
