// Loading a JSON problem with a parameter override.

use std::collections::BTreeMap;

use relaxocp::ocpmodel::{load_problem_with, OcpProblem};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/sec7.json");
    let overrides = BTreeMap::from([("eps".to_string(), 0.5)]);
    let p = load_problem_with(path, &overrides)?;
    println!("{}: states {:?}, controls {:?}, p = {}", p.name, p.states, p.controls, p.growth);
    println!("parameters {:?}", p.parameters);
    println!("lagrangian {}", p.lagrangian);
    println!("diagnostics: {}", p.validate().len());
    // the serialized form reloads to the same problem
    let again = OcpProblem::from_json_str(&p.to_json_string(), &BTreeMap::new())?;
    assert_eq!(again, p);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
