// Building the moment relaxation of a problem and writing it as a sparse
// SDPA file.

use relaxocp::compactify::compactify;
use relaxocp::hierarchy::{assemble, ConicProgram};
use relaxocp::ocpmodel::load_problem;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = load_problem(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/osc.json"))?;
    let prog = assemble(&compactify(&p)?, 2)?;
    println!("{} moments, {} equalities", prog.num_moments(), prog.equalities.len());
    for b in &prog.psd_blocks {
        println!("  block {:<24} size {}", b.label, b.map.size());
    }
    let mut buf = Vec::new();
    prog.write_sdpa(&mut buf)?;
    println!("SDPA file: {} bytes", buf.len());
    let back = ConicProgram::read_sdpa(&buf[..])?;
    assert_eq!(back.num_moments(), prog.num_moments());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
