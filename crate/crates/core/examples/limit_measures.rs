// Exact integrals against the catalog of limit measures.

use relaxocp::oracles::{self, anisotropic_integral, closed_form_moment, MomentVar};
use relaxocp::polyalg::{Polynomial, VariableSpace};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let sp = VariableSpace::new(["t", "y", "s"])?;
    let p = |s: &str| Polynomial::parse(s, &sp);
    for name in oracles::CATALOG {
        let e = oracles::entry(name)?;
        println!("{:<12} mass {:.3}  p = {}", e.name, e.measure.mass(), e.growth);
    }
    // a jump of y from 0 to 1 at t = 1/2 driven by a concentrating control
    println!("ex1b: int 2y s = {}", anisotropic_integral("ex1b", &p("1")?, &p("s")?, &p("2*y")?)?);
    println!("ex1b: int 2y   = {}", anisotropic_integral("ex1b", &p("1")?, &p("1")?, &p("2*y")?)?);
    println!("ex2:  int 2y   = {}", anisotropic_integral("ex2", &p("1")?, &p("1")?, &p("2*y")?)?);
    for eps in [0.1, 0.5] {
        let y: Vec<String> = (0..4).map(|k| format!("{:.4}", closed_form_moment(MomentVar::Y, k, eps))).collect();
        println!("eps = {eps}: int y^k = {}", y.join(", "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
