// Sparse polynomial arithmetic over named variables.

use relaxocp::polyalg::{Polynomial, VariableSpace};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let sp = VariableSpace::new(["t", "y", "u"])?;
    let p = Polynomial::parse("(u^2 - 1)^2 + y^2", &sp)?;
    let q = Polynomial::parse("t*u - 2", &sp)?;
    println!("p = {p}");
    println!("p * q = {}", &p * &q);
    println!("dp/du = {}", p.differentiate("u")?);
    // u -> 2y + 1
    let s = p.substitute(&[("u", Polynomial::parse("2*y + 1", &sp)?)])?;
    println!("p(u = 2y + 1) = {s}");
    assert_eq!(s.evaluate(&[0.0, 0.0, 0.0])?, p.evaluate(&[0.0, 0.0, 1.0])?);
    println!("degree {}, degree in u {}", p.degree(), p.degree_in(2));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
