// Minimizing sequences at finite k and their convergence to the limit
// measures.

use relaxocp::polyalg::{Polynomial, VariableSpace};
use relaxocp::seqsim::{convergence_report, cost, dyadic_ks, gnuplot_data, make_sequence};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["osc", "conc", "oscconc", "sec7(0.2)"] {
        let c: Vec<String> = [2, 16, 1024].iter().map(|&k| Ok(format!("{:.3e}", cost(&make_sequence(name, k)?)?))).collect::<Result<_, relaxocp::seqsim::SeqError>>()?;
        println!("{name:<10} cost at k = 2, 16, 1024: {}", c.join(", "));
    }
    let sp = VariableSpace::new(["t", "y", "s"])?;
    let p = |s: &str| Polynomial::parse(s, &sp);
    println!("ex2, f = t, g0 = 1 + s, h = y^2");
    for r in convergence_report("ex2", &p("t")?, &p("1 + s")?, &p("y^2")?, &dyadic_ks(10))? {
        println!("  k = {:>5}  value {:.6}  error {:.2e}", r.k, r.value, r.error);
    }
    let seqs = [1, 2, 4, 8].iter().map(|&k| make_sequence("sec7(0.2)", k.max(2))).collect::<Result<Vec<_>, _>>()?;
    println!("gnuplot data: {} lines", gnuplot_data(&seqs).lines().count());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
