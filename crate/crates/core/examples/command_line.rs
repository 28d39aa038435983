// Driving the command-line front end from code.

use relaxocp::cli;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let problem = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/osc.json");
    for args in [
        vec!["relaxocp", "oracle", "--name", "ex2", "--max-k", "3"],
        vec!["relaxocp", "sweep", "--problem", problem, "--min-order", "2", "--max-order", "3", "--format", "csv"],
        vec!["relaxocp", "seq", "--name", "conc", "--cost", "--max-exp", "5"],
    ] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = cli::run(args.clone(), &mut out, &mut err);
        println!("$ {}\n{}", args[1..].join(" "), String::from_utf8(out)?);
        if code != 0 {
            return Err(String::from_utf8(err)?.into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
