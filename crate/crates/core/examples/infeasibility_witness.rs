//! Each kind of contradictory constraint, and the certificate reported for it.

use clqr::generate::{generate, GeneratorConfig, InfeasibleKind};
use clqr::oracle;
use clqr::pipeline::{solve, SolveOptions};
use clqr::problem::ToleranceConfig;

fn main() -> clqr::Result<()> {
    for kind in InfeasibleKind::ALL {
        let cfg = GeneratorConfig { infeasible: Some(kind), ..Default::default() };
        let p = generate(3, &cfg).problem;
        let ours = solve(&p, &SolveOptions::default())?.outcome;
        let reference = oracle::solve(&p, &ToleranceConfig::default())?.outcome;
        let w = ours.witness.expect("infeasible");
        println!("{kind:?}");
        println!("  pipeline: {w}");
        println!("            coefficients {:?}", w.coefficients.as_slice());
        println!("  oracle:   {}", reference.witness.expect("infeasible"));
    }
    Ok(())
}
