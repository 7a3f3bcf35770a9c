//! Walks the elimination one step at a time and shows what each step did.

use clqr::generate::{generate, GeneratorConfig};
use clqr::problem::ToleranceConfig;
use clqr::reduction::{Reducer, Step};

fn main() -> clqr::Result<()> {
    let cfg = GeneratorConfig { stages: 4, mixed_density: 0.6, state_density: 0.5, ..Default::default() };
    let problem = generate(21, &cfg).problem;
    println!("states {:?}, controls {:?}", problem.state_dims(), problem.control_dims());
    println!("{} mixed rows, {} state-only rows\n", problem.mixed_rows(), problem.state_only_rows());

    let mut reducer = Reducer::new(problem, ToleranceConfig::default())?;
    let mut iteration = 0;
    while !reducer.problem().is_unconstrained() {
        iteration += 1;
        println!("iteration {iteration}");
        for step in Step::ALL {
            let report = reducer.apply(step)?;
            if !report.touched.is_empty() {
                println!("  {step:<16} (time, rows) {:?}", report.touched);
            }
        }
        let p = reducer.problem();
        println!("  -> states {:?}, controls {:?}", p.state_dims(), p.control_dims());
    }
    println!("\nledger holds {} substitutions", reducer.ledger().len());
    Ok(())
}
