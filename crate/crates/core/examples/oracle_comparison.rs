//! Pipeline against the dense reference solver on a handful of seeds.

use clqr::generate::{generate, GeneratorConfig};
use clqr::oracle;
use clqr::pipeline::{solve, SolveOptions};
use clqr::problem::ToleranceConfig;

fn main() -> clqr::Result<()> {
    let cfg = GeneratorConfig { stages: 10, state_range: (2, 5), control_range: (1, 4), ..Default::default() };
    println!("{:>4} {:>16} {:>16} {:>10}", "seed", "pipeline", "oracle", "gap");
    for seed in 0..8 {
        let p = generate(seed, &cfg).problem;
        let ours = solve(&p, &SolveOptions::default())?.outcome;
        let reference = oracle::solve(&p, &ToleranceConfig::default())?.outcome;
        let gap = (ours.objective - reference.objective).abs() / (1.0 + reference.objective.abs());
        println!("{seed:>4} {:>16.10} {:>16.10} {gap:>10.1e}", ours.objective, reference.objective);
    }
    Ok(())
}
