//! Solve a small problem with a terminal state pin and print the trajectory.
//!
//! `cargo run --example solve_fixture`

use clqr::io::parse_problem;
use clqr::pipeline::{solve, SolveOptions};

fn main() -> clqr::Result<()> {
    let (problem, _) = parse_problem(include_str!("../fixtures/terminal_pin.json"))?;
    let solution = solve(&problem, &SolveOptions::default())?;
    let out = &solution.outcome;

    println!("status    {}", out.status);
    println!("objective {:.6}", out.objective);
    for (i, x) in out.x.iter().enumerate() {
        let u = out.u.get(i).map(|u| format!("{:>9.4}", u[0])).unwrap_or_default();
        println!("t={i}  x={:>9.4}  u={u}", x[0]);
    }
    println!("max primal residual {:.1e}", out.residuals.max_primal());
    Ok(())
}
