//! Sequential Riccati recursion against the associative scan on a long
//! horizon. Set `CLQR_THREADS` to size the worker pool.

use std::time::Instant;

use clqr::generate::uniform_chain;
use clqr::lqr::{solve_parallel, solve_sequential};

fn main() -> clqr::Result<()> {
    let p = uniform_chain(5, 20_000, 6, 3);

    let t = Instant::now();
    let seq = solve_sequential(&p)?;
    let seq_ms = t.elapsed().as_secs_f64() * 1e3;

    let t = Instant::now();
    let (par, diagnostics) = solve_parallel(&p)?;
    let par_ms = t.elapsed().as_secs_f64() * 1e3;

    let diff = seq.x.iter().zip(&par.x).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max);
    println!("horizon {}, threads {}", p.num_stages(), clqr::lqr::thread_pool().current_num_threads());
    println!("sequential {seq_ms:8.1} ms   objective {:.9e}", seq.objective);
    println!("parallel   {par_ms:8.1} ms   objective {:.9e}", par.objective);
    println!("max state difference {diff:.1e}");
    println!("worst scan condition {:.1e}, {} flagged", diagnostics.max_condition(), diagnostics.flagged.len());
    Ok(())
}
