//! Seeded generation is reproducible, and JSON round trips are exact.

use clqr::generate::{generate, GeneratorConfig};
use clqr::io::{parse_problem, write_problem};

fn main() -> clqr::Result<()> {
    let cfg = GeneratorConfig { stages: 3, ..Default::default() };
    let a = generate(42, &cfg);
    let b = generate(42, &cfg);
    assert_eq!(a.problem, b.problem);

    let text = write_problem(&a.problem)?;
    let (back, asymmetry) = parse_problem(&text)?;
    assert_eq!(back, a.problem);
    assert_eq!(write_problem(&back)?, text);

    println!("{} bytes, asymmetry {asymmetry:e}, round trip exact", text.len());
    println!("witness x0 = {:?}", a.witness_x[0].as_slice());
    println!("{}", &text[..text.len().min(400)]);
    Ok(())
}
