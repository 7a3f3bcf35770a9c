#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use clqr::generate::GeneratorConfig;
use clqr::io::parse_problem;
use clqr::problem::ClqrProblem;

pub const DENSITIES: [f64; 3] = [0.0, 0.3, 0.7];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// `(file stem, raw text)` for every fixture, sorted by name.
pub fn fixture_texts() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            (stem, fs::read_to_string(&p).expect("readable fixture"))
        })
        .collect();
    out.sort();
    out
}

pub fn fixtures() -> Vec<(String, ClqrProblem)> {
    fixture_texts().into_iter().map(|(name, text)| (name, parse_problem(&text).expect("valid fixture").0)).collect()
}

/// Horizon in `1..=50`, dimensions in `1..=8`, densities cycling through
/// [`DENSITIES`] independently for mixed and state-only rows.
pub fn corpus_config(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        stages: 1 + (seed.wrapping_mul(2654435761) % 50) as usize,
        state_range: (1, 8),
        control_range: (1, 8),
        mixed_density: DENSITIES[(seed % 3) as usize],
        state_density: DENSITIES[((seed / 3) % 3) as usize],
        infeasible: None,
    }
}

/// Short horizons and small dimensions, for per-step oracle checks.
pub fn small_config(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        stages: 1 + (seed % 4) as usize,
        state_range: (1, 4),
        control_range: (1, 3),
        mixed_density: [0.3, 0.5, 0.7][(seed % 3) as usize],
        state_density: [0.3, 0.5, 0.7][((seed / 3) % 3) as usize],
        infeasible: None,
    }
}

/// `|value − reference| / (1 + |reference|)`.
pub fn rel_gap(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / (1.0 + reference.abs())
}

/// `value <= bound`, false for NaN.
pub fn within(value: f64, bound: f64) -> bool {
    value <= bound
}
