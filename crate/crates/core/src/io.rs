//! JSON documents for problems and solutions.
//!
//! Matrices are row-major nested arrays. Shapes follow from the `dims` block:
//! `n` lists the `N + 1` state dimensions, `m` the `N` control dimensions.
//! Constraint blocks (`C`, `D`, `d` and `E`, `e`) may be left out, which means
//! zero rows. Numbers are written in shortest round-trip form, so reading back
//! a written problem reproduces it bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{ClqrError, Result};
use crate::problem::{
    ClqrProblem, Dynamics, InfeasibilityWitness, MixedConstraint, ResidualReport, SolveOutcome, StageCost, StageData,
    StateConstraint, Status, TerminalData, WitnessKind,
};
use crate::reduction::ReductionTrace;
use crate::{Matrix, Vector};

pub const FORMAT_VERSION: u32 = 1;

type Rows = Vec<Vec<f64>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dims {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct StageDoc {
    pub Q: Rows,
    pub R: Rows,
    pub M: Rows,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub A: Rows,
    pub B: Rows,
    pub c: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub C: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub D: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub E: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<f64>>,
    #[serde(default, rename = "const", skip_serializing_if = "is_zero")]
    pub constant: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TerminalDoc {
    pub Q: Rows,
    pub q: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub E: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<f64>>,
    #[serde(default, rename = "const", skip_serializing_if = "is_zero")]
    pub constant: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    pub version: u32,
    pub dims: Dims,
    pub s0: Vec<f64>,
    pub stages: Vec<StageDoc>,
    pub terminal: TerminalDoc,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

fn bad(path: &str, msg: impl std::fmt::Display) -> ClqrError {
    ClqrError::Parse(format!("{path}: {msg}"))
}

fn check_finite(path: &str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(k) => Err(bad(path, format!("entry {k} is not finite"))),
    }
}

/// Matrix with `cols` columns; `rows` is enforced when given.
fn matrix(path: &str, data: &Rows, rows: Option<usize>, cols: usize) -> Result<Matrix> {
    if let Some(r) = rows {
        if data.len() != r {
            return Err(bad(path, format!("expected {r} rows, found {}", data.len())));
        }
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(bad(&format!("{path}[{i}]"), format!("expected {cols} columns, found {}", row.len())));
        }
        check_finite(&format!("{path}[{i}]"), row)?;
    }
    Ok(Matrix::from_fn(data.len(), cols, |i, j| data[i][j]))
}

fn vector(path: &str, data: &[f64], len: usize) -> Result<Vector> {
    if data.len() != len {
        return Err(bad(path, format!("expected length {len}, found {}", data.len())));
    }
    check_finite(path, data)?;
    Ok(Vector::from_column_slice(data))
}

fn rows_of(m: &Matrix) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn entries(v: &Vector) -> Vec<f64> {
    v.iter().copied().collect()
}

fn state_block(path: &str, e: &Option<Rows>, off: &Option<Vec<f64>>, n: usize) -> Result<StateConstraint> {
    match (e, off) {
        (None, None) => Ok(StateConstraint::empty(n)),
        (Some(e), Some(off)) => {
            let state = matrix(&format!("{path}.E"), e, None, n)?;
            let offset = vector(&format!("{path}.e"), off, state.nrows())?;
            Ok(StateConstraint { state, offset })
        }
        _ => Err(bad(path, "E and e must be given together")),
    }
}

impl ProblemFile {
    pub fn from_problem(p: &ClqrProblem) -> Result<Self> {
        p.check_dimensions()?;
        let finite = |m: &Matrix| m.iter().all(|v| v.is_finite());
        let finite_v = |v: &Vector| v.iter().all(|x| x.is_finite());
        let stages = p
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let all_finite = [
                    &s.cost.state,
                    &s.cost.control,
                    &s.cost.cross,
                    &s.dynamics.state,
                    &s.dynamics.control,
                    &s.mixed.state,
                    &s.mixed.control,
                    &s.state_only.state,
                ]
                .into_iter()
                .all(finite)
                    && [&s.cost.state_linear, &s.cost.control_linear, &s.dynamics.offset, &s.mixed.offset, &s.state_only.offset]
                        .into_iter()
                        .all(finite_v)
                    && s.cost.constant.is_finite();
                if !all_finite {
                    return Err(bad(&format!("stages[{i}]"), "non-finite entry cannot be written"));
                }
                let mixed = !s.mixed.is_empty();
                let state_only = !s.state_only.is_empty();
                Ok(StageDoc {
                    Q: rows_of(&s.cost.state),
                    R: rows_of(&s.cost.control),
                    M: rows_of(&s.cost.cross),
                    q: entries(&s.cost.state_linear),
                    r: entries(&s.cost.control_linear),
                    A: rows_of(&s.dynamics.state),
                    B: rows_of(&s.dynamics.control),
                    c: entries(&s.dynamics.offset),
                    C: mixed.then(|| rows_of(&s.mixed.state)),
                    D: mixed.then(|| rows_of(&s.mixed.control)),
                    d: mixed.then(|| entries(&s.mixed.offset)),
                    E: state_only.then(|| rows_of(&s.state_only.state)),
                    e: state_only.then(|| entries(&s.state_only.offset)),
                    constant: s.cost.constant,
                })
            })
            .collect::<Result<_>>()?;
        let t = &p.terminal;
        if !(finite(&t.state) && finite_v(&t.state_linear) && finite(&t.state_only.state) && finite_v(&t.state_only.offset))
            || !finite_v(&p.initial_state)
        {
            return Err(bad("terminal", "non-finite entry cannot be written"));
        }
        let pinned = !t.state_only.is_empty();
        Ok(ProblemFile {
            version: FORMAT_VERSION,
            dims: Dims { n: p.state_dims(), m: p.control_dims() },
            s0: entries(&p.initial_state),
            stages,
            terminal: TerminalDoc {
                Q: rows_of(&t.state),
                q: entries(&t.state_linear),
                E: pinned.then(|| rows_of(&t.state_only.state)),
                e: pinned.then(|| entries(&t.state_only.offset)),
                constant: t.constant,
            },
        })
    }

    /// Builds the problem with shapes checked against `dims`. `Q` and `R`
    /// are not symmetrized here; see [`parse_problem`].
    pub fn to_problem(&self) -> Result<ClqrProblem> {
        if self.version != FORMAT_VERSION {
            return Err(bad("version", format!("unsupported version {} (expected {FORMAT_VERSION})", self.version)));
        }
        let horizon = self.stages.len();
        let (n, m) = (&self.dims.n, &self.dims.m);
        if n.len() != horizon + 1 || m.len() != horizon {
            return Err(bad(
                "dims",
                format!("{horizon} stages need {} state and {horizon} control dimensions, found {} and {}", horizon + 1, n.len(), m.len()),
            ));
        }
        let stages = self
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let path = format!("stages[{i}]");
                let at = |key: &str| format!("{path}.{key}");
                let (ni, mi, next) = (n[i], m[i], n[i + 1]);
                let cost = StageCost {
                    state: matrix(&at("Q"), &s.Q, Some(ni), ni)?,
                    control: matrix(&at("R"), &s.R, Some(mi), mi)?,
                    cross: matrix(&at("M"), &s.M, Some(ni), mi)?,
                    state_linear: vector(&at("q"), &s.q, ni)?,
                    control_linear: vector(&at("r"), &s.r, mi)?,
                    constant: s.constant,
                };
                let dynamics = Dynamics {
                    state: matrix(&at("A"), &s.A, Some(next), ni)?,
                    control: matrix(&at("B"), &s.B, Some(next), mi)?,
                    offset: vector(&at("c"), &s.c, next)?,
                };
                let mixed = match (&s.C, &s.D, &s.d) {
                    (None, None, None) => MixedConstraint::empty(ni, mi),
                    (Some(c), Some(d_mat), Some(d)) => {
                        let state = matrix(&at("C"), c, None, ni)?;
                        let rows = state.nrows();
                        MixedConstraint {
                            state,
                            control: matrix(&at("D"), d_mat, Some(rows), mi)?,
                            offset: vector(&at("d"), d, rows)?,
                        }
                    }
                    _ => return Err(bad(&path, "C, D and d must be given together")),
                };
                let state_only = state_block(&path, &s.E, &s.e, ni)?;
                Ok(StageData { cost, dynamics, mixed, state_only })
            })
            .collect::<Result<_>>()?;
        let t = &self.terminal;
        let nn = n[horizon];
        let terminal = TerminalData {
            state: matrix("terminal.Q", &t.Q, Some(nn), nn)?,
            state_linear: vector("terminal.q", &t.q, nn)?,
            constant: t.constant,
            state_only: state_block("terminal", &t.E, &t.e, nn)?,
        };
        Ok(ClqrProblem { initial_state: vector("s0", &self.s0, n[0])?, stages, terminal })
    }
}

/// Parses a problem document and symmetrizes `Q`, `R`. Returns the largest
/// relative asymmetry that was removed.
pub fn parse_problem(text: &str) -> Result<(ClqrProblem, f64)> {
    let doc: ProblemFile =
        serde_json::from_str(text).map_err(|e| ClqrError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let mut p = doc.to_problem()?;
    let asym = p.symmetrize();
    Ok((p, asym))
}

pub fn write_problem(p: &ClqrProblem) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ProblemFile::from_problem(p)?)?)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResidualDoc {
    pub dynamics: f64,
    pub mixed: f64,
    pub state_only: f64,
    pub stationarity: f64,
}

impl From<&ResidualReport> for ResidualDoc {
    fn from(r: &ResidualReport) -> Self {
        Self { dynamics: r.dynamics, mixed: r.mixed, state_only: r.state_only, stationarity: r.stationarity }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TraceDoc {
    pub iterations: usize,
    pub iteration_limit: usize,
    pub eliminated_states: Vec<usize>,
    pub eliminated_controls: Vec<usize>,
}

impl From<&ReductionTrace> for TraceDoc {
    fn from(t: &ReductionTrace) -> Self {
        Self {
            iterations: t.iterations,
            iteration_limit: t.iteration_limit,
            eliminated_states: t.eliminated_states.clone(),
            eliminated_controls: t.eliminated_controls.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WitnessDoc {
    pub stage: usize,
    pub kind: String,
    pub coefficients: Vec<f64>,
    pub residual: f64,
}

impl From<&InfeasibilityWitness> for WitnessDoc {
    fn from(w: &InfeasibilityWitness) -> Self {
        let kind = match w.kind {
            WitnessKind::DependentStateRows => "dependent-state-rows",
            WitnessKind::InitialStateMismatch => "initial-state-mismatch",
            WitnessKind::StackedRows => "stacked-rows",
        };
        Self { stage: w.stage, kind: kind.into(), coefficients: entries(&w.coefficients), residual: w.residual }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolutionFile {
    pub status: String,
    /// `null` when infeasible.
    pub objective: Option<f64>,
    pub x: Vec<Vec<f64>>,
    pub u: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ResidualDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

impl SolutionFile {
    pub fn new(outcome: &SolveOutcome, trace: Option<&ReductionTrace>) -> Self {
        let optimal = outcome.is_optimal();
        Self {
            status: outcome.status.to_string(),
            objective: optimal.then_some(outcome.objective),
            x: outcome.x.iter().map(entries).collect(),
            u: outcome.u.iter().map(entries).collect(),
            residuals: optimal.then(|| ResidualDoc::from(&outcome.residuals)),
            trace: trace.map(TraceDoc::from),
            witness: outcome.witness.as_ref().map(WitnessDoc::from),
        }
    }

    pub fn status(&self) -> Result<Status> {
        match self.status.as_str() {
            "optimal" => Ok(Status::Optimal),
            "infeasible" => Ok(Status::Infeasible),
            other => Err(bad("status", format!("unknown status `{other}`"))),
        }
    }

    pub fn trajectory(&self) -> (Vec<Vector>, Vec<Vector>) {
        let to = |v: &Vec<f64>| Vector::from_column_slice(v);
        (self.x.iter().map(to).collect(), self.u.iter().map(to).collect())
    }
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    serde_json::from_str(text).map_err(|e| ClqrError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub fn write_solution(sol: &SolutionFile) -> Result<String> {
    Ok(serde_json::to_string_pretty(sol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GeneratorConfig};

    const MINIMAL: &str = r#"{
        "version": 1,
        "dims": {"n": [1, 1], "m": [1]},
        "s0": [1.0],
        "stages": [{"Q": [[0]], "R": [[1]], "M": [[0]], "q": [0], "r": [0], "A": [[1]], "B": [[1]], "c": [0]}],
        "terminal": {"Q": [[1]], "q": [0]}
    }"#;

    #[test]
    fn minimal_scalar_document() {
        let (p, asym) = parse_problem(MINIMAL).unwrap();
        assert_eq!(p.num_stages(), 1);
        assert_eq!(asym, 0.0);
        assert!(p.is_unconstrained());
    }

    #[test]
    fn terminal_only_constraint() {
        let text = MINIMAL.replace(r#""q": [0]}"#, r#""q": [0], "E": [[1]], "e": [-2]}"#);
        let (p, _) = parse_problem(&text).unwrap();
        assert_eq!(p.state_constraint(1).rows(), 1);
        assert_eq!(p.state_constraint(0).rows(), 0);
    }

    #[test]
    fn shape_errors_name_the_field() {
        let text = MINIMAL.replace(r#""B": [[1]]"#, r#""B": [[1, 2]]"#);
        let err = parse_problem(&text).unwrap_err().to_string();
        assert!(err.contains("stages[0].B[0]"), "{err}");
        let err = parse_problem("{\"version\": 1,").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        let text = MINIMAL.replace(r#""c": [0]}"#, r#""c": [0], "C": [[1]]}"#);
        assert!(parse_problem(&text).is_err());
    }

    #[test]
    fn asymmetric_input_is_symmetrized() {
        let mut p = generate(1, &GeneratorConfig::default()).problem;
        let n = p.terminal.state_dim();
        p.terminal.state = Matrix::identity(n, n);
        if n > 1 {
            p.terminal.state[(0, 1)] = 0.5;
        }
        let (q, asym) = parse_problem(&write_problem(&p).unwrap()).unwrap();
        assert_eq!(q.terminal.state, q.terminal.state.transpose());
        assert!(n == 1 || asym > 0.0);
    }

    #[test]
    fn generated_problems_round_trip() {
        for seed in 0..10 {
            let cfg = GeneratorConfig { mixed_density: 0.5, state_density: 0.5, ..Default::default() };
            let p = generate(seed, &cfg).problem;
            let text = write_problem(&p).unwrap();
            let (q, _) = parse_problem(&text).unwrap();
            assert_eq!(p, q);
        }
    }
}
