//! Solver for linear-quadratic regulator problems with stagewise linear
//! equality constraints.
//!
//! The pipeline eliminates every mixed (`C x + D u + d = 0`) and state-only
//! (`E x + e = 0`) constraint through stagewise changes of variables that keep
//! the cost regular, solves the resulting unconstrained LQR, and maps the
//! solution back. A dense KKT solver in [`oracle`] serves as reference.

pub mod cli;
pub mod error;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod lqr;
pub mod oracle;
pub mod pipeline;
pub mod problem;
pub mod reduction;

pub use error::{ClqrError, Result};

pub type Matrix = nalgebra::DMatrix<f64>;
pub type Vector = nalgebra::DVector<f64>;
