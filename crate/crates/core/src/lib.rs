//! Real quasi-exactly solvable spectral locus of the PT-symmetric quartic
//! oscillator `-y'' + (z^4 - 2 b z^2 + 2 J z) y = lambda y`.
//!
//! The crate builds the exact spectral polynomial `Q_J(b, lambda)`, traces
//! its real zero set, labels each connected component by the number of
//! real zeros of its eigenfunctions, fits the harmonic-oscillator end
//! asymptotics, computes the Nevanlinna parameter along components, and
//! cross-checks everything against the tree-chart combinatorics.
//!
//! See `examples/` for one runnable walkthrough per capability.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod io;
pub mod nevanlinna;
pub mod poly;
pub mod qes;
pub mod rootfind;
pub mod tracer;
pub mod trees;

pub use error::{Error, Result};
