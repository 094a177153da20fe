//! Synthesis and depth optimization for circuits of multiple-control
//! Z-rotation (MCZR) gates.
//!
//! - [`gate`] holds the shared types: masks, gates, sequences, layerings.
//! - [`phasepoly`] maps circuits to phase polynomials and diagonal unitaries.
//! - [`synth`] solves a diagonal unitary into its unique minimal gate set.
//! - [`layering`] packs commuting gates into few layers.
//! - [`bench`] builds the end-to-end workflows and benchmark suites.
//! - [`io`] reads and writes circuit, phase-vector and config documents.

pub mod bench;
pub mod cli;
pub mod error;
pub mod gate;
pub mod io;
pub mod layering;
pub mod phasepoly;
pub mod synth;

pub use error::{Error, Result};
pub use gate::{GateMask, GateSeq, Layering, MczrGate, PhaseVector};
pub use layering::OptReport;
pub use phasepoly::PhasePolynomial;
