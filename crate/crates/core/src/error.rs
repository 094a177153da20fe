use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range 1..={max}")]
    QubitCount { n: u32, max: u32 },
    #[error("mask {bits:#b} does not fit in {n} qubits")]
    MaskOutOfRange { bits: u64, n: u32 },
    #[error("qubit index {qubit} outside 1..={n}")]
    QubitIndex { qubit: usize, n: u32 },
    #[error("qubit {qubit} listed twice")]
    DuplicateQubit { qubit: usize },
    #[error("qubit counts differ: {left} vs {right}")]
    QubitMismatch { left: u32, right: u32 },
    #[error("the empty mask is the global phase, not a gate")]
    ZeroMaskGate,
    #[error("gates in layer {layer} overlap")]
    LayerConflict { layer: usize },
    #[error("phase vector has {got} entries, expected {expected}")]
    PhaseLength { expected: usize, got: usize },
    #[error("basis index {index} outside 0..{size}")]
    BasisIndex { index: u64, size: u64 },
    #[error("mask {bits:#b} appears more than once")]
    DuplicateMask { bits: u64 },
    #[error("{what}: {got} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("graph needs an even vertex count of at least 4, got {0}")]
    GraphSize(usize),
    #[error("{path}: {msg}")]
    Document { path: PathBuf, msg: String },
    #[error("gate {index}: {source}")]
    Gate {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
