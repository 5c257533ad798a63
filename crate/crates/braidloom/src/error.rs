//! Shared error type for the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("operation requires an even strand count, got {0}")]
    OddStrands(usize),

    #[error("braid letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },

    #[error("crossing count {crossings} exceeds the exact state-sum budget of {budget}")]
    CrossingBudget { crossings: usize, budget: usize },

    #[error("cannot evaluate a Laurent polynomial at zero")]
    ZeroBase,

    #[error("matrix dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("endpoint {endpoint} outside valid site range 1..={max}")]
    EndpointOutOfRange { endpoint: usize, max: usize },

    #[error("generator index {index} out of range 1..={max}")]
    GeneratorOutOfRange { index: usize, max: usize },

    #[error("the generators have a finite image; no dense subgroup to search")]
    FiniteImage,

    #[error("the supplied unitary is not a bridge between the subspaces (max projection {max_projection:.3e})")]
    NotABridge { max_projection: f64 },

    #[error("k0 = {0} is excluded (the generated image is finite)")]
    ExcludedK(usize),

    #[error("net transfer failed at entry {entry}: deviation {deviation:.4} exceeds {limit:.4} (k too small)")]
    TransferDeviation {
        entry: usize,
        deviation: f64,
        limit: f64,
    },

    #[error("net coverage {coverage:.3} below the {required:.2} required for recursion")]
    CoverageInsufficient { coverage: f64, required: f64 },

    #[error("no labeling of the path basis is consistent with the reference block structure")]
    NoConsistentLabeling,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("gate at line {line} does not act on adjacent qubits: position {position} with {qubits} qubits")]
    NonAdjacentGate {
        line: usize,
        position: usize,
        qubits: usize,
    },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
