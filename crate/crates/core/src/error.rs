use thiserror::Error;

/// Errors raised by the network algebra.
///
/// Numeric payloads are reported as `f64` regardless of the working scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric: max asymmetry {asymmetry:e} exceeds {allowed:e}")]
    Asymmetric { asymmetry: f64, allowed: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    #[error("interior block is numerically singular (smallest singular value {smallest:e}, largest {largest:e})")]
    SingularBlock { smallest: f64, largest: f64 },

    #[error("spring {i}-{j} has coincident endpoints")]
    DegenerateSpring { i: usize, j: usize },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("random network generation failed: {0}")]
    GenerationFailed(String),

    #[error("lambda = {re} + {im}i is a resonance of the interior block (singular values {singular_values:?})")]
    AtResonance {
        re: f64,
        im: f64,
        singular_values: Vec<f64>,
    },

    #[error("massless elimination broke the Rayleigh structure: deviation {deviation:e} exceeds {allowed:e}")]
    RayleighStructureBroken { deviation: f64, allowed: f64 },

    #[error("floppy mode with sigma = {sigma:e} has coupling norm {coupling:e} above {allowed:e}")]
    FloppyModeInconsistent {
        sigma: f64,
        coupling: f64,
        allowed: f64,
    },

    #[error("reconstruction check failed: max relative error {max_rel_error:e} exceeds {allowed:e}")]
    ReconstructionMismatch { max_rel_error: f64, allowed: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid canonical response: {0}")]
    InvalidCanonical(String),

    #[error("could not place internal nodes: {0}")]
    PlacementFailed(String),

    #[error("rank-one gadget requires a nonzero force vector")]
    ZeroForce,

    #[error("response is not characterizable: {0}")]
    NotCharacterizable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
