use alloc::string::String;

use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("invalid envelope: constant must be positive and finite (got {0})")]
    InvalidEnvelope(f64),

    #[error("coefficient at index {index} has modulus {modulus:.6e}, above the declared envelope bound {bound:.6e}")]
    EnvelopeViolation { index: i64, modulus: f64, bound: f64 },

    #[error("index domain mismatch")]
    DomainMismatch,

    #[error("unpaired distributions: two polynomial-growth vectors can only be paired through a smoothing operator")]
    UnpairedDistributions,

    #[error("pairing budget exhausted after {terms} terms; best tail bound {achieved:.3e} > tolerance {tolerance:.3e}")]
    Budget { terms: usize, achieved: f64, tolerance: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("quadrature did not converge: coarse {coarse} vs fine {fine} (tolerance {tolerance:.3e})")]
    Accuracy {
        coarse: Complex64,
        fine: Complex64,
        tolerance: f64,
    },

    #[error("mollifier support {support} exceeds the injectivity radius 1/2; need n >= {required_n}")]
    InjectivityRadius { support: f64, required_n: u32 },
}
