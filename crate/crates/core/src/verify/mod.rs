//! Certificates for almost-morphisms and the named property suites.
//!
//! Every comparison is an exact rational comparison. Work fans out over
//! rayon, and each reduction picks the lowest tuple index among equally bad
//! candidates, so reports do not depend on scheduling. Sampling uses a
//! seeded ChaCha generator; the seed and budget are recorded in every report.

mod almost;
mod sample;
mod suite;

pub use almost::{
    check_almost_morphism, check_embedding, AlmostMorphismReport, ElementWitness, EmbeddingReport,
    Evaluate, PairMap, PairWitness,
};
pub use sample::{population, random_bisection, Population, Tally, Tuples};
pub use suite::{run_suite, CheckOutcome, SuiteInput, SuiteReport, SUITES};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::semigroup::SemigroupError;
use crate::symmetric::SymmetricError;

/// Regime selection for exhaustive versus sampled checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteBudget {
    /// Largest number of tuples (or elements) a check visits exhaustively.
    pub exhaustive_cap: u64,
    /// Tuples (or elements) drawn when the cap is exceeded.
    pub sample_count: u64,
    pub seed: u64,
}

impl Default for SuiteBudget {
    fn default() -> Self {
        SuiteBudget {
            exhaustive_cap: 2_000_000,
            sample_count: 2_000,
            seed: 0x5EED,
        }
    }
}

impl SuiteBudget {
    pub fn with_seed(seed: u64) -> Self {
        SuiteBudget {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("budget caps must be positive")]
    ZeroBudget,
    #[error("unknown suite {0:?}; known suites: {known}", known = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("input is outside the domain: {0}")]
    Domain(SemigroupError),
    #[error("image is outside the codomain: {0}")]
    Codomain(SemigroupError),
    #[error("pair list gives two images for {0}")]
    Conflict(String),
    #[error("pair list has no image for {0}")]
    Incomplete(String),
    #[error("suite {suite} cannot use this groupoid: {reason}")]
    BadInput { suite: String, reason: String },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Symmetric(#[from] SymmetricError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}
