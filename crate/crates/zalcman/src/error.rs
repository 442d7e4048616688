//! Error type shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

use crate::bounds::DomainCode;

/// Everything that can go wrong outside of theorem-domain bookkeeping.
///
/// Theorem-domain holes (a query the theorems simply do not cover) are
/// normally reported through [`crate::bounds::BoundResult::OutsideDomain`]
/// so that sweeps can tabulate them; they only become an `Error` when an
/// operation needs a concrete bound to proceed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series truncated at order {actual}; coefficient a_{required} is required")]
    TruncationTooShort { required: usize, actual: usize },

    #[error("truncation order must be at least {required}, got {got}")]
    OrderTooSmall { required: usize, got: usize },

    #[error("a_1 must equal 1 exactly, got {got}")]
    NotNormalized { got: Complex64 },

    #[error("functional indices must satisfy n >= 2 and m >= 2, got n={n}, m={m}")]
    BadQueryIndex { n: usize, m: usize },

    #[error("atom weight {weight} at index {index} is negative")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("atom weights must sum to 1 within 1e-12, got {sum}")]
    WeightSum { sum: f64 },

    #[error("measure flagged symmetric but is not invariant under t -> 2pi - t")]
    AsymmetricMeasure,

    #[error("imaginary residue {0:e} exceeds the symmetry tolerance 1e-12")]
    ImaginaryResidue(f64),

    #[error("class {0} has no representation formula to sample from")]
    UnsupportedClass(String),

    #[error("typically real members require a symmetric measure")]
    SymmetryRequired,

    #[error("mixture constraint violated: {0}")]
    MixtureConstraint(String),

    #[error("parameter {name} must satisfy {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("outside theorem domain: {0}")]
    OutsideTheoremDomain(DomainCode),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
