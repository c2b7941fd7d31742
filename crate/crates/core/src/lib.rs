//! Exact computations with n-ary associative algebras and n-ary semigroups:
//! universal ℤ_{n-1}-graded envelopes, graded ideals and quotients, lifts of
//! homomorphisms, the n-ary bar complex, congruence-closure envelopes of
//! finite n-semigroups, and ternary groups.

pub mod cli;
pub mod envelope;
pub mod exactlin;
pub mod guard;
pub mod homology;
pub mod lifting;
pub mod nary_core;
pub mod nsemigroup;

pub use exactlin::{Matrix, RowSpace, Scalar, Vector};
pub use nary_core::{Field, NAryAlgebra};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed scalar literal `{0}`")]
    Literal(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("not associative: {0}")]
    NotAssociative(String),
    #[error("size guard: {what} needs {size} coordinates, budget is {limit} (set NARY_SIZE_GUARD to override)")]
    SizeGuard { what: String, size: u128, limit: u64 },
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not well defined on relation classes: {0}")]
    IllDefined(String),
    #[error("{0} is not a cube root of unity")]
    NotCubeRoot(String),
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("ideal meets the image of the algebra in degree 1 (intersection dimension {0})")]
    IdealMeetsImage(usize),
    #[error("d_{0} d_{next} is nonzero; the chain complex is invalid", next = .0 + 1)]
    NotAComplex(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
