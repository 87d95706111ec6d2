use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("group order {order} exceeds the cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("relation violated for elements ({0}, {1})")]
    RelationViolated(usize, usize),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("groups do not match: {0}")]
    GroupMismatch(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("unsupported group specification: {0}")]
    UnsupportedGroup(String),
    #[error("polynomial error: {0}")]
    Poly(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("deadline exceeded")]
    Deadline,
}

pub type Result<T> = std::result::Result<T, Error>;
