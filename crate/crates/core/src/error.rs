use thiserror::Error;

use crate::jet::DiffOperator;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base index {index} out of range 1..={base_dim}")]
    BaseIndexOutOfRange { index: usize, base_dim: usize },
    #[error("generator index {index} out of range 1..={gens}")]
    GeneratorOutOfRange { index: usize, gens: usize },
    #[error("expected {expected} components, found {found}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("operator takes {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operator is not linear (arity {0})")]
    NotLinear(usize),
    #[error("operator must take at least one argument")]
    ZeroArity,
    #[error("operator template does not use each argument exactly once")]
    MalformedTemplate,
    #[error("input is not homogeneous in the odd letters (b-degrees {0:?})")]
    MixedDegree(Vec<usize>),
    #[error("a 0-vector has no operator normalization")]
    ZeroDegree,
    #[error("operator is not skew-adjoint; A + A^† = {defect}")]
    NotSkewAdjoint { defect: Box<DiffOperator> },
    #[error("expected a functional of b-degree 0, found b-degrees {0:?}")]
    NonzeroBDegree(Vec<usize>),
    #[error("{0}")]
    WrongFamily(&'static str),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("invalid document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
