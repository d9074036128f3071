use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("odd dimension {0}; elements of O±(n,n,Z) are 2n x 2n")]
    OddDimension(usize),
    #[error("not in O±(n,n,Z): {0}")]
    NotMember(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("integrality failure: {0}")]
    Integrality(String),
    #[error("not an automorphism: H is nonzero")]
    NotAutomorphism,
    #[error("index tuple {0:?} does not cover point {1}")]
    BadIndices(Vec<usize>, usize),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A failed identity check: which identity, and where.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

pub fn violation(axiom: &'static str, detail: String) -> Violation {
    Violation { axiom, detail }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.axiom, self.detail)
    }
}
