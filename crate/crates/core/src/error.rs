use thiserror::Error;

/// Errors raised by constructions whose inputs violate a structural invariant.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("differential does not square to zero in degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("Maurer-Cartan equation fails in degree {degree}")]
    McViolation { degree: i64 },
    #[error("map is not a chain map in degree {degree}")]
    NotAChainMap { degree: i64 },
    #[error("double complex differentials do not anticommute at ({p}, {q})")]
    NotAntiCommuting { p: i64, q: i64 },
    #[error("inconsistent composition table: {0}")]
    Composition(String),
    #[error("arity mismatch at vertex {vertex}: expected {expected}, got {got}")]
    Arity { vertex: usize, expected: usize, got: usize },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("invalid tree: {0}")]
    Tree(String),
    #[error("algebra axiom fails: {0}")]
    Algebra(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not stabilized in window; dimension trace {trace:?}")]
    NotStabilized { trace: Vec<Vec<usize>> },
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("invalid stage {stage} (window {window})")]
    Stage { stage: usize, window: usize },
    #[error("invalid finite space or cover: {0}")]
    Topology(String),
    #[error("not an operad map: the relation of {0} fails")]
    NotAnOperadMap(String),
    #[error("defect is not a cocycle at generator {0}")]
    NotACocycle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
