use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

/// Errors raised by the algebraic constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("basis index {index} out of range for space of dimension {dim}")]
    InvalidIndex { index: usize, dim: usize },
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("element is not homogeneous")]
    MixedDegree,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("inhomogeneous polynomial: {0}")]
    Inhomogeneous(String),
    #[error("differential does not preserve the relation ideal: d({0}) is not in the ideal")]
    IdealNotPreserved(String),
    #[error("degree cap {cap} exceeded (degree {degree})")]
    CapExceeded { cap: i64, degree: i64 },
    #[error("product {0} lands above the degree cap and is nonzero")]
    Overflow(String),
    #[error("bracket entry {0} is inconsistent with graded antisymmetry")]
    AntisymmetryConflict(String),
    #[error("not a Maurer-Cartan element: curvature is {0}")]
    NotMaurerCartan(String),
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("bracket does not close on the truncation: {0}")]
    TruncationNotClosed(String),
    #[error("differential does not square to zero: {0}")]
    DifferentialSquare(String),
    #[error("negative degrees present: {0}")]
    NegativeDegree(String),
    #[error("malformed Sullivan data: {0}")]
    MalformedSullivan(String),
    #[error("presentation is not of F0 shape: {0}")]
    NotF0(String),
    #[error("element is not a cycle: {0}")]
    NotACycle(String),
    #[error("kernel of the twisted differential in degree {degree} has dimension {kernel} but there are {derivations} derivations")]
    HalperinMismatch {
        degree: i64,
        kernel: usize,
        derivations: usize,
    },
    #[error("homology report does not match the algebra")]
    ReportMismatch,
    #[error("coefficient {0} is not an integer")]
    NonIntegral(Scalar),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A failed axiom, named together with the basis tuple it fails on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub at: Vec<String>,
}

impl Violation {
    pub fn new(axiom: impl Into<String>, at: Vec<String>) -> Self {
        Self {
            axiom: axiom.into(),
            at,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({})", self.axiom, self.at.join(", "))
    }
}
