use thiserror::Error;

use crate::realizability::ForbiddenWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cube dimension {0} outside supported range 1..={max}", max = crate::cube::MAX_DIM)]
    DimensionOutOfRange(usize),

    #[error("outmap table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },

    #[error("set {bits:#b} has bits outside the low {n} dimensions")]
    BitsOutOfRange { bits: u32, n: usize },

    #[error("dimension {dim} is not in 1..={n}")]
    BadDimension { dim: usize, n: usize },

    #[error("table is not an orientation: edge {vertex:?}-{dim} is claimed by both or neither endpoint")]
    InconsistentEdge { vertex: Vec<usize>, dim: usize },

    #[error("expected exactly one sink, found {0}")]
    SinkCount(usize),

    #[error("relabeling is not a permutation of 1..={0}")]
    BadPermutation(usize),

    #[error("face fixes coordinates inside its spanning set")]
    BadFace,

    #[error("face spans {0} dimensions, expected 3")]
    FaceDimension(usize),

    #[error("face does not have a unique source and sink")]
    FaceNotUnique,

    #[error("influence graph has a self edge on {0}; loops are implicit")]
    SelfEdge(usize),

    #[error("influence graph contains a directed cycle")]
    CyclicInfluence,

    #[error("orientation is not of Matousek type: flip pattern of dimension {0} varies across the cube")]
    NotMatousekType(usize),

    #[error("parent links of the branching contain a cycle")]
    CyclicBranching,

    #[error("not realizable: {0}")]
    NotRealizable(ForbiddenWitness),

    #[error("order is not a bijection onto the 2n ground elements and q")]
    BadOrder,

    #[error("q cannot be reoriented")]
    QInFlipSet,

    #[error("element {0} is outside the ground set")]
    BadElement(usize),

    #[error("ordering and sign set violate the cyclic P-matroid conditions")]
    InvalidExtension,

    #[error("basis has {got} elements, expected {expected}, or contains the added element")]
    BadBasis { expected: usize, got: usize },

    #[error("abscissae must be {expected} strictly increasing values")]
    BadAbscissae { expected: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("singular matrix")]
    Singular,

    #[error("matrix is not a P-matrix")]
    NotPMatrix,

    #[error("q is degenerate for M: candidate solution for basis {basis:?} has a zero in coordinate {coordinate}")]
    DegenerateQ { basis: Vec<usize>, coordinate: usize },

    #[error("trials must be at least 1")]
    NoTrials,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("random facet exceeded {0} steps without reaching a sink")]
    StepLimit(u64),

    #[error("unknown family {0:?}; known families: {known}", known = crate::random_facet::Family::NAMES.join(", "))]
    UnknownFamily(String),

    #[error("parse error: {0}")]
    Parse(String),
}
