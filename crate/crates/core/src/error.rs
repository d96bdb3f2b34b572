use thiserror::Error;

use crate::complex::Cell;
use crate::cubes::PartialExploration;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cell {vertices:?}: {reason}")]
    InvalidCell { vertices: Vec<u32>, reason: &'static str },

    #[error("facet {facet} has {found} vertices, expected {expected}")]
    FacetSize { facet: Cell, expected: usize, found: usize },

    #[error("complex has no facets")]
    EmptyComplex,

    #[error("ridge {ridge} lies in {degree} facets, expected 2")]
    RidgeDegreeViolation { ridge: Cell, degree: usize },

    #[error("facet adjacency graph has {components} components")]
    NotStronglyConnected { components: usize },

    #[error("orientation propagation contradicts itself across ridge {ridge}")]
    NonOrientable { ridge: Cell },

    #[error("orientation is incoherent across ridge {ridge}")]
    IncoherentOrientation { ridge: Cell },

    #[error("orientation has {found} entries for {expected} facets")]
    OrientationLength { expected: usize, found: usize },

    #[error("{0} is not a face of the complex")]
    FaceNotPresent(Cell),

    #[error("{0} is top-dimensional; its link is empty")]
    TopDimensionalFace(Cell),

    #[error("{lower} is not contained in {upper}")]
    NotNested { lower: Cell, upper: Cell },

    #[error("vertex {vertex}: {reason}")]
    NotProperColoring { vertex: u32, reason: String },

    #[error("facet {facet} carries colors {colors:?}, expected {expected} distinct colors")]
    WrongColorCount { facet: Cell, colors: Vec<u32>, expected: usize },

    #[error("label {label} out of range (labels must be < 64)")]
    LabelOutOfRange { label: u32 },

    #[error("ridge {ridge} has no label")]
    MissingLabel { ridge: Cell },

    #[error("{cell} is not a ridge")]
    NotARidge { cell: Cell },

    #[error("no face between {lower} and {upper} has label set {labels:?}")]
    NoSuchFace { lower: Cell, upper: Cell, labels: Vec<u32> },

    #[error("{count} faces between {lower} and {upper} have label set {labels:?}")]
    NotUnique { lower: Cell, upper: Cell, labels: Vec<u32>, count: usize },

    #[error("labeling is not good: {0}")]
    NotGood(String),

    #[error("star of {center} is not bipartite")]
    NotBipartite { center: Cell },

    #[error("star of {center} has {black} black and {white} white facets")]
    UnbalancedColors { center: Cell, black: usize, white: usize },

    #[error("no unique diamond partner for position {position} of flag {flag:?}")]
    DiamondViolation { flag: Vec<Cell>, position: usize },

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("generator index j = {j} outside 1..={n}")]
    GeneratorOutOfRange { j: usize, n: usize },

    #[error("updated pairing at {center} is not a fixed-point-free colour-reversing involution")]
    PairingBroken { center: Cell },

    #[error("state cap of {} exceeded after exploring {} states", .0.cap, .0.states.len())]
    CapExceeded(Box<PartialExploration>),

    #[error("cube complex is not orientable (conflict at cube {cube})")]
    NonOrientableQuotient { cube: usize },

    #[error("signed sheet count differs between flags: {0}")]
    InconsistentDegree(String),

    #[error("link census does not match the prescription: {0}")]
    PatternMismatch(String),

    #[error("not a sphere: {0}")]
    NotASphere(String),

    #[error("sphere list is not balanced: {0}")]
    NotBalanced(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("schema error at {field} (line {line}, column {column}): {message}")]
    Schema { field: String, line: usize, column: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { field: field.into(), line: 0, column: 0, message: message.into() }
    }
}
