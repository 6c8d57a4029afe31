use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop edge at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("{family} graph needs n >= {min}, got {n}")]
    TooFewVertices {
        family: &'static str,
        n: usize,
        min: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValueError {
    #[error("function has {got} values but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value {value} at vertex {vertex}")]
    NonFinite { vertex: usize, value: f64 },
    #[error("alpha must lie in [0, 1], got {0}")]
    Alpha(f64),
    #[error("exponent must be positive (or infinite), got {0}")]
    Exponent(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatioError {
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("denominator vanishes: the variation of f is zero")]
    ZeroVariation,
    #[error("denominator vanishes: f is the zero function")]
    ZeroNorm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MajorizationError {
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("input is not sorted in nonincreasing order at index {0}")]
    UnsortedInput(usize),
    #[error("entry {0} lies outside the domain of the convex function")]
    OutsideDomain(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstantError {
    #[error("n must be at least {min}, got {n}")]
    TooFewVertices { n: usize, min: usize },
    #[error("level-set size k = {k} outside [1, {max}]")]
    LevelSize { k: usize, max: usize },
    #[error("exponent p = {0} outside the admissible range")]
    Exponent(f64),
    #[error("alpha = {0} outside [0, 1)")]
    Alpha(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(&'static str),
    #[error("graph has no edges; the variation ratio is undefined")]
    NoEdges,
    #[error("could not draw a non-degenerate starting point after {0} attempts")]
    Degenerate(usize),
    #[error("two-level scan requires a complete or star graph")]
    NotAFamilyGraph,
    #[error(transparent)]
    Ratio(#[from] RatioError),
}
