use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("enumeration exceeded cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("search budget exhausted")]
    BudgetExceeded,
    #[error("invalid reduction vertex set: {0}")]
    InvalidReductionSpec(String),
    #[error("not a maximal forest: {0}")]
    NotMaximalForest(String),
    #[error("edge {0} is not a cotree edge of the forest")]
    NotCotreeEdge(usize),
    #[error("vertex set must be a proper nonempty subset")]
    EmptyOrFullSet,
    #[error("unknown property tag {0:?}")]
    UnknownTag(String),
    #[error("graphs have different loop counts ({0} vs {1})")]
    LoopCountMismatch(usize, usize),
    #[error("graph is not planar")]
    NonplanarInput,
    #[error("row sums of C*A*A^T*C^T are not zero")]
    RowSumNonzero,
    #[error("trace {trace} exceeds twice the nonzero column count {bound}; first bad column {column:?}")]
    TraceTooLarge { trace: String, bound: usize, column: Option<usize> },
    #[error("malformed input: {0}")]
    Parse(String),
}
