use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid block (k={k}, i={i}, m={m}): k must satisfy k ≡ -(m+i) mod 3 and m ≥ 1")]
    InvalidBlock { k: i64, i: u32, m: u32 },

    #[error("expected a {expected}-frame monomial, got {got}")]
    WrongFrame { expected: &'static str, got: String },

    #[error("monomial {0} has degree 0; only differentials of positive degree can be pulled back")]
    DegreeZero(String),

    #[error("matrix dimensions {rows}x{cols} do not match {len} entries")]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("column index {index} out of range for a matrix with {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },

    #[error("coefficient table is for degree {table}, block has degree {block}")]
    CoeffDegreeMismatch { table: u32, block: u32 },

    #[error("missing Q sample for m={0}")]
    MissingSample(u32),

    #[error("Q samples mix methods {0} and {1}")]
    MixedMethods(String, String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "h0 is only known for A1 and A2; A{0} is unsupported \
         (its local quotient dimension has not been computed by this method)"
    )]
    UnsupportedSingularity(u32),

    #[error("count formula for d={d} gives a non-integer value {value}")]
    FormulaInterpretation { d: u32, value: String },

    #[error("the Labs construction count applies to A2 only, not A{0}")]
    LabsRequiresA2(u32),

    #[error("count table is missing degrees: {0:?}")]
    MissingDegrees(Vec<u32>),

    #[error("cache {path}: {reason}")]
    Cache { path: String, reason: String },

    #[error("cached Q({m}) [{method}] = {cached} disagrees with computed value {computed}")]
    CacheMismatch {
        m: u32,
        method: String,
        cached: u64,
        computed: u64,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
