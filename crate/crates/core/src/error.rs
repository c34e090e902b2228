use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unsupported variety: {0}")]
    UnsupportedVariety(String),

    #[error("not an instanton-shape character: {0}")]
    InvalidShape(String),

    #[error("operation requires index {expected}, variety has index {found}")]
    WrongIndex { expected: u32, found: u32 },

    #[error("invalid multiplicity: {0}")]
    Multiplicity(String),

    #[error("parameters outside region: {0}")]
    OutsideRegion(String),

    #[error("cohomology window does not contain twist {0}")]
    InsufficientWindow(i64),

    #[error("unsupported complex: {0}")]
    UnsupportedComplex(String),

    #[error("ADHM equation [A,B]+IJ=0 fails")]
    AdhmEquation,

    #[error("quiver relations fail: {0}")]
    Relation(String),

    #[error("restriction to the line is not fiberwise exact: {0}")]
    NotFiberwiseExact(String),

    #[error("degenerate dimension vector: {0}")]
    DegenerateDims(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
