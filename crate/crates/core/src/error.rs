use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("edge index {index} out of range (edge count {count})")]
    EdgeIndexOutOfRange { index: usize, count: usize },
    #[error("edge {0} is not an edge of the region")]
    InvalidEdge(String),
    #[error("vertex ({x}, {y}) lies outside the region")]
    VertexOutsideRegion { x: usize, y: usize },
    #[error("operation not supported on this region: {0}")]
    UnsupportedRegion(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("region too large for exact enumeration: {0}")]
    RegionTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}
