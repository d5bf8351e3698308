use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value exceeds representable range: {0}")]
    Overflow(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("integrand too singular at configured tolerance: {0}")]
    Quadrature(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("no n0 in 0..={max} matches the finiteness pattern{detail}")]
    HypothesisMismatch { max: u32, detail: String },
    #[error("no lambda found at configured radii: {0}")]
    NoLambda(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
