use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed graph6 string: {0}")]
    MalformedGraph6(String),

    #[error("unsupported graph order {0}")]
    UnsupportedOrder(usize),

    #[error("unknown graph name `{0}`")]
    UnknownName(String),

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("no quadratic-integer form fits the support: {0}")]
    RecognitionFailure(String),

    #[error("support admits two distinct quadratic-integer forms ({0}); tolerance too loose")]
    AmbiguousFit(String),

    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("graph is disconnected (eigenvalue 0 has multiplicity {0})")]
    Disconnected(usize),

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }
}
