use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),

    #[error("vertex {0} out of range")]
    UnknownVertex(usize),

    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),

    #[error("invalid path decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("path decomposition is not connected (first failing prefix {0})")]
    NotConnected(usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("border is empty, no branch exists")]
    EmptyBorder,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("move {index}: {msg}")]
    IllFormedMove { index: usize, msg: String },

    #[error("strategy is not usable: {0}")]
    Strategy(String),

    #[error("oracle refused: {0}")]
    Oracle(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
