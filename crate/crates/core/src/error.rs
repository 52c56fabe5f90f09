use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("label index {0} is out of range")]
    LabelOutOfRange(usize),
    #[error("self-loop at vertex {0} but the graph does not allow loops")]
    LoopNotAllowed(usize),
    #[error("graph already carries self-loops")]
    AlreadyLooped,
    #[error("no edge {0}-{1}")]
    MissingEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("size {size} exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { size, cap })
    } else {
        Ok(())
    }
}
