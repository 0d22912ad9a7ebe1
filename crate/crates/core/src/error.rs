use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graph at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("degenerate vertex star (no tangents)")]
    DegenerateStar,
    #[error("direction ({0:.6}, {1:.6}, {2:.6}) is degenerate for this graph")]
    DegenerateDirection(f64, f64, f64),
    #[error("too many degenerate directions: {rejected} rejected for {samples} samples")]
    TooManyRejections { rejected: u64, samples: u64 },
    #[error("vertex `{vertex}` has valence {valence}, above the enumeration cap {cap}")]
    ValenceTooLarge {
        vertex: String,
        valence: usize,
        cap: usize,
    },
    #[error("incomplete pairing: {0}")]
    IncompletePairing(String),
    #[error("point `{0}` cannot be straightened")]
    NotRemovable(String),
    #[error("graph is not a theta graph")]
    NotTheta,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input documents rather than by a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Validation { .. }
                | Error::UnknownVertex(_)
                | Error::UnknownEdge(_)
                | Error::UnknownPoint(_)
                | Error::BadParameter(_)
                | Error::NotTheta
                | Error::Io(_)
        )
    }
}
