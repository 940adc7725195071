use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("registry mismatch: {0}")]
    RegistryMismatch(String),

    #[error("unknown mode `{0}`")]
    UnknownMode(String),

    #[error("duplicate mode `{0}`")]
    DuplicateMode(String),

    #[error("invalid mode label `{0}`")]
    InvalidLabel(String),

    #[error("overlapping modes: {0}")]
    OverlappingModes(String),

    #[error("state has zero norm; the conditioning event is impossible")]
    ZeroState,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("visibility {value} is outside the attainable model range [{lo}, {hi}]")]
    OutOfModelRange { value: f64, lo: f64, hi: f64 },

    #[error("herald never fires: {0}")]
    ZeroProbability(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by bad user input rather than by the simulation itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidLabel(_)
                | Error::UnknownMode(_)
                | Error::DuplicateMode(_)
                | Error::OverlappingModes(_)
                | Error::InvalidParameter(_)
                | Error::Parse(_)
                | Error::Json(_)
                | Error::DimensionMismatch { .. }
                | Error::NotUnitary(_)
                | Error::RegistryMismatch(_)
                | Error::OutOfModelRange { .. }
        )
    }
}
