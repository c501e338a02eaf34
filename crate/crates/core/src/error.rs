use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex label must be nonempty")]
    EmptyLabel,
    #[error("vertex label {0:?} contains a reserved character ('[', ']' or ',')")]
    ReservedLabel(String),
    #[error("simplex must have at least one vertex")]
    EmptySimplex,
    #[error("duplicate vertex {0:?} inside a simplex")]
    DuplicateVertex(String),
    #[error("simplex {0} is not in the complex")]
    NotInComplex(String),
    #[error("not a subcomplex: {0} is missing from the ambient complex")]
    NotSubcomplex(String),
    #[error("subcomplex is not full: {0} has all vertices in the subcomplex")]
    NotFull(String),
    #[error("vertex {0:?} is already used")]
    VertexExists(String),
    #[error("{what}: unsupported dimension {found}")]
    Dimension { what: &'static str, found: isize },
    #[error("complex is disconnected")]
    Disconnected,
    #[error("complex has no boundary")]
    AlreadyClosed,
    #[error("general position violated: {0}")]
    GeneralPosition(String),
    #[error("retry budget of {attempts} attempts exhausted: {what}")]
    BudgetExhausted { attempts: usize, what: String },
    #[error("simplex budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn verify(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
}
