use crate::graph::VarId;
use crate::oracle::Stage;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown variable {0} (graph has {1} variables)")]
    UnknownVariable(VarId, usize),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("variable {0} is not observed")]
    NotObserved(VarId),

    #[error("graph is not a DAG: {0}")]
    NotAcyclic(String),

    #[error("graph is not ancestral: {0}")]
    NotAncestral(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// Marks derived by two rules disagree. Impossible under a faithful oracle.
    #[error("model violation: {0}")]
    ModelViolation(String),

    /// A broken internal invariant; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("canonical example `{name}` rejected: {fact}")]
    Configuration { name: String, fact: String },

    #[error("brute force over {n} variables exceeds the cap of {cap}")]
    BruteForceCap { n: usize, cap: usize },

    #[error("stage {stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn in_stage(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Whether the error stems from bad user input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::UnknownVariable(..)
            | Error::InvalidQuery(_)
            | Error::NotObserved(_)
            | Error::NotAcyclic(_)
            | Error::NotAncestral(_)
            | Error::InvalidGraph(_)
            | Error::Input(_)
            | Error::BruteForceCap { .. }
            | Error::Json(_)
            | Error::Csv(_)
            | Error::Io(_) => true,
            Error::Stage { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
