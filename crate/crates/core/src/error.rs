use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A sign, floor or comparison could not be decided at the current
    /// working precision. Retryable at higher precision.
    #[error("undecided at {prec} bits: {what}")]
    Undecided { what: String, prec: u32 },

    #[error("precision exhausted at {prec} bits: {what}")]
    PrecisionExhausted { what: String, prec: u32 },

    #[error("lemma hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("reduction failed for {label}: {reason}")]
    ReductionFailed { label: String, reason: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn undecided(what: impl Into<String>, prec: u32) -> Self {
        Error::Undecided {
            what: what.into(),
            prec,
        }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Strips stage attribution.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    /// Process exit code for the CLI: 2 invalid parameters, 3 precision
    /// exhaustion, 4 reduction failure.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Param(_) | Error::Domain(_) | Error::Hypothesis(_) => 2,
            Error::Undecided { .. } | Error::PrecisionExhausted { .. } => 3,
            Error::ReductionFailed { .. } => 4,
            Error::Stage { .. } => unreachable!(),
        }
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self.root(), Error::Undecided { .. })
    }
}
