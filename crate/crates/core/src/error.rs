use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or input field failed validation.
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    /// The k-dependent dispersion is undefined at zero spin coupling.
    #[error("spin coupling is zero: use J=0 closed form")]
    ZeroCoupling,

    #[error("quadrature did not converge with {nodes} intervals (residual {residual:e})")]
    QuadratureNotConverged { nodes: usize, residual: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("boson cutoff {cutoff} unconverged: relative change {relative_change:e} at cutoff {check_cutoff}")]
    CutoffUnconverged {
        cutoff: usize,
        check_cutoff: usize,
        relative_change: f64,
    },

    #[error("memory budget exceeded: need {required} bytes, budget {budget} bytes")]
    MemoryBudget { required: u64, budget: u64 },

    #[error("sweep step {index} failed: {source}")]
    SweepStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than a numerical failure.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Invalid { .. } | Error::ZeroCoupling | Error::MemoryBudget { .. } => true,
            Error::SweepStep { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}
