//! Error type shared by every module in the crate.

/// Errors surfaced by channel construction, special-function evaluation,
/// and the optimizers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error in {context}: {message}")]
    Domain {
        context: &'static str,
        message: String,
    },

    /// A truncated series failed to meet its tolerance within the term cap.
    /// Carries the partial sum and the magnitude of the last term so the
    /// caller can judge how bad the truncation is.
    #[error(
        "series for {context} did not converge within {max_terms} terms \
         (partial sum {partial_sum}, last term magnitude {last_term})"
    )]
    Convergence {
        context: &'static str,
        max_terms: usize,
        partial_sum: f64,
        last_term: f64,
    },

    /// An optimization run could not produce a feasible starting point.
    #[error("feasibility restoration failed: {0}")]
    Infeasible(String),

    /// The inner convex solver failed; includes the outer-iteration context.
    #[error("convex solver failed at outer iteration {outer_iteration}: {message}")]
    Solver {
        outer_iteration: usize,
        message: String,
    },

    /// A configuration value violates an invariant.
    #[error("invalid parameter {field}: {message}")]
    InvalidParameter {
        field: &'static str,
        message: String,
    },
}

impl Error {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            context,
            message: message.into(),
        }
    }

    pub fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
