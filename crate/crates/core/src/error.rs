//! Error type shared by every module in the crate.

/// Errors produced by the toolkit. Domain errors cover invalid physical
/// inputs; non-convergence covers iterative solvers that hit their budget.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Invalid input or a physically undefined request.
    #[error("{0}")]
    Domain(String),

    /// A constant name not in the derived-constant table.
    #[error("unknown constant `{name}`; valid names are: {valid}")]
    UnknownConstant { name: String, valid: &'static str },

    /// The scattering solver exhausted its slice budget before the
    /// transmission probability stabilized. Carries the last two estimates.
    #[error(
        "scattering solve did not converge: D = {d_last:.17e} at {n_last} slices \
         vs {d_prev:.17e} at {n_prev} slices (relative change {rel_change:.3e} > {tol:.1e})"
    )]
    NonConvergence {
        d_last: f64,
        d_prev: f64,
        n_last: u64,
        n_prev: u64,
        rel_change: f64,
        tol: f64,
    },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    /// A config file could not be parsed.
    #[error("config parse error at line {line}: {message}")]
    Config { line: usize, message: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of an iterative numerical scheme (as opposed to
    /// invalid input). The CLI maps these to a distinct exit code.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::QuadratureFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
