use thiserror::Error;

/// Errors produced by the quadrature, geometry, root and estimate routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite integrand value at node (k={k}, l={l}) with t={t}, phi={phi}")]
    NonFiniteIntegrand {
        k: usize,
        l: usize,
        t: f64,
        phi: f64,
    },

    #[error("evaluation point coincides with quadrature node {index} (distance {distance:e})")]
    SingularEvaluation { index: usize, distance: f64 },

    #[error("no root of the squared distance exists: {0}")]
    NoRootExists(&'static str),

    #[error("Newton iteration failed to converge (best |R^2| = {best_residual:e})")]
    NonConvergence { best_residual: f64 },

    #[error("geometry factor is infinite (derivative of R^2 vanishes)")]
    InfiniteGeometryFactor,

    #[error("linearized root model is degenerate")]
    DegenerateModel,

    #[error("root lies on the integration interval")]
    SingularEstimate,
}

pub type Result<T> = std::result::Result<T, Error>;
