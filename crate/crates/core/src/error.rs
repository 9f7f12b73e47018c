use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate system: b = 0 has no delayed term")]
    DegenerateSystem,

    #[error("stale root w = {w}: C^2 + S^2 - 1 = {residual:e}")]
    StaleRoot { w: f64, residual: f64 },

    #[error("window preconditions violated: {0}")]
    InconsistentWindow(String),

    #[error("{curve} is absent at c = {c}")]
    CurveAbsent { curve: String, c: f64 },

    #[error("{what} not found: {detail}")]
    NotFound { what: String, detail: String },

    #[error("contour evaluation failed: {0}")]
    ContourFailure(String),

    #[error("root tracking lost at tau = {tau}")]
    TrackingLost { tau: f64 },

    #[error("invalid integration setup: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
