use thiserror::Error;

/// Errors produced by curve construction, family admissibility checks, and
/// the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// The derivative coefficient vector vanished at a point where it is needed.
    #[error("degenerate point at t = {t}: |w(t)| = {value:.3e} (floor {floor:.3e})")]
    DegeneratePoint { t: f64, value: f64, floor: f64 },

    /// The family fails the admissibility scan on the whole curve.
    #[error(
        "family is degenerate on this curve: min |w(t)| = {min:.3e} at t = {argmin:.6} \
         (threshold {threshold:.3e})"
    )]
    DegenerateFamily { min: f64, argmin: f64, threshold: f64 },

    #[error("origin lies on the curve: min |x(t)| = {min:.3e} at t = {argmin:.6}")]
    OriginOnCurve { min: f64, argmin: f64 },

    #[error("curve is not an immersion: min |x'(t)| = {min:.3e} at t = {argmin:.6}")]
    NotImmersed { min: f64, argmin: f64 },

    #[error("this family is defined only on the standard unit circle")]
    NotUnitCircle,

    #[error("gram matrix is not symmetric positive definite: {0}")]
    GramNotSpd(String),

    #[error(
        "quadrature did not converge: {points} points, last relative change {last_change:.3e}, \
         qtol {qtol:.3e}"
    )]
    QuadratureDiverged {
        points: usize,
        last_change: f64,
        qtol: f64,
    },

    #[error(
        "suspicious Monte Carlo configuration: discard rate {rate_percent:.3}% exceeds 1% \
         (scan grid too coarse or family nearly degenerate)"
    )]
    ExcessiveDiscards { rate_percent: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for spec/input errors, 2 for mathematical
    /// precondition failures, 3 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::QuadratureDiverged { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
