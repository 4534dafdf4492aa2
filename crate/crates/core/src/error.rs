use thiserror::Error;

/// Errors raised by the geometry, sampling and experiment layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("intersection has empty interior")]
    EmptyResult,
    #[error("origin is not an interior point of the polytope")]
    OriginNotInterior,
    #[error("neither containment could be certified")]
    ContainmentNotCertified,
    #[error("curvature is unavailable for this body")]
    CurvatureUnavailable,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("linear map is not volume preserving (det = {0})")]
    NotVolumePreserving(f64),
    #[error("delta {delta} outside the admissible range (0, {max})")]
    DeltaOutOfRange { delta: f64, max: f64 },
    #[error("cut-volume bisection stalled in direction {direction}")]
    CutVolumeUnresolved { direction: usize },
    #[error("floating body algorithm did not terminate after {0} steps")]
    NonTermination(usize),
    #[error("no strict vertex separator found for vertex {0}")]
    SeparationFailure(usize),
    #[error("rejection sampler acceptance rate {0:.2e} below threshold")]
    RejectionStall(f64),
    #[error("density kind {kind} unsupported for body {body}")]
    KindUnsupported { kind: String, body: String },
    #[error("candidate pool exhausted")]
    PoolExhausted,
    #[error("density does not integrate to one (integral = {0})")]
    NormalizationFailure(f64),
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("insufficient range for rate fit: {0}")]
    InsufficientRange(String),
    #[error("rolling condition unavailable for this body")]
    RollingConditionUnavailable,
    #[error("polytope is not simple")]
    NotSimple,
    #[error("projection onto polytope failed: {0}")]
    ProjectionFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Self::DegenerateInput(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidInput(msg.into())
    }

    /// True for errors that signal a configuration problem rather than a
    /// numerical failure.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Self::InvalidInput(_)
                | Self::UnknownConstant(_)
                | Self::OutOfRange(_)
                | Self::DeltaOutOfRange { .. }
                | Self::KindUnsupported { .. }
                | Self::InsufficientRange(_)
                | Self::RollingConditionUnavailable
                | Self::NotSimple
        )
    }
}
