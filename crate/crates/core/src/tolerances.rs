//! Numerical thresholds shared by the library, the solver and the tests.

/// Unit-norm tolerance for states.
pub const NORM: f64 = 1e-12;

/// Maximum deviation of a basis Gram matrix from the identity.
pub const ORTHONORMALITY: f64 = 1e-10;

/// Allowed deviation of a probability vector's sum from 1.
pub const PROBABILITY_SUM: f64 = 1e-10;

/// Moduli at or below this are treated as zero: when picking the component
/// that fixes the ray phase, and when an overlap has no defined phase.
pub const ZERO_AMPLITUDE: f64 = 1e-9;

/// Slack for the distributional <= Bures bound.
pub const BOUND_SLACK: f64 = 1e-10;

/// The same values bundled, for callers that want to pass them around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub norm: f64,
    pub orthonormality: f64,
    pub probability_sum: f64,
    pub zero_amplitude: f64,
    pub bound_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: NORM,
            orthonormality: ORTHONORMALITY,
            probability_sum: PROBABILITY_SUM,
            zero_amplitude: ZERO_AMPLITUDE,
            bound_slack: BOUND_SLACK,
        }
    }
}
