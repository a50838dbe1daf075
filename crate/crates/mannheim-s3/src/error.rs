//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeomError>;

/// Failure modes of the geometric operations.
#[derive(Debug, Clone, Error)]
pub enum GeomError {
    /// A point that should lie on S³(r) does not, or vectors that should
    /// form an orthonormal frame do not, or the curvature vanished where a
    /// Frenet frame was required (geodesic point: the principal normal is
    /// undefined there).
    #[error("geodesic point: frame undefined (measured kappa = {kappa:.3e})")]
    FrameDegenerate { kappa: f64 },

    /// Two sphere points with different radii were combined.
    #[error("sphere radius mismatch: {0} vs {1}")]
    RadiusMismatch(f64, f64),

    /// A point is not on the sphere, or a direction is not tangent.
    #[error("invalid sphere datum: {0}")]
    InvalidSphereData(String),

    /// The curve has a stationary point (|c'| = 0) where an immersion was
    /// required.
    #[error("curve is not immersed: |c'(t)| vanishes near t = {0}")]
    NotImmersed(f64),

    /// The ODE integrator could not reach the requested accuracy.
    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    /// A Mannheim base curve must not be a plane curve (its binormal field
    /// would be constant along a totally geodesic 2-sphere).
    #[error("base curve is a plane curve (sup |tau| = {0:.3e}); Mannheim partner undefined")]
    PlaneCurveNotAllowed(f64),

    /// The angle between the tangent fields reached 0 or pi, so the pair
    /// correspondence degenerates.
    #[error("degenerate tangent angle (sin theta = {0:.3e})")]
    DegenerateAngle(f64),

    /// lambda = tan(a) has a pole at a = pi/2.
    #[error("a = pi/2: tan(a) undefined, lambda cannot be extracted")]
    TangentPole,

    /// The requested curvature profile leaves the admissible region
    /// (kappa must stay positive).
    #[error("profile not admissible: {0}")]
    NotAdmissible(String),

    /// The binormal-integral pipeline requires lambda and tau_alpha to
    /// share a sign (so s'(t) > 0).
    #[error("sign mismatch: lambda * tau_alpha = {0:.3e} <= 0 on the traversed range")]
    SignMismatch(f64),

    /// An operation received an empty grid or sample set.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A profile or expression was evaluated outside its domain (pole,
    /// division by zero, negative sqrt argument, ...).
    #[error("domain error: {0}")]
    DomainError(String),
}
