use thiserror::Error;

/// Failures raised by the constructions and their certificates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root iteration did not converge after {iterations} iterations (worst residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("polynomial is not square-free (|discriminant| = {margin:e})")]
    NotSquareFree { margin: f64 },
    #[error("configuration points are not distinct (separation {separation:e})")]
    NotDistinct { separation: f64 },
    #[error("two torsion points project within tolerance ({distance:e}); choose another tau")]
    ProjectionCollision { distance: f64 },
    #[error("path meets the discriminant locus at parameter {at}")]
    PathHitsDiscriminant { at: f64 },
    #[error("tracked roots became ambiguous at parameter {at} (separation {separation:e})")]
    TrackingAmbiguity { at: f64, separation: f64 },
    #[error("endpoint matching is ambiguous: {0}")]
    AmbiguousMatching(String),
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("expected {expected} torsion points, found {found}")]
    CardinalityMismatch { expected: usize, found: usize },
    #[error("marked point is not a flex of the curve: {0}")]
    FlexNotOnCurve(String),
    #[error("curve is not smooth")]
    NotSmooth,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
