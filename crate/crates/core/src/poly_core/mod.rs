//! Complex univariate polynomials, configurations of points in the plane and
//! the numerical primitives (roots, resultants, discriminants) everything else
//! is built from.
//!
//! A point of `Poly_n` is stored as its coefficient vector `[a1, ..., an]` of
//! `z^n + a1 z^(n-1) + ... + an`; the root map identifies it with an unordered
//! configuration of `n` points.

mod configuration;
mod polynomial;
mod resultant;
mod roots;

use serde::{Deserialize, Serialize};

pub use configuration::Configuration;
pub use polynomial::{MonicPolynomial, Polynomial};
pub use resultant::{
    determinant, discriminant, is_square_free, resultant, sylvester_determinant, SquareFreeCheck,
};
pub use roots::{from_roots, polish_root, roots};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

pub(crate) fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn check_finite(values: &[Complex]) -> Result<()> {
    match values.iter().position(|z| !finite(*z)) {
        Some(i) => Err(Error::InvalidInput(format!(
            "non-finite value at index {i}"
        ))),
        None => Ok(()),
    }
}

/// Numerical thresholds shared by every construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Relative convergence threshold for root iterations.
    pub root_tol: f64,
    /// Relative separation below which two points are considered equal,
    /// scaled by the diameter of the configuration.
    pub distinct_tol: f64,
    pub max_iterations: usize,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            root_tol: 1e-12,
            distinct_tol: 1e-9,
            max_iterations: 500,
        }
    }
}

impl TolerancePolicy {
    pub fn new(root_tol: f64, distinct_tol: f64, max_iterations: usize) -> Result<Self> {
        let tol = Self {
            root_tol,
            distinct_tol,
            max_iterations,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.root_tol) || !positive(self.distinct_tol) || self.max_iterations == 0 {
            return Err(Error::InvalidInput(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.root_tol >= self.distinct_tol {
            return Err(Error::InvalidInput(format!(
                "root_tol ({:e}) must be below distinct_tol ({:e})",
                self.root_tol, self.distinct_tol
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_policy_is_valid() {
        TolerancePolicy::default().validate().unwrap();
    }

    #[test]
    fn policy_rejects_inverted_tolerances() {
        assert!(TolerancePolicy::new(1e-6, 1e-9, 10).is_err());
        assert!(TolerancePolicy::new(0.0, 1e-9, 10).is_err());
        assert!(TolerancePolicy::new(1e-12, 1e-9, 0).is_err());
        assert!(TolerancePolicy::new(1e-12, f64::NAN, 10).is_err());
    }
}
