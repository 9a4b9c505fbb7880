//! Constructive maps between spaces of square-free polynomials and plane
//! cubic curves, with numerical certificates for their properties.
//!
//! * [`poly_core`]: polynomials, configurations, roots, resultants.
//! * [`poly_maps`]: the quartic resolvent and its twists, the disjoining map
//!   and the torsion maps `Poly_3 -> Poly_(k^2-1)`.
//! * [`monodromy`]: root tracking along loops and permutation monodromy.
//! * [`plane_curves`]: ternary forms, flexes, elliptic group law, torsion,
//!   multisection sizes.
//! * [`cert`] and [`suite`]: JSON certificates and the seeded property suite.

pub mod cert;
pub mod error;
pub mod monodromy;
pub mod par;
pub mod plane_curves;
pub mod poly_core;
pub mod poly_maps;
pub mod suite;

pub use error::{Error, Result};
pub use poly_core::{Complex, Configuration, MonicPolynomial, Polynomial, TolerancePolicy};
