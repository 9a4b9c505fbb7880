//! Plane curves in P^2: Hessians, flexes, the elliptic group law with a flex
//! as origin, torsion points and the admissible sizes of torsion
//! multisections.

mod arithmetic;
mod cubic;
mod flex;
mod intersect;
mod ternary;
mod weierstrass;

pub use arithmetic::{admissible_sizes, banerjee_chen_sizes, jordan_totient, MultisectionSize};
pub use cubic::{cubic_torsion, torsion_stratum, WeierstrassModel};
pub use flex::{flex_points, is_smooth, smoothness_margin, Flex};
pub use ternary::{hausdorff, hessian, relative_residual, Exponent, ProjectivePoint, TernaryForm};
pub use weierstrass::{division_polynomial, torsion_points, CurvePoint, WeierstrassCurve};
