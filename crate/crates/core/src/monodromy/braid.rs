use std::f64::consts::PI;

use super::path::{CoefficientPath, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::poly_core::{from_roots, Complex, Configuration, TolerancePolicy};

/// Number of configuration samples along a half-twist.
pub const BRAID_WAYPOINTS: usize = 32;

/// The loop in `Poly_n` of the standard generator `sigma_i` (1-based): points
/// `i-1` and `i` of the real increasing basepoint trade places along the two
/// halves of the circle on which they are antipodal, all other points stay
/// put. The final waypoint is the basepoint polynomial itself, bit for bit,
/// because the Viete map sorts its input.
pub fn elementary_braid_loop(
    n: usize,
    i: usize,
    basepoint: &Configuration,
    tol: &TolerancePolicy,
) -> Result<CoefficientPath> {
    if basepoint.len() != n || n < 2 {
        return Err(Error::InvalidInput(format!(
            "basepoint must have n = {n} >= 2 points, has {}",
            basepoint.len()
        )));
    }
    if i == 0 || i >= n {
        return Err(Error::InvalidInput(format!(
            "generator index {i} outside 1..{n}"
        )));
    }
    let pts = basepoint.points();
    if pts.iter().any(|z| z.im != 0.0) || pts.windows(2).any(|w| w[0].re >= w[1].re) {
        return Err(Error::InvalidInput(
            "basepoint must be real and strictly increasing".into(),
        ));
    }
    let (left, right) = (pts[i - 1], pts[i]);
    let center = (left + right) / 2.0;
    let radius = (right - left) / 2.0;
    let waypoints = (0..=BRAID_WAYPOINTS)
        .map(|k| {
            let mut q = pts.to_vec();
            if k == BRAID_WAYPOINTS {
                q.swap(i - 1, i);
            } else if k > 0 {
                let turn = Complex::from_polar(1.0, PI * k as f64 / BRAID_WAYPOINTS as f64);
                q[i - 1] = center - radius * turn;
                q[i] = center + radius * turn;
            }
            Ok(from_roots(&Configuration::unordered(q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    CoefficientPath::new(waypoints, DEFAULT_SAMPLES, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::{loop_permutation, Permutation};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn two_strand_generator() {
        let base = Configuration::from_real(&[-1.0, 1.0], false).unwrap();
        let path = elementary_braid_loop(2, 1, &base, &tol()).unwrap();
        assert!(path.is_closed());
        let m = loop_permutation(&path, &tol()).unwrap();
        assert_eq!(m.permutation, Permutation::transposition(2, 0, 1).unwrap());
    }

    #[test]
    fn four_strand_generators_and_full_twist() {
        let base = Configuration::from_real(&[0.0, 1.0, 2.0, 3.0], false).unwrap();
        for i in 1..4 {
            let path = elementary_braid_loop(4, i, &base, &tol()).unwrap();
            let m = loop_permutation(&path, &tol()).unwrap();
            assert_eq!(
                m.permutation,
                Permutation::transposition(4, i - 1, i).unwrap()
            );
            let full = loop_permutation(&path.concat(&path).unwrap(), &tol()).unwrap();
            assert!(full.permutation.is_identity());
        }
    }

    #[test]
    fn invalid_generators_are_rejected() {
        let base = Configuration::from_real(&[0.0, 1.0, 2.0], false).unwrap();
        assert!(elementary_braid_loop(3, 0, &base, &tol()).is_err());
        assert!(elementary_braid_loop(3, 3, &base, &tol()).is_err());
        let unsorted = Configuration::from_real(&[0.0, 2.0, 1.0], true).unwrap();
        assert!(elementary_braid_loop(3, 1, &unsorted, &tol()).is_err());
    }
}
