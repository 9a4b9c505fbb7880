//! Predictor-corrector continuation of the roots of `P_t` along a
//! coefficient path.

use serde::{Deserialize, Serialize};

use super::path::CoefficientPath;
use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::poly_core::{roots, Complex, Configuration, MonicPolynomial, TolerancePolicy};

/// Smallest step, relative to the nominal one, before tracking gives up.
const MIN_STEP_FACTOR: f64 = 1.0 / (1u64 << 40) as f64;
const NEWTON_STEPS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    pub permutation: Permutation,
    /// Minimum root separation seen at any accepted sample.
    pub min_separation_along_path: f64,
    /// Largest accepted root displacement as a fraction of half the current
    /// separation (at most 1 by construction).
    pub max_step_contraction: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TrackStats {
    pub min_separation: f64,
    pub max_step_contraction: f64,
}

fn min_pairwise(pts: &[Complex]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.min((p - q).norm());
        }
    }
    best
}

fn diameter(pts: &[Complex]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max((p - q).norm());
        }
    }
    if best == 0.0 {
        1.0
    } else {
        best
    }
}

/// Value of `sum_k d_k z^(n-k)` for the coefficient difference `d`.
fn eval_tail(d: &[Complex], z: Complex) -> Complex {
    d.iter().fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Newton's method on `q` from `z`; returns the point and whether the
/// residual reached the accepted root bound.
fn correct(q: &MonicPolynomial, mut z: Complex, tol: &TolerancePolicy) -> (Complex, bool) {
    for _ in 0..NEWTON_STEPS {
        let (v, dv) = q.eval_with_derivative(z);
        let bound = tol.root_tol
            * (1.0 + z.norm())
                .powi(q.degree() as i32)
                .max(q.abs_eval(z.norm()));
        if v.norm() <= bound {
            return (z, true);
        }
        if dv.norm() == 0.0 {
            return (z, false);
        }
        z -= v / dv;
    }
    let v = q.evaluate(z);
    let bound = tol.root_tol
        * (1.0 + z.norm())
            .powi(q.degree() as i32)
            .max(q.abs_eval(z.norm()));
    (z, v.norm() <= bound)
}

pub(crate) fn track(
    path: &CoefficientPath,
    start: Vec<Complex>,
    tol: &TolerancePolicy,
) -> Result<(Vec<Complex>, TrackStats)> {
    let mut r = start;
    let mut stats = TrackStats {
        min_separation: min_pairwise(&r),
        max_step_contraction: 0.0,
    };
    let base = 1.0 / path.samples_per_segment() as f64;
    for (j, pair) in path.waypoints().windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if a == b {
            continue;
        }
        let delta: Vec<Complex> = a
            .coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| y - x)
            .collect();
        let mut s = 0.0;
        let mut h = base;
        while s < 1.0 {
            let s1 = if s + h >= 1.0 { 1.0 } else { s + h };
            let cur = a.lerp(b, s);
            let next = if s1 == 1.0 { b.clone() } else { a.lerp(b, s1) };
            let sep = min_pairwise(&r);
            let mut converged = true;
            let mut moved: f64 = 0.0;
            let mut cand = Vec::with_capacity(r.len());
            for &z in &r {
                let (_, dv) = cur.eval_with_derivative(z);
                let slope = if dv.norm() == 0.0 {
                    Complex::new(0.0, 0.0)
                } else {
                    -eval_tail(&delta, z) / dv
                };
                let (w, ok) = correct(&next, z + slope * (s1 - s), tol);
                converged &= ok;
                moved = moved.max((w - z).norm());
                cand.push(w);
            }
            if converged && moved <= 0.5 * sep {
                let new_sep = min_pairwise(&cand);
                if new_sep <= tol.distinct_tol * diameter(&cand) {
                    return Err(Error::PathHitsDiscriminant { at: j as f64 + s1 });
                }
                if sep.is_finite() && sep > 0.0 {
                    stats.max_step_contraction =
                        stats.max_step_contraction.max(moved / (0.5 * sep));
                }
                stats.min_separation = stats.min_separation.min(new_sep);
                r = cand;
                s = s1;
                h = (2.0 * h).min(base);
            } else {
                h *= 0.5;
                if h < base * MIN_STEP_FACTOR {
                    return Err(Error::TrackingAmbiguity {
                        at: j as f64 + s,
                        separation: sep,
                    });
                }
            }
        }
    }
    Ok((r, stats))
}

/// Checks that `start` is, to tolerance, the full root set of `p`.
fn verify_start(p: &MonicPolynomial, start: &Configuration, tol: &TolerancePolicy) -> Result<()> {
    if start.len() != p.degree() {
        return Err(Error::InvalidInput(format!(
            "start has {} points for a degree-{} path",
            start.len(),
            p.degree()
        )));
    }
    start.require_distinct(tol)?;
    let diam = start.diameter();
    for &z in start.points() {
        let (v, dv) = p.eval_with_derivative(z);
        let newton = if dv.norm() == 0.0 {
            f64::INFINITY
        } else {
            (v / dv).norm()
        };
        if newton > tol.distinct_tol * diam.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "start point {z} is not a root of the first waypoint (Newton step {newton:e})"
            )));
        }
    }
    Ok(())
}

/// Continues the roots `start` of the first waypoint along `path` and
/// returns the end configuration, ordered so that entry `i` is the
/// continuation of `start[i]`.
pub fn track_path(
    path: &CoefficientPath,
    start: &Configuration,
    tol: &TolerancePolicy,
) -> Result<Configuration> {
    verify_start(&path.waypoints()[0], start, tol)?;
    let (end, _) = track(path, start.points().to_vec(), tol)?;
    Configuration::ordered(end)
}

/// Index of the nearest point of `targets` to `z`, provided the second
/// nearest is at least twice as far.
fn nearest_unambiguous(
    z: Complex,
    targets: &[Complex],
    tol: &TolerancePolicy,
    diam: f64,
) -> Result<usize> {
    let mut d: Vec<(f64, usize)> = targets.iter().map(|t| (z - t).norm()).zip(0..).collect();
    d.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (d1, j) = d[0];
    if let Some(&(d2, _)) = d.get(1) {
        if d2 < 2.0 * d1 || d2 - d1 < tol.distinct_tol * diam {
            return Err(Error::AmbiguousMatching(format!(
                "end root {z} is {d1:e} from its nearest start root and {d2:e} from the next"
            )));
        }
    }
    Ok(j)
}

/// Permutation monodromy of a closed path: root `i` of the canonical
/// starting configuration ends at root `permutation[i]`.
pub fn loop_permutation(path: &CoefficientPath, tol: &TolerancePolicy) -> Result<MonodromyResult> {
    if !path.is_closed() {
        return Err(Error::InvalidInput(
            "loop must end at its starting waypoint".into(),
        ));
    }
    let p0 = &path.waypoints()[0];
    let start = roots(p0, tol)?;
    start.require_distinct(tol)?;
    let start = start.canonical_points();
    let (end, stats) = track(path, start.clone(), tol)?;
    let diam = diameter(&start);
    let images = end
        .iter()
        .map(|&z| nearest_unambiguous(z, &start, tol, diam))
        .collect::<Result<Vec<_>>>()?;
    let permutation = Permutation::new(images)
        .map_err(|_| Error::AmbiguousMatching("endpoint matching is not injective".into()))?;
    Ok(MonodromyResult {
        permutation,
        min_separation_along_path: stats.min_separation,
        max_step_contraction: stats.max_step_contraction,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    /// `z^2 - e^(2 pi i t)` sampled at `m` waypoints.
    fn unit_circle_loop(m: usize, samples: usize) -> CoefficientPath {
        let w: Vec<MonicPolynomial> = (0..=m)
            .map(|k| {
                let t = if k == m { 0.0 } else { k as f64 / m as f64 };
                MonicPolynomial::new(vec![
                    Complex::new(0.0, 0.0),
                    -Complex::from_polar(1.0, TAU * t),
                ])
                .unwrap()
            })
            .collect();
        CoefficientPath::new(w, samples, &tol()).unwrap()
    }

    #[test]
    fn constant_path_is_identity() {
        let p = MonicPolynomial::from_real(&[0.0, -1.0]).unwrap();
        let path = CoefficientPath::constant(p, &tol()).unwrap();
        let start = Configuration::from_real(&[1.0, -1.0], true).unwrap();
        assert_eq!(track_path(&path, &start, &tol()).unwrap(), start);
        assert!(loop_permutation(&path, &tol())
            .unwrap()
            .permutation
            .is_identity());
    }

    #[test]
    fn square_root_loop_swaps_roots() {
        let path = unit_circle_loop(16, 32);
        let start = Configuration::from_real(&[1.0, -1.0], true).unwrap();
        let end = track_path(&path, &start, &tol()).unwrap();
        let expected = Configuration::from_real(&[-1.0, 1.0], true).unwrap();
        assert!(end.matching_distance(&expected).unwrap() < 1e-10);
        assert!((end.points()[0] + 1.0).norm() < 1e-10);
        let m = loop_permutation(&path, &tol()).unwrap();
        assert_eq!(m.permutation, Permutation::transposition(2, 0, 1).unwrap());
        assert!(m.min_separation_along_path > 1.9);
        assert!(m.max_step_contraction <= 1.0);
    }

    #[test]
    fn half_circle_matches_closed_form() {
        // roots of z^2 - e^(2 pi i t) are +-e^(pi i t)
        let w: Vec<MonicPolynomial> = (0..=8)
            .map(|k| {
                let t = 0.5 * k as f64 / 8.0;
                MonicPolynomial::new(vec![
                    Complex::new(0.0, 0.0),
                    -Complex::from_polar(1.0, TAU * t),
                ])
                .unwrap()
            })
            .collect();
        let path = CoefficientPath::new(w, 64, &tol()).unwrap();
        let start = Configuration::from_real(&[1.0, -1.0], true).unwrap();
        let end = track_path(&path, &start, &tol()).unwrap();
        let i = Complex::new(0.0, 1.0);
        // sampled path is piecewise linear, so compare against the roots of the endpoint
        assert!((end.points()[0] - i).norm() < 1e-10);
        assert!((end.points()[1] + i).norm() < 1e-10);
    }

    #[test]
    fn reversed_loop_gives_inverse_and_doubling_samples_agrees() {
        let path = unit_circle_loop(12, 16);
        let fwd = loop_permutation(&path, &tol()).unwrap().permutation;
        let back = loop_permutation(&path.reversed(), &tol())
            .unwrap()
            .permutation;
        assert_eq!(back, fwd.inverse());
        let fine = loop_permutation(&path.with_samples(32).unwrap(), &tol()).unwrap();
        assert_eq!(fine.permutation, fwd);
        let twice = loop_permutation(&path.concat(&path).unwrap(), &tol()).unwrap();
        assert_eq!(twice.permutation, fwd.then(&fwd));
        assert!(twice.permutation.is_identity());
    }

    #[test]
    fn wrong_start_is_rejected() {
        let p = MonicPolynomial::from_real(&[0.0, -1.0]).unwrap();
        let path = CoefficientPath::constant(p, &tol()).unwrap();
        let bad = Configuration::from_real(&[2.0, -1.0], true).unwrap();
        assert!(track_path(&path, &bad, &tol()).is_err());
    }

    #[test]
    fn open_path_has_no_monodromy() {
        let a = MonicPolynomial::from_real(&[0.0, -1.0]).unwrap();
        let b = MonicPolynomial::from_real(&[0.0, -4.0]).unwrap();
        let path = CoefficientPath::new(vec![a, b], 8, &tol()).unwrap();
        assert!(matches!(
            loop_permutation(&path, &tol()),
            Err(Error::InvalidInput(_))
        ));
    }
}
