use serde::{Deserialize, Serialize};

use super::intersect::{descend_gradient, intersect, ChartPoint};
use super::ternary::{hessian, relative_residual, ProjectivePoint, TernaryForm};
use crate::error::{Error, Result};
use crate::poly_core::{Complex, TolerancePolicy};

/// Candidates closer than this (chordal distance) are the same point.
const MERGE_DIST: f64 = 1e-6;
/// Candidates between the two radii cannot be told apart reliably.
const AMBIGUOUS_DIST: f64 = 1e-4;
/// Normalized `|grad F|` below which a point counts as singular.
const SINGULAR_MARGIN: f64 = 1e-7;

/// A flex with its intersection multiplicity against the Hessian curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flex {
    pub point: ProjectivePoint,
    pub multiplicity: usize,
}

fn generic_combination(grad: &[TernaryForm; 3], w: [(f64, f64); 3]) -> TernaryForm {
    let c = |(re, im): (f64, f64)| Complex::new(re, im);
    grad[0]
        .scale(c(w[0]))
        .add(&grad[1].scale(c(w[1])))
        .add(&grad[2].scale(c(w[2])))
}

/// Smallest normalized gradient norm `|grad F(p)| / (|F| |p|^(d-1))` found
/// over the candidate singular points; 0 when the partials share a curve.
pub fn smoothness_margin(f: &TernaryForm, tol: &TolerancePolicy) -> Result<f64> {
    if f.degree() < 2 {
        return Err(Error::InvalidInput("smoothness needs degree >= 2".into()));
    }
    let grad = f.gradient();
    // singular points are common zeros of any two members of the net of partials
    let g1 = generic_combination(&grad, [(1.0, 0.0), (0.61, -0.37), (-0.29, 0.83)]);
    let g2 = generic_combination(&grad, [(0.47, 0.71), (-0.93, 0.12), (1.0, 0.0)]);
    if g1.is_zero() || g2.is_zero() {
        return Ok(0.0);
    }
    let candidates = match intersect(&g1, &g2, tol) {
        Ok(c) => c,
        Err(Error::IllConditioned(_)) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    let d = f.degree() as i32;
    let scale = f.norm_inf();
    let margin = candidates
        .into_iter()
        .map(|c: ChartPoint| {
            let p = descend_gradient(f, c, 200);
            let norm = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let g = grad
                .iter()
                .map(|g| g.eval(&p).norm_sqr())
                .sum::<f64>()
                .sqrt();
            g / (scale * norm.powi(d - 1))
        })
        .fold(f64::INFINITY, f64::min);
    Ok(margin)
}

/// True iff the three partials have no common zero in P^2.
pub fn is_smooth(f: &TernaryForm, tol: &TolerancePolicy) -> Result<bool> {
    Ok(smoothness_margin(f, tol)? > SINGULAR_MARGIN)
}

/// Flex points of a smooth curve: the intersection with its Hessian, each
/// with its multiplicity; multiplicities sum to `3d(d-2)`.
pub fn flex_points(f: &TernaryForm, tol: &TolerancePolicy) -> Result<Vec<Flex>> {
    if !is_smooth(f, tol)? {
        return Err(Error::NotSmooth);
    }
    let h = hessian(f)?;
    if h.degree() == 0 {
        return Ok(Vec::new());
    }
    let candidates = intersect(f, &h, tol)?;
    for c in &candidates {
        let rf = relative_residual(f, &c.coords);
        let rh = relative_residual(&h, &c.coords);
        if rf > 1e-8 || rh > 1e-8 {
            return Err(Error::IllConditioned(format!(
                "flex candidate residuals {rf:e} / {rh:e} after polishing"
            )));
        }
    }
    let points = candidates
        .iter()
        .map(|c| ProjectivePoint::new(c.coords))
        .collect::<Result<Vec<_>>>()?;
    cluster(&points)
}

/// Groups nearby points, counting cluster sizes as multiplicities.
pub(crate) fn cluster(points: &[ProjectivePoint]) -> Result<Vec<Flex>> {
    let mut out: Vec<Flex> = Vec::new();
    for p in points {
        let mut merged = false;
        for q in out.iter_mut() {
            let d = p.distance(&q.point);
            if d < MERGE_DIST {
                q.multiplicity += 1;
                merged = true;
                break;
            }
            if d < AMBIGUOUS_DIST {
                return Err(Error::IllConditioned(format!(
                    "two flex candidates at ambiguous distance {d:e}"
                )));
            }
        }
        if !merged {
            out.push(Flex {
                point: *p,
                multiplicity: 1,
            });
        }
    }
    Ok(out)
}
