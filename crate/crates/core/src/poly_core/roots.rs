use std::f64::consts::TAU;

use super::{Complex, Configuration, MonicPolynomial, TolerancePolicy};
use crate::error::{Error, Result};

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Largest residual `|P(r)|` accepted for a computed root `r`.
pub(crate) fn residual_bound(p: &MonicPolynomial, r: Complex, tol: &TolerancePolicy) -> f64 {
    let m = r.norm();
    let n = p.degree() as i32;
    tol.root_tol * (1.0 + m).powi(n).max(p.abs_eval(m))
}

/// Newton steps from `z`, each accepted only if it lowers the residual, so a
/// root inside a cluster never jumps to a neighbour.
pub fn polish_root(p: &MonicPolynomial, mut z: Complex, steps: usize) -> Complex {
    let (mut v, mut dv) = p.eval_with_derivative(z);
    for _ in 0..steps {
        if v == ZERO || dv == ZERO {
            break;
        }
        let cand = z - v / dv;
        let (cv, cdv) = p.eval_with_derivative(cand);
        if cv.norm() < v.norm() {
            z = cand;
            v = cv;
            dv = cdv;
        } else {
            break;
        }
    }
    z
}

/// All roots of `p` with multiplicity, as an unordered configuration.
///
/// Exact zero trailing coefficients are deflated first (those roots are
/// exactly zero); the rest are found by simultaneous Aberth iteration started
/// on the circle of radius `1 + max |a_k|`, then polished by Newton's method.
pub fn roots(p: &MonicPolynomial, tol: &TolerancePolicy) -> Result<Configuration> {
    let n = p.degree();
    let zeros = p.coeffs().iter().rev().take_while(|a| **a == ZERO).count();
    let mut out = vec![ZERO; zeros];
    if zeros < n {
        let reduced = MonicPolynomial::new(p.coeffs()[..n - zeros].to_vec())?;
        out.extend(aberth(&reduced, tol)?);
    }
    Configuration::unordered(out)
}

fn aberth(p: &MonicPolynomial, tol: &TolerancePolicy) -> Result<Vec<Complex>> {
    let n = p.degree();
    if n == 1 {
        return Ok(vec![-p.coeffs()[0]]);
    }
    let radius = 1.0 + p.coeffs().iter().map(|a| a.norm()).fold(0.0, f64::max);
    // offset keeps the start circle off any symmetry axis of the input
    let mut z: Vec<Complex> = (0..n)
        .map(|k| Complex::from_polar(radius, TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < tol.max_iterations && done.iter().any(|d| !d) {
        iterations += 1;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[k]);
            if v == ZERO {
                done[k] = true;
                continue;
            }
            let repulsion: Complex = (0..n)
                .filter(|&j| j != k)
                .map(|j| z[k] - z[j])
                .filter(|d| *d != ZERO)
                .map(|d| d.inv())
                .sum();
            let ratio = v / dv;
            let step = if dv == ZERO || !ratio.is_finite() {
                // stationary point: nudge off it
                Complex::from_polar(tol.distinct_tol * (1.0 + z[k].norm()), k as f64)
            } else {
                ratio / (Complex::new(1.0, 0.0) - ratio * repulsion)
            };
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= tol.root_tol * (1.0 + z[k].norm())
                || p.evaluate(z[k]).norm() <= 1e-3 * residual_bound(p, z[k], tol)
            {
                done[k] = true;
            }
        }
    }
    for r in z.iter_mut() {
        *r = polish_root(p, *r, 4);
    }
    let worst = z
        .iter()
        .map(|&r| p.evaluate(r).norm() / residual_bound(p, r, tol))
        .fold(0.0, f64::max);
    if worst > 1.0 || z.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonConvergence {
            iterations,
            residual: worst,
        });
    }
    Ok(z)
}

/// The Viete map: the monic polynomial whose root multiset is `c`, with
/// `a_k = (-1)^k e_k(c)`. Points are sorted first, so the result is
/// bit-identical for every ordering of `c`.
pub fn from_roots(c: &Configuration) -> MonicPolynomial {
    // descending coefficients [1, a1, ..., ak] of the partial product
    let mut desc = vec![Complex::new(1.0, 0.0)];
    for r in c.canonical_points() {
        let mut next = desc.clone();
        next.push(ZERO);
        for i in 1..next.len() {
            next[i] = desc.get(i).copied().unwrap_or(ZERO) - r * desc[i - 1];
        }
        desc = next;
    }
    desc.remove(0);
    MonicPolynomial::new(desc).expect("configuration is nonempty and finite")
}
