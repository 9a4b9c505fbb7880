//! Intersection of two plane curves by resultant elimination.
//!
//! Both forms are first moved into a fixed generic unitary frame, so that no
//! intersection point lies on the line at infinity of the chart `z = 1` and
//! distinct points have distinct `x`. The resultant in `y` is sampled on the
//! unit circle and interpolated by an inverse DFT; its roots give `x`, and
//! `y` is recovered from the roots of the first curve restricted to that `x`.

use std::f64::consts::TAU;

use super::ternary::TernaryForm;
use crate::error::{Error, Result};
use crate::poly_core::{roots, sylvester_determinant, Complex, Polynomial, TolerancePolicy};

pub(crate) type Frame = [[Complex; 3]; 3];

/// A fixed unitary matrix with no special alignment to coordinate axes.
pub(crate) fn generic_frame() -> Frame {
    let raw = [
        [(0.81, 0.23), (-0.37, 0.55), (0.12, -0.64)],
        [(0.29, -0.71), (0.66, 0.18), (-0.43, 0.31)],
        [(-0.52, 0.14), (0.27, -0.48), (0.77, 0.35)],
    ];
    let cols: Vec<[Complex; 3]> = (0..3)
        .map(|j| std::array::from_fn(|i| Complex::new(raw[i][j].0, raw[i][j].1)))
        .collect();
    let mut basis: Vec<[Complex; 3]> = Vec::new();
    for c in cols {
        let mut v = c;
        for b in &basis {
            let proj: Complex = (0..3).map(|i| b[i].conj() * v[i]).sum();
            for i in 0..3 {
                v[i] -= proj * b[i];
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        basis.push(v.map(|z| z / n));
    }
    std::array::from_fn(|i| std::array::from_fn(|j| basis[j][i]))
}

pub(crate) fn apply(m: &Frame, u: &[Complex; 3]) -> [Complex; 3] {
    std::array::from_fn(|i| (0..3).map(|j| m[i][j] * u[j]).sum())
}

/// Directional derivative of `f` at `p` along `dir`.
fn directional(grad: &[TernaryForm; 3], p: &[Complex; 3], dir: [Complex; 3]) -> Complex {
    (0..3).map(|i| grad[i].eval(p) * dir[i]).sum()
}

fn column(m: &Frame, j: usize) -> [Complex; 3] {
    [m[0][j], m[1][j], m[2][j]]
}

/// A chart point `(x, y)` of the generic frame together with its projective
/// coordinates in the original frame.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ChartPoint {
    pub x: Complex,
    pub y: Complex,
    pub coords: [Complex; 3],
}

impl ChartPoint {
    pub(crate) fn new(frame: &Frame, x: Complex, y: Complex) -> Self {
        Self {
            x,
            y,
            coords: apply(frame, &[x, y, Complex::new(1.0, 0.0)]),
        }
    }
}

/// Newton's method on the square system `f = g = 0` in the chart.
fn polish_pair(
    frame: &Frame,
    f: &TernaryForm,
    g: &TernaryForm,
    start: ChartPoint,
    iterations: usize,
) -> ChartPoint {
    let gf = f.gradient();
    let gg = g.gradient();
    let (cx, cy) = (column(frame, 0), column(frame, 1));
    let residual = |p: &ChartPoint| {
        let a = f.eval(&p.coords);
        let b = g.eval(&p.coords);
        (a, b, (a.norm_sqr() + b.norm_sqr()).sqrt())
    };
    let mut cur = start;
    let (mut a, mut b, mut r) = residual(&cur);
    for _ in 0..iterations {
        if r == 0.0 {
            break;
        }
        let j11 = directional(&gf, &cur.coords, cx);
        let j12 = directional(&gf, &cur.coords, cy);
        let j21 = directional(&gg, &cur.coords, cx);
        let j22 = directional(&gg, &cur.coords, cy);
        let det = j11 * j22 - j12 * j21;
        if det.norm() == 0.0 {
            break;
        }
        let dx = (j22 * a - j12 * b) / det;
        let dy = (j11 * b - j21 * a) / det;
        let cand = ChartPoint::new(frame, cur.x - dx, cur.y - dy);
        let (na, nb, nr) = residual(&cand);
        if nr.is_nan() || nr >= r {
            break;
        }
        cur = cand;
        a = na;
        b = nb;
        r = nr;
    }
    cur
}

/// All intersection points of `f = g = 0`, one chart point per root of the
/// eliminating resultant (so a point of intersection multiplicity `m`
/// appears `m` times, up to rounding). Fails with `IllConditioned` when the
/// resultant vanishes identically, i.e. the curves share a component.
pub(crate) fn intersect(
    f: &TernaryForm,
    g: &TernaryForm,
    tol: &TolerancePolicy,
) -> Result<Vec<ChartPoint>> {
    let frame = generic_frame();
    let fu = f.substitute(&frame);
    let gu = g.substitute(&frame);
    let (df, dg) = (f.degree() as usize, g.degree() as usize);
    let bezout = df * dg;
    if bezout == 0 {
        return Ok(Vec::new());
    }
    let samples = bezout + 1;
    let values: Vec<Complex> = (0..samples)
        .map(|j| {
            let x = Complex::from_polar(1.0, TAU * j as f64 / samples as f64);
            let mut a = fu.chart_y_coefficients(x);
            let mut b = gu.chart_y_coefficients(x);
            a.reverse();
            b.reverse();
            sylvester_determinant(&a, &b)
        })
        .collect();
    let coeffs: Vec<Complex> = (0..samples)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex::from_polar(1.0, -TAU * (j * k) as f64 / samples as f64))
                .sum::<Complex>()
                / samples as f64
        })
        .collect();
    let scale = fu.norm_inf().powi(dg as i32) * gu.norm_inf().powi(df as i32);
    let res = Polynomial::new(coeffs);
    if res.norm_inf() <= 1e-10 * scale {
        return Err(Error::IllConditioned(
            "eliminating resultant vanishes identically (common component)".into(),
        ));
    }
    if res.leading().norm() <= 1e-9 * res.norm_inf() {
        return Err(Error::IllConditioned(
            "intersection point at infinity of the generic chart".into(),
        ));
    }
    let xs = roots(&res.to_monic()?, tol)?;
    let mut out = Vec::with_capacity(bezout);
    for &x in xs.points() {
        let mut fy = fu.chart_y_coefficients(x);
        while fy.len() > 1 && fy.last().unwrap().norm() <= 1e-14 * fu.norm_inf() {
            fy.pop();
        }
        let fy = Polynomial::new(fy);
        let best_y = match fy.degree() {
            Some(d) if d >= 1 => {
                let ys = roots(&fy.to_monic()?, tol)?;
                ys.points()
                    .iter()
                    .copied()
                    .min_by(|a, b| {
                        let ga = gu.eval(&[x, *a, Complex::new(1.0, 0.0)]).norm();
                        let gb = gu.eval(&[x, *b, Complex::new(1.0, 0.0)]).norm();
                        ga.total_cmp(&gb)
                    })
                    .unwrap()
            }
            _ => Complex::new(0.0, 0.0),
        };
        let start = ChartPoint::new(&frame, x, best_y);
        out.push(polish_pair(&frame, f, g, start, 60));
    }
    Ok(out)
}

/// Levenberg-Marquardt descent of `|grad F|` from a chart point; returns the
/// polished projective coordinates.
pub(crate) fn descend_gradient(
    f: &TernaryForm,
    start: ChartPoint,
    iterations: usize,
) -> [Complex; 3] {
    let frame = generic_frame();
    let grad = f.gradient();
    let second: Vec<[TernaryForm; 3]> = grad.iter().map(|g| g.gradient()).collect();
    let (cx, cy) = (column(&frame, 0), column(&frame, 1));
    let resid = |p: &[Complex; 3]| -> ([Complex; 3], f64) {
        let r: [Complex; 3] = std::array::from_fn(|i| grad[i].eval(p));
        let n = r.iter().map(|z| z.norm_sqr()).sum::<f64>();
        (r, n)
    };
    let mut cur = start;
    let (mut r, mut n) = resid(&cur.coords);
    let mut mu = 1e-10;
    for _ in 0..iterations {
        if n == 0.0 {
            break;
        }
        // J[i] = (d r_i / dx, d r_i / dy)
        let jac: Vec<[Complex; 2]> = (0..3)
            .map(|i| {
                [
                    directional(&second[i], &cur.coords, cx),
                    directional(&second[i], &cur.coords, cy),
                ]
            })
            .collect();
        let mut a = [[Complex::new(0.0, 0.0); 2]; 2];
        let mut rhs = [Complex::new(0.0, 0.0); 2];
        for i in 0..3 {
            for k in 0..2 {
                rhs[k] += jac[i][k].conj() * r[i];
                for l in 0..2 {
                    a[k][l] += jac[i][k].conj() * jac[i][l];
                }
            }
        }
        let trace = a[0][0].re + a[1][1].re;
        let mut improved = false;
        for _ in 0..8 {
            let damp = mu * trace.max(f64::MIN_POSITIVE);
            let m00 = a[0][0] + damp;
            let m11 = a[1][1] + damp;
            let det = m00 * m11 - a[0][1] * a[1][0];
            if det.norm() == 0.0 {
                mu *= 10.0;
                continue;
            }
            let dx = (m11 * rhs[0] - a[0][1] * rhs[1]) / det;
            let dy = (m00 * rhs[1] - a[1][0] * rhs[0]) / det;
            let cand = ChartPoint::new(&frame, cur.x - dx, cur.y - dy);
            let (nr, nn) = resid(&cand.coords);
            if nn < n {
                cur = cand;
                r = nr;
                n = nn;
                mu = (mu * 0.1).max(1e-14);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    cur.coords
}
