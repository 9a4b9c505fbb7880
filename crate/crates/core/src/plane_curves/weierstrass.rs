//! The elliptic curve `y^2 = (x - l1)(x - l2)(x - l3)` with identity at
//! infinity: chord-tangent group law, division polynomials and torsion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly_core::{
    roots, Complex, Configuration, MonicPolynomial, Polynomial, TolerancePolicy,
};

const ZERO: Complex = Complex::new(0.0, 0.0);
/// Relative tolerance for deciding `x1 == x2` and `y == 0` in the group law.
const COINCIDE: f64 = 1e-9;
/// Relative tolerance for accepting a torsion point (`(k-1)P = -P`).
const TORSION_RESIDUAL: f64 = 1e-8;

/// `E_l : y^2 = (x - l1)(x - l2)(x - l3)` for three distinct `l_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    lambda: Configuration,
    /// `x^3 + a2 x^2 + a4 x + a6`
    a2: Complex,
    a4: Complex,
    a6: Complex,
    /// Short form `y^2 = u^3 + A u + B` with `u = x - shift`.
    shift: Complex,
    short_a: Complex,
    short_b: Complex,
}

/// A point of an elliptic curve: the identity at infinity or an affine point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Complex, y: Complex },
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    inf: bool,
    x: Complex,
    y: Complex,
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match *self {
            CurvePoint::Infinity => PointRepr {
                inf: true,
                x: ZERO,
                y: ZERO,
            },
            CurvePoint::Affine { x, y } => PointRepr { inf: false, x, y },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PointRepr::deserialize(d)?;
        Ok(if r.inf {
            CurvePoint::Infinity
        } else {
            CurvePoint::Affine { x: r.x, y: r.y }
        })
    }
}

impl CurvePoint {
    pub fn affine(x: Complex, y: Complex) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn neg(&self) -> CurvePoint {
        match *self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x, y: -y },
        }
    }
}

impl WeierstrassCurve {
    /// Fails with `NotDistinct` unless `lambda` holds three distinct points.
    pub fn new(lambda: &Configuration, tol: &TolerancePolicy) -> Result<Self> {
        if lambda.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "need 3 branch points, got {}",
                lambda.len()
            )));
        }
        lambda.require_distinct(tol)?;
        let l = lambda.points();
        let s1 = l[0] + l[1] + l[2];
        let s2 = l[0] * l[1] + l[0] * l[2] + l[1] * l[2];
        let s3 = l[0] * l[1] * l[2];
        let (a2, a4, a6) = (-s1, s2, -s3);
        let shift = -a2 / 3.0;
        let short_a = a4 - a2 * a2 / 3.0;
        let short_b = a2 * a2 * a2 * 2.0 / 27.0 - a2 * a4 / 3.0 + a6;
        Ok(Self {
            lambda: lambda.to_unordered(),
            a2,
            a4,
            a6,
            shift,
            short_a,
            short_b,
        })
    }

    /// The curve `y^2 = x^3 + b x^2 + c x + d` given by its cubic.
    pub fn from_cubic(cubic: &MonicPolynomial, tol: &TolerancePolicy) -> Result<Self> {
        if cubic.degree() != 3 {
            return Err(Error::InvalidInput(
                "Weierstrass cubic must have degree 3".into(),
            ));
        }
        Self::new(&roots(cubic, tol)?, tol)
    }

    pub fn lambda(&self) -> &Configuration {
        &self.lambda
    }

    /// `(A, B)` of the short form `y^2 = u^3 + A u + B`, `u = x - shift`.
    pub fn short_form(&self) -> (Complex, Complex) {
        (self.short_a, self.short_b)
    }

    pub fn shift(&self) -> Complex {
        self.shift
    }

    /// Right-hand side `(x - l1)(x - l2)(x - l3)`.
    pub fn rhs(&self, x: Complex) -> Complex {
        ((x + self.a2) * x + self.a4) * x + self.a6
    }

    fn scale(&self) -> f64 {
        1.0 + self
            .lambda
            .points()
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max)
    }

    /// Curve equation residual `|y^2 - rhs(x)| / (1 + |x|^3)`.
    pub fn residual(&self, p: &CurvePoint) -> f64 {
        match *p {
            CurvePoint::Infinity => 0.0,
            CurvePoint::Affine { x, y } => (y * y - self.rhs(x)).norm() / (1.0 + x.norm().powi(3)),
        }
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        self.residual(p) <= 1e-10 * self.scale().powi(3)
    }

    /// Distance between two points, relative to the curve scale; 0 for two
    /// points at infinity and infinite for one.
    pub fn point_distance(&self, p: &CurvePoint, q: &CurvePoint) -> f64 {
        match (p, q) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => 0.0,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                let s = self.scale() + x1.norm().max(x2.norm());
                ((x1 - x2).norm() / s).max((y1 - y2).norm() / s.powf(1.5))
            }
            _ => f64::INFINITY,
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        p.neg()
    }

    /// Chord-tangent addition. Chords within `COINCIDE` of vertical give the
    /// identity; nearly equal points are doubled.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (CurvePoint::Infinity, _) => return *q,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let sx = self.scale() + x1.norm().max(x2.norm());
        let sy = sx.powf(1.5);
        let slope = if (x1 - x2).norm() <= COINCIDE * sx {
            // q = -p, or the tangent at a 2-torsion point
            if (y1 + y2).norm() <= (y1 - y2).norm() || y1.norm() <= COINCIDE * sy {
                return CurvePoint::Infinity;
            }
            (x1 * x1 * 3.0 + self.a2 * x1 * 2.0 + self.a4) / (y1 * 2.0)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = slope * slope - self.a2 - x1 - x2;
        let y3 = slope * (x1 - x3) - y1;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// `[P, 2P, ..., nP]` by repeated addition.
    pub fn multiples(&self, p: &CurvePoint, n: usize) -> Vec<CurvePoint> {
        let mut out = Vec::with_capacity(n);
        let mut acc = CurvePoint::Infinity;
        for _ in 0..n {
            acc = self.add(&acc, p);
            out.push(acc);
        }
        out
    }

    pub fn mul(&self, p: &CurvePoint, n: usize) -> CurvePoint {
        self.multiples(p, n).pop().unwrap_or(CurvePoint::Infinity)
    }

    /// Smallest `n <= max` with `nP = O`.
    pub fn order(&self, p: &CurvePoint, max: usize) -> Option<usize> {
        let mut acc = CurvePoint::Infinity;
        for n in 1..=max {
            acc = self.add(&acc, p);
            if acc.is_infinity() {
                return Some(n);
            }
        }
        None
    }

    /// Relative distance between `(k-1)P` and `-P`; zero iff `kP = O`.
    pub fn torsion_residual(&self, p: &CurvePoint, k: usize) -> f64 {
        if p.is_infinity() {
            return 0.0;
        }
        let m = self.mul(p, k - 1);
        self.point_distance(&m, &p.neg())
    }

    /// The two points over `x`.
    fn lifts(&self, x: Complex) -> [CurvePoint; 2] {
        let y = self.rhs(x).sqrt();
        [CurvePoint::affine(x, y), CurvePoint::affine(x, -y)]
    }

    /// All `Q` with `2Q = P`: candidates `x0 + r1 r2 + r1 r3 + r2 r3` with
    /// `r_i^2 = x0 - l_i`, both lifts each, kept when doubling returns `P`.
    pub fn halves(&self, p: &CurvePoint) -> Result<Vec<CurvePoint>> {
        let l = self.lambda.points();
        let (x0, _) = match *p {
            CurvePoint::Infinity => {
                let mut out = vec![CurvePoint::Infinity];
                out.extend(l.iter().map(|&li| CurvePoint::affine(li, ZERO)));
                return Ok(out);
            }
            CurvePoint::Affine { x, y } => (x, y),
        };
        let r: Vec<Complex> = l.iter().map(|&li| (x0 - li).sqrt()).collect();
        let mut found: Vec<CurvePoint> = Vec::new();
        for (s2, s3) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let (r1, r2, r3) = (r[0], r[1] * s2, r[2] * s3);
            let x = x0 + r1 * r2 + r1 * r3 + r2 * r3;
            for cand in self.lifts(x) {
                let doubled = self.add(&cand, &cand);
                if self.point_distance(&doubled, p) <= 1e-7
                    && !found.iter().any(|f| self.point_distance(f, &cand) <= 1e-7)
                {
                    found.push(cand);
                }
            }
        }
        if found.len() != 4 {
            return Err(Error::CardinalityMismatch {
                expected: 4,
                found: found.len(),
            });
        }
        Ok(found)
    }

    /// All `Q` with `pQ = +-P` for an odd prime `p`, given `P != O`:
    /// roots of `(u - u_P) f_p^2 - 4 g f_(p-1) f_(p+1)` with both lifts.
    fn odd_preimages(
        &self,
        p: usize,
        x_target: Complex,
        tol: &TolerancePolicy,
    ) -> Result<Vec<CurvePoint>> {
        let f = reduced_division_polynomials(self.short_a, self.short_b, p + 1);
        let g = short_rhs(self.short_a, self.short_b);
        let u_target = x_target - self.shift;
        let lhs = &(&Polynomial::new(vec![-u_target, Complex::new(1.0, 0.0)]) * &f[p].pow(2))
            - &(&(&g * &f[p - 1]) * &f[p + 1]).scale(Complex::new(4.0, 0.0));
        let us = roots(&lhs.to_monic()?, tol)?;
        Ok(us
            .points()
            .iter()
            .flat_map(|&u| self.lifts(u + self.shift))
            .collect())
    }

    /// Nonzero points of order dividing an odd prime `p`.
    fn prime_torsion(&self, p: usize, tol: &TolerancePolicy) -> Result<Vec<CurvePoint>> {
        let f = reduced_division_polynomials(self.short_a, self.short_b, p);
        let us = roots(&f[p].to_monic()?, tol)?;
        Ok(us
            .points()
            .iter()
            .flat_map(|&u| self.lifts(u + self.shift))
            .collect())
    }

    /// `E[2^e]`, including the identity, by repeated halving.
    fn two_power_torsion(&self, e: u32) -> Result<Vec<CurvePoint>> {
        let mut set = vec![CurvePoint::Infinity];
        for _ in 0..e {
            let mut next = Vec::with_capacity(set.len() * 4);
            for q in &set {
                next.extend(self.halves(q)?);
            }
            set = next;
        }
        Ok(set)
    }

    /// `E[n]` for odd `n`, including the identity, built prime by prime as
    /// preimages under multiplication.
    fn odd_torsion(&self, n: usize, tol: &TolerancePolicy) -> Result<Vec<CurvePoint>> {
        let mut set = vec![CurvePoint::Infinity];
        for p in prime_factors_with_multiplicity(n) {
            let mut next = vec![CurvePoint::Infinity];
            next.extend(self.prime_torsion(p, tol)?);
            // points come in +-pairs sharing x; one preimage solve per pair
            let mut seen: Vec<Complex> = Vec::new();
            for q in &set {
                if let CurvePoint::Affine { x, .. } = *q {
                    let s = self.scale() + x.norm();
                    if seen.iter().any(|v| (v - x).norm() <= 1e-7 * s) {
                        continue;
                    }
                    seen.push(x);
                    next.extend(self.odd_preimages(p, x, tol)?);
                }
            }
            set = next;
        }
        Ok(set)
    }

    /// The full group `E[n]` (n^2 points including the identity).
    pub fn full_torsion(&self, n: usize, tol: &TolerancePolicy) -> Result<Vec<CurvePoint>> {
        if n == 0 {
            return Err(Error::InvalidInput("torsion order must be >= 1".into()));
        }
        let e = n.trailing_zeros();
        let odd = n >> e;
        let two = self.two_power_torsion(e)?;
        let rest = self.odd_torsion(odd, tol)?;
        let mut out = Vec::with_capacity(n * n);
        for a in &two {
            for b in &rest {
                out.push(self.add(a, b));
            }
        }
        if out.len() != n * n {
            return Err(Error::CardinalityMismatch {
                expected: n * n,
                found: out.len(),
            });
        }
        let worst = out
            .iter()
            .map(|p| self.torsion_residual(p, n))
            .fold(0.0, f64::max);
        if worst > TORSION_RESIDUAL {
            return Err(Error::IllConditioned(format!(
                "{n}-torsion residual {worst:e} exceeds {TORSION_RESIDUAL:e}"
            )));
        }
        let distinct = count_distinct(self, &out);
        if distinct != n * n {
            return Err(Error::CardinalityMismatch {
                expected: n * n,
                found: distinct,
            });
        }
        Ok(out)
    }
}

fn count_distinct(e: &WeierstrassCurve, pts: &[CurvePoint]) -> usize {
    let mut reps: Vec<CurvePoint> = Vec::new();
    for p in pts {
        if !reps.iter().any(|q| e.point_distance(p, q) <= 1e-7) {
            reps.push(*p);
        }
    }
    reps.len()
}

fn prime_factors_with_multiplicity(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `u^3 + A u + B`
fn short_rhs(a: Complex, b: Complex) -> Polynomial {
    Polynomial::new(vec![b, a, ZERO, Complex::new(1.0, 0.0)])
}

/// `f_0 ..= f_n` with `psi_k = f_k` for odd `k` and `psi_k = 2y f_k` for even
/// `k`, on `y^2 = u^3 + A u + B`.
pub(crate) fn reduced_division_polynomials(a: Complex, b: Complex, n: usize) -> Vec<Polynomial> {
    let c = |re: f64| Complex::new(re, 0.0);
    let mut f = vec![
        Polynomial::zero(),
        Polynomial::constant(c(1.0)),
        Polynomial::constant(c(1.0)),
        // 3u^4 + 6A u^2 + 12B u - A^2
        Polynomial::new(vec![-a * a, b * 12.0, a * 6.0, ZERO, c(3.0)]),
        // 2(u^6 + 5A u^4 + 20B u^3 - 5A^2 u^2 - 4AB u - 8B^2 - A^3)
        Polynomial::new(vec![
            (-b * b * 8.0 - a * a * a) * 2.0,
            -a * b * 8.0,
            -a * a * 10.0,
            b * 40.0,
            a * 10.0,
            ZERO,
            c(2.0),
        ]),
    ];
    let g2 = short_rhs(a, b).pow(2).scale(c(16.0));
    for k in 5..=n {
        let m = k / 2;
        let next = if k % 2 == 1 {
            let t1 = &f[m + 2] * &f[m].pow(3);
            let t2 = &f[m - 1] * &f[m + 1].pow(3);
            if m % 2 == 0 {
                &(&g2 * &t1) - &t2
            } else {
                &t1 - &(&g2 * &t2)
            }
        } else {
            let inner = &(&f[m + 2] * &f[m - 1].pow(2)) - &(&f[m - 2] * &f[m + 1].pow(2));
            &f[m] * &inner
        };
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// Polynomial in the short-form coordinate `u = x - shift` whose roots are
/// the `u`-coordinates of the nonzero `k`-torsion points: `psi_k` for odd
/// `k`, and `(u^3 + A u + B) f_k` for even `k` (the 2-torsion factor times
/// the part with `y` split off).
pub fn division_polynomial(e: &WeierstrassCurve, k: usize) -> Result<Polynomial> {
    if k < 2 {
        return Err(Error::InvalidInput(
            "division polynomial index must be >= 2".into(),
        ));
    }
    let (a, b) = e.short_form();
    let f = reduced_division_polynomials(a, b, k);
    Ok(if k % 2 == 1 {
        f[k].clone()
    } else {
        &short_rhs(a, b) * &f[k]
    })
}

/// The `k^2 - 1` nonzero `k`-torsion points, each verified by `(k-1)P = -P`.
pub fn torsion_points(
    e: &WeierstrassCurve,
    k: usize,
    tol: &TolerancePolicy,
) -> Result<Vec<CurvePoint>> {
    if k < 2 {
        return Err(Error::InvalidInput("torsion order must be >= 2".into()));
    }
    let pts: Vec<CurvePoint> = e
        .full_torsion(k, tol)?
        .into_iter()
        .filter(|p| !p.is_infinity())
        .collect();
    if pts.len() != k * k - 1 {
        return Err(Error::CardinalityMismatch {
            expected: k * k - 1,
            found: pts.len(),
        });
    }
    Ok(pts)
}
