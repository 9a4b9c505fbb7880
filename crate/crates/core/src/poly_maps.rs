//! Maps between polynomial spaces: the quartic resolvent `R: Poly_4 -> Poly_3`
//! and its twists `R_d`, the disjoining map `Phi_n`, and the torsion maps
//! `Psi_k: Poly_3 -> Poly_(k^2-1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane_curves::{torsion_points, CurvePoint, WeierstrassCurve};
use crate::poly_core::{
    discriminant, from_roots, is_square_free, roots, Complex, Configuration, MonicPolynomial,
    TolerancePolicy,
};

/// The resolvent cubic of a square-free quartic together with the data it
/// was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventResult {
    #[serde(flatten)]
    pub output: MonicPolynomial,
    /// `(b1, b2, b3)` in the labeling induced by `input_roots`.
    pub b_values: Configuration,
    pub input_discriminant: Complex,
    /// Roots `(a1, .., a4)` of the input, in canonical order.
    pub input_roots: Configuration,
}

/// `b1 = (a1-a2-a3+a4)^2/4`, `b2 = (a1-a2+a3-a4)^2/4`, `b3 = (a1+a2-a3-a4)^2/4`.
pub fn resolvent_values(a: [Complex; 4]) -> [Complex; 3] {
    let sq = |z: Complex| z * z / 4.0;
    [
        sq(a[0] - a[1] - a[2] + a[3]),
        sq(a[0] - a[1] + a[2] - a[3]),
        sq(a[0] + a[1] - a[2] - a[3]),
    ]
}

fn require_square_free(f: &MonicPolynomial, tol: &TolerancePolicy) -> Result<()> {
    let check = is_square_free(f, tol)?;
    if !check.square_free {
        return Err(Error::NotSquareFree {
            margin: check.margin,
        });
    }
    Ok(())
}

/// The quartic resolvent, computed from the numerical roots of `f`.
pub fn resolve_quartic(f: &MonicPolynomial, tol: &TolerancePolicy) -> Result<ResolventResult> {
    if f.degree() != 4 {
        return Err(Error::InvalidInput(format!(
            "resolvent needs a quartic, got degree {}",
            f.degree()
        )));
    }
    require_square_free(f, tol)?;
    let a = roots(f, tol)?.to_ordered();
    let pts: [Complex; 4] = a.points().try_into().expect("quartic has four roots");
    let b = Configuration::ordered(resolvent_values(pts).to_vec())?;
    Ok(ResolventResult {
        output: from_roots(&b),
        b_values: b,
        input_discriminant: discriminant(f)?,
        input_roots: a,
    })
}

/// `R_d = Delta^d R`, realized by scaling the resolvent roots by `Delta^d`
/// (equivalently `a_k -> Delta^(dk) a_k`). `d = 0` returns `R(f)` unchanged.
pub fn resolvent_d(f: &MonicPolynomial, d: u32, tol: &TolerancePolicy) -> Result<MonicPolynomial> {
    let r = resolve_quartic(f, tol)?;
    if d == 0 {
        return Ok(r.output);
    }
    let s = r.input_discriminant.powu(d);
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::IllConditioned(format!(
            "discriminant power Delta^{d} overflows"
        )));
    }
    let scaled = Configuration::ordered(r.b_values.points().iter().map(|b| b * s).collect())?;
    Ok(from_roots(&scaled))
}

/// `Phi_n({z_i}) = {z_i} + {sum |z_i| + 1}`; the new point has modulus larger
/// than every `z_i`, so distinctness is preserved.
pub fn phi_disjoin(c: &Configuration, tol: &TolerancePolicy) -> Result<Configuration> {
    if c.is_empty() {
        return Err(Error::InvalidInput("configuration must be nonempty".into()));
    }
    c.require_distinct(tol)?;
    let extra: f64 = c.points().iter().map(|z| z.norm()).sum::<f64>() + 1.0;
    let mut pts = c.points().to_vec();
    pts.push(Complex::new(extra, 0.0));
    Configuration::new(pts, c.is_ordered())
}

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

/// Parameters of `Psi_k`: the torsion order and the projection
/// `(x, y) -> x + tau y` used to place torsion points in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorsionMapSpec {
    pub k: usize,
    #[serde(default = "one")]
    pub projection_tau: Complex,
}

impl TorsionMapSpec {
    pub fn new(k: usize) -> Result<Self> {
        Self::with_tau(k, one())
    }

    pub fn with_tau(k: usize, projection_tau: Complex) -> Result<Self> {
        let spec = Self { k, projection_tau };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidInput("torsion order k must be >= 2".into()));
        }
        if !(self.projection_tau.re.is_finite() && self.projection_tau.im.is_finite()) {
            return Err(Error::InvalidInput("projection tau must be finite".into()));
        }
        Ok(())
    }
}

/// `Psi_k`: the nonzero `k`-torsion points of `y^2 = (x-l1)(x-l2)(x-l3)`,
/// projected to `x + tau y`, as an unordered configuration of `k^2 - 1`
/// points.
pub fn psi_torsion(
    lambda: &Configuration,
    spec: &TorsionMapSpec,
    tol: &TolerancePolicy,
) -> Result<Configuration> {
    spec.validate()?;
    if lambda.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "expected three branch points, got {}",
            lambda.len()
        )));
    }
    let curve = WeierstrassCurve::new(lambda, tol)?;
    let pts = torsion_points(&curve, spec.k, tol)?;
    let projected: Vec<Complex> = pts
        .iter()
        .map(|p| match *p {
            CurvePoint::Affine { x, y } => x + spec.projection_tau * y,
            CurvePoint::Infinity => unreachable!("torsion_points excludes the origin"),
        })
        .collect();
    let out = Configuration::unordered(projected)?;
    if !out.is_distinct(tol) {
        return Err(Error::ProjectionCollision {
            distance: out.separation(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn close(p: &MonicPolynomial, expected: &[Complex], eps: f64) -> bool {
        p.coeffs().len() == expected.len()
            && p.coeffs()
                .iter()
                .zip(expected)
                .all(|(a, b)| (a - b).norm() <= eps)
    }

    #[test]
    fn resolvent_of_z4_minus_1() {
        let f = MonicPolynomial::from_real(&[0.0, 0.0, 0.0, -1.0]).unwrap();
        let r = resolve_quartic(&f, &tol()).unwrap();
        assert!(close(
            &r.output,
            &[c(0.0, 0.0), c(4.0, 0.0), c(0.0, 0.0)],
            1e-12
        ));
        assert!((r.input_discriminant - c(-256.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn resolvent_of_roots_0123() {
        let f = from_roots(&Configuration::from_real(&[0.0, 1.0, 2.0, 3.0], false).unwrap());
        let r = resolve_quartic(&f, &tol()).unwrap();
        assert!(close(
            &r.output,
            &[c(-5.0, 0.0), c(4.0, 0.0), c(0.0, 0.0)],
            1e-10
        ));
        let b = r.b_values.to_unordered();
        let expected = Configuration::from_real(&[0.0, 1.0, 4.0], false).unwrap();
        assert!(b.matching_distance(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn b_differences_factor() {
        let a = [c(0.3, -1.0), c(2.0, 0.5), c(-1.2, 0.7), c(0.1, 0.1)];
        let b = resolvent_values(a);
        let lhs = b[0] - b[1];
        let rhs = (a[3] - a[2]) * (a[0] - a[1]);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn twisted_resolvent() {
        let f = MonicPolynomial::from_real(&[0.0, 0.0, 0.0, -1.0]).unwrap();
        let r0 = resolvent_d(&f, 0, &tol()).unwrap();
        assert_eq!(r0, resolve_quartic(&f, &tol()).unwrap().output);
        let r1 = resolvent_d(&f, 1, &tol()).unwrap();
        assert!(close(
            &r1,
            &[c(0.0, 0.0), c(262144.0, 0.0), c(0.0, 0.0)],
            1e-6
        ));
        let double = MonicPolynomial::from_real(&[-2.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            resolvent_d(&double, 1, &tol()),
            Err(Error::NotSquareFree { .. })
        ));
    }

    #[test]
    fn disjoining_examples() {
        let t = tol();
        let out = phi_disjoin(&Configuration::from_real(&[0.0], false).unwrap(), &t).unwrap();
        assert_eq!(out, Configuration::from_real(&[0.0, 1.0], false).unwrap());
        let out = phi_disjoin(&Configuration::from_real(&[1.0, -1.0], false).unwrap(), &t).unwrap();
        assert_eq!(
            out,
            Configuration::from_real(&[1.0, -1.0, 3.0], false).unwrap()
        );
        let out = phi_disjoin(&Configuration::unordered(vec![c(0.0, 2.0)]).unwrap(), &t).unwrap();
        assert_eq!(
            out,
            Configuration::unordered(vec![c(0.0, 2.0), c(3.0, 0.0)]).unwrap()
        );
    }

    #[test]
    fn torsion_map_examples() {
        let t = tol();
        let l = Configuration::from_real(&[-1.0, 0.0, 1.0], false).unwrap();
        let two = psi_torsion(&l, &TorsionMapSpec::new(2).unwrap(), &t).unwrap();
        assert!(two.matching_distance(&l).unwrap() < 1e-12);
        let three = psi_torsion(&l, &TorsionMapSpec::new(3).unwrap(), &t).unwrap();
        assert_eq!(three.len(), 8);
        let bad = Configuration::from_real(&[0.0, 0.0, 1.0], false).unwrap();
        assert!(matches!(
            psi_torsion(&bad, &TorsionMapSpec::new(3).unwrap(), &t),
            Err(Error::NotDistinct { .. })
        ));
        assert!(TorsionMapSpec::new(1).is_err());
    }

    #[test]
    fn three_torsion_x_coordinates() {
        let l = Configuration::from_real(&[-1.0, 0.0, 1.0], false).unwrap();
        let e = WeierstrassCurve::new(&l, &tol()).unwrap();
        let psi3 = |x: Complex| 3.0 * x.powu(4) - 6.0 * x * x - 1.0;
        for p in torsion_points(&e, 3, &tol()).unwrap() {
            if let CurvePoint::Affine { x, .. } = p {
                assert!(psi3(x).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn resolvent_result_json() {
        let f = MonicPolynomial::from_real(&[0.0, 0.0, 0.0, -1.0]).unwrap();
        let r = resolve_quartic(&f, &tol()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["degree"], 3);
        assert!(v["b_values"]["points"].is_array());
        assert!(v["input_discriminant"].is_array());
        let back: ResolventResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
