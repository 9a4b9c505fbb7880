//! A smooth plane cubic with a marked flex, moved to Weierstrass form so its
//! torsion can be computed and pulled back to the original curve.

use super::arithmetic::jordan_totient;
use super::intersect::apply;
use super::ternary::{hessian, relative_residual, ProjectivePoint, TernaryForm};
use super::weierstrass::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::poly_core::{Complex, MonicPolynomial, TolerancePolicy};

const ON_CURVE: f64 = 1e-8;

/// The projective frame and affine changes taking a cubic with a marked flex
/// to `y^2 = x^3 + b x^2 + c x + d`, flex at infinity.
#[derive(Debug, Clone)]
pub struct WeierstrassModel {
    /// Columns: a second point on the flex tangent, the flex, a point off the
    /// tangent. Maps `(u : v : w)` to the original coordinates.
    frame: [[Complex; 3]; 3],
    kappa: Complex,
    a1: Complex,
    a3: Complex,
    curve: WeierstrassCurve,
}

fn dot(a: &[Complex; 3], b: &[Complex; 3]) -> Complex {
    (0..3).map(|i| a[i] * b[i]).sum()
}

fn hermitian(a: &[Complex; 3], b: &[Complex; 3]) -> Complex {
    (0..3).map(|i| a[i].conj() * b[i]).sum()
}

fn norm(a: &[Complex; 3]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl WeierstrassModel {
    pub fn new(f: &TernaryForm, flex: &ProjectivePoint, tol: &TolerancePolicy) -> Result<Self> {
        if f.degree() != 3 {
            return Err(Error::InvalidInput(
                "Weierstrass reduction needs a cubic".into(),
            ));
        }
        let p = *flex.coords();
        let h = hessian(f)?;
        let (rf, rh) = (relative_residual(f, &p), relative_residual(&h, &p));
        if rf > ON_CURVE || rh > ON_CURVE {
            return Err(Error::FlexNotOnCurve(format!(
                "residuals {rf:e} (curve) and {rh:e} (Hessian)"
            )));
        }
        let tangent: [Complex; 3] = std::array::from_fn(|i| f.partial(i).eval(&p));
        if norm(&tangent) == 0.0 {
            return Err(Error::NotSmooth);
        }
        // a second point on the tangent line, orthogonal to the flex
        let pivot = (0..3)
            .max_by(|&a, &b| tangent[a].norm().total_cmp(&tangent[b].norm()))
            .unwrap();
        let pp = hermitian(&p, &p);
        let q = (0..3)
            .filter(|&j| j != pivot)
            .map(|j| {
                let mut u = [Complex::new(0.0, 0.0); 3];
                u[j] = Complex::new(1.0, 0.0);
                u[pivot] = -tangent[j] / tangent[pivot];
                let proj = hermitian(&p, &u) / pp;
                let v: [Complex; 3] = std::array::from_fn(|i| u[i] - proj * p[i]);
                v
            })
            .max_by(|a, b| norm(a).total_cmp(&norm(b)))
            .unwrap();
        let r = tangent.map(|t| t.conj());
        let frame: [[Complex; 3]; 3] = std::array::from_fn(|i| [q[i], p[i], r[i]]);
        debug_assert!(dot(&tangent, &q).norm() < 1e-9 * norm(&tangent) * norm(&q));

        let g = f.substitute(&frame);
        let scale = g.norm_inf();
        for e in [[0, 3, 0], [1, 2, 0], [2, 1, 0]] {
            if g.coeff(e).norm() > 1e-7 * scale {
                return Err(Error::IllConditioned(format!(
                    "flex frame leaves monomial {e:?} with coefficient {:e}",
                    g.coeff(e).norm()
                )));
            }
        }
        let alpha = g.coeff([0, 2, 1]);
        let cubic = g.coeff([3, 0, 0]);
        if alpha.norm() <= 1e-9 * scale || cubic.norm() <= 1e-9 * scale {
            return Err(Error::NotSmooth);
        }
        let kappa = -cubic / alpha;
        let a1 = g.coeff([1, 1, 1]) / alpha;
        let a3 = kappa * g.coeff([0, 1, 2]) / alpha;
        let a2 = -g.coeff([2, 0, 1]) / alpha;
        let a4 = -kappa * g.coeff([1, 0, 2]) / alpha;
        let a6 = -kappa * kappa * g.coeff([0, 0, 3]) / alpha;
        let weierstrass = MonicPolynomial::new(vec![
            a2 + a1 * a1 / 4.0,
            a4 + a1 * a3 / 2.0,
            a6 + a3 * a3 / 4.0,
        ])?;
        let curve = WeierstrassCurve::from_cubic(&weierstrass, tol)?;
        Ok(Self {
            frame,
            kappa,
            a1,
            a3,
            curve,
        })
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    /// The point of the original cubic corresponding to `pt`; infinity goes
    /// to the marked flex.
    pub fn pull_back(&self, pt: &CurvePoint) -> Result<ProjectivePoint> {
        let uvw = match *pt {
            CurvePoint::Infinity => [
                Complex::new(0.0, 0.0),
                Complex::new(1.0, 0.0),
                Complex::new(0.0, 0.0),
            ],
            CurvePoint::Affine { x, y } => {
                let y_long = y - (self.a1 * x + self.a3) / 2.0;
                [x / self.kappa, y_long / self.kappa, Complex::new(1.0, 0.0)]
            }
        };
        ProjectivePoint::new(apply(&self.frame, &uvw))
    }
}

fn pull_back_all(
    f: &TernaryForm,
    model: &WeierstrassModel,
    pts: &[CurvePoint],
) -> Result<Vec<ProjectivePoint>> {
    pts.iter()
        .map(|pt| {
            let q = model.pull_back(pt)?;
            let r = relative_residual(f, q.coords());
            if r > ON_CURVE {
                return Err(Error::IllConditioned(format!(
                    "pulled-back torsion point off the cubic (residual {r:e})"
                )));
            }
            Ok(q)
        })
        .collect()
}

/// The `9k^2` points of `3k`-torsion of the cubic for the group law with the
/// given flex as identity. For `k = 1` these are the nine flexes.
pub fn cubic_torsion(
    f: &TernaryForm,
    k: usize,
    flex: &ProjectivePoint,
    tol: &TolerancePolicy,
) -> Result<Vec<ProjectivePoint>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    let model = WeierstrassModel::new(f, flex, tol)?;
    let pts = model.curve.full_torsion(3 * k, tol)?;
    pull_back_all(f, &model, &pts)
}

/// Points of `3m`-torsion that are not `3d`-torsion for any proper divisor
/// `d` of `m`; there are exactly `9 J_2(m)` of them.
pub fn torsion_stratum(
    f: &TernaryForm,
    m: usize,
    flex: &ProjectivePoint,
    tol: &TolerancePolicy,
) -> Result<Vec<ProjectivePoint>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    let model = WeierstrassModel::new(f, flex, tol)?;
    let n = 3 * m;
    let curve = &model.curve;
    let proper: Vec<usize> = (1..m).filter(|d| m.is_multiple_of(*d)).collect();
    let mut stratum = Vec::new();
    for pt in curve.full_torsion(n, tol)? {
        let order = curve.order(&pt, n).ok_or_else(|| {
            Error::IllConditioned("torsion point with no order dividing 3m".into())
        })?;
        if proper.iter().all(|d| (3 * d) % order != 0) {
            stratum.push(pt);
        }
    }
    let expected = 9 * jordan_totient(m as u64) as usize;
    if stratum.len() != expected {
        return Err(Error::CardinalityMismatch {
            expected,
            found: stratum.len(),
        });
    }
    pull_back_all(f, &model, &stratum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_curves::{flex_points, hausdorff};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn fermat_flexes() -> Vec<ProjectivePoint> {
        flex_points(&TernaryForm::fermat_cubic(), &tol())
            .unwrap()
            .into_iter()
            .map(|f| f.point)
            .collect()
    }

    #[test]
    fn three_torsion_is_the_flex_set() {
        let flexes = fermat_flexes();
        let t = cubic_torsion(&TernaryForm::fermat_cubic(), 1, &flexes[0], &tol()).unwrap();
        assert_eq!(t.len(), 9);
        assert!(hausdorff(&t, &flexes) < 1e-9);
    }

    #[test]
    fn six_torsion_has_36_points() {
        let flexes = fermat_flexes();
        let t = cubic_torsion(&TernaryForm::fermat_cubic(), 2, &flexes[3], &tol()).unwrap();
        assert_eq!(t.len(), 36);
    }

    #[test]
    fn strata_sizes() {
        let f = TernaryForm::fermat_cubic();
        let flex = fermat_flexes()[0];
        assert_eq!(torsion_stratum(&f, 1, &flex, &tol()).unwrap().len(), 9);
        assert_eq!(torsion_stratum(&f, 2, &flex, &tol()).unwrap().len(), 27);
        assert_eq!(torsion_stratum(&f, 3, &flex, &tol()).unwrap().len(), 72);
    }

    #[test]
    fn non_flex_is_rejected() {
        let f = TernaryForm::fermat_cubic();
        // on the curve but not a flex
        let c = Complex::new(2.0f64, 0.0).cbrt();
        let p = ProjectivePoint::new([Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), -c]).unwrap();
        assert!(matches!(
            cubic_torsion(&f, 1, &p, &tol()),
            Err(Error::FlexNotOnCurve(_))
        ));
    }
}
