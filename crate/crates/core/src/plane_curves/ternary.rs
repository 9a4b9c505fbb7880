use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly_core::{finite, Complex};

/// Exponents of `x^i y^j z^k`.
pub type Exponent = [u32; 3];

const ZERO: Complex = Complex::new(0.0, 0.0);

/// A homogeneous polynomial of degree `d` in three variables, i.e. a plane
/// curve in P^2. Terms with zero coefficient are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct TernaryForm {
    degree: u32,
    terms: BTreeMap<Exponent, Complex>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Exponent,
    c: Complex,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    degree: u32,
    terms: Vec<TermRepr>,
}

impl TryFrom<FormRepr> for TernaryForm {
    type Error = Error;
    fn try_from(r: FormRepr) -> Result<Self> {
        TernaryForm::new(r.degree, r.terms.into_iter().map(|t| (t.exp, t.c)))
    }
}

impl From<TernaryForm> for FormRepr {
    fn from(f: TernaryForm) -> Self {
        FormRepr {
            degree: f.degree,
            terms: f
                .terms
                .into_iter()
                .map(|(exp, c)| TermRepr { exp, c })
                .collect(),
        }
    }
}

impl TernaryForm {
    /// Validated constructor: every exponent triple sums to `degree` and at
    /// least one coefficient is nonzero. Repeated exponents are summed.
    pub fn new(degree: u32, terms: impl IntoIterator<Item = (Exponent, Complex)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::InvalidInput(format!(
                    "monomial {e:?} does not have degree {degree}"
                )));
            }
            if !finite(c) {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
            *map.entry(e).or_insert(ZERO) += c;
        }
        map.retain(|_, c| *c != ZERO);
        if map.is_empty() {
            return Err(Error::InvalidInput(
                "form has no nonzero coefficient".into(),
            ));
        }
        Ok(Self { degree, terms: map })
    }

    pub fn from_real(degree: u32, terms: &[(Exponent, f64)]) -> Result<Self> {
        Self::new(
            degree,
            terms.iter().map(|&(e, c)| (e, Complex::new(c, 0.0))),
        )
    }

    /// `x^3 + y^3 + z^3`
    pub fn fermat_cubic() -> Self {
        Self::from_real(3, &[([3, 0, 0], 1.0), ([0, 3, 0], 1.0), ([0, 0, 3], 1.0)]).unwrap()
    }

    /// Possibly-zero form used for intermediate results.
    fn raw(degree: u32, mut terms: BTreeMap<Exponent, Complex>) -> Self {
        terms.retain(|_, c| *c != ZERO);
        Self { degree, terms }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Complex> {
        &self.terms
    }

    pub fn coeff(&self, e: Exponent) -> Complex {
        self.terms.get(&e).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, p: &[Complex; 3]) -> Complex {
        self.terms
            .iter()
            .map(|(e, c)| c * p[0].powu(e[0]) * p[1].powu(e[1]) * p[2].powu(e[2]))
            .sum()
    }

    /// Partial derivative in variable `var` (0, 1, 2 for x, y, z).
    pub fn partial(&self, var: usize) -> TernaryForm {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = *e;
            f[var] -= 1;
            *out.entry(f).or_insert(ZERO) += c * e[var] as f64;
        }
        Self::raw(self.degree.saturating_sub(1), out)
    }

    pub fn gradient(&self) -> [TernaryForm; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    pub fn add(&self, other: &TernaryForm) -> TernaryForm {
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        let mut out = self.terms.clone();
        for (e, c) in &other.terms {
            *out.entry(*e).or_insert(ZERO) += c;
        }
        Self::raw(degree, out)
    }

    pub fn scale(&self, s: Complex) -> TernaryForm {
        Self::raw(
            self.degree,
            self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        )
    }

    pub fn mul(&self, other: &TernaryForm) -> TernaryForm {
        let mut out = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                *out.entry(e).or_insert(ZERO) += ca * cb;
            }
        }
        Self::raw(self.degree + other.degree, out)
    }

    fn linear(row: &[Complex; 3]) -> TernaryForm {
        Self::raw(
            1,
            [
                ([1, 0, 0], row[0]),
                ([0, 1, 0], row[1]),
                ([0, 0, 1], row[2]),
            ]
            .into_iter()
            .collect(),
        )
    }

    fn one() -> TernaryForm {
        Self::raw(
            0,
            [([0, 0, 0], Complex::new(1.0, 0.0))].into_iter().collect(),
        )
    }

    /// The form `G(u) = F(M u)` for a 3x3 matrix `M` (row-major).
    pub fn substitute(&self, m: &[[Complex; 3]; 3]) -> TernaryForm {
        let lin = [
            Self::linear(&m[0]),
            Self::linear(&m[1]),
            Self::linear(&m[2]),
        ];
        let mut powers: [Vec<TernaryForm>; 3] = Default::default();
        for (v, l) in lin.iter().enumerate() {
            powers[v].push(Self::one());
            for k in 1..=self.degree as usize {
                let next = powers[v][k - 1].mul(l);
                powers[v].push(next);
            }
        }
        let mut out = Self::raw(self.degree, BTreeMap::new());
        for (e, c) in &self.terms {
            let term = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize])
                .scale(*c);
            out = out.add(&term);
        }
        out.degree = self.degree;
        out
    }

    /// Coefficients, as polynomials in `x`, of `F(x, y, 1)` grouped by powers
    /// of `y` and evaluated at `x0`: entry `j` is the coefficient of `y^j`.
    pub(crate) fn chart_y_coefficients(&self, x0: Complex) -> Vec<Complex> {
        let mut out = vec![ZERO; self.degree as usize + 1];
        for (e, c) in &self.terms {
            out[e[1] as usize] += c * x0.powu(e[0]);
        }
        out
    }
}

/// Determinant of the matrix of second partials.
pub fn hessian(f: &TernaryForm) -> Result<TernaryForm> {
    if f.degree < 2 {
        return Err(Error::InvalidInput("hessian needs degree >= 2".into()));
    }
    let g = f.gradient();
    let h: Vec<Vec<TernaryForm>> = g
        .iter()
        .map(|gi| (0..3).map(|j| gi.partial(j)).collect())
        .collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        h[a][c]
            .mul(&h[b][d])
            .add(&h[a][d].mul(&h[b][c]).scale(Complex::new(-1.0, 0.0)))
    };
    let det = h[0][0]
        .mul(&minor(1, 2, 1, 2))
        .add(
            &h[0][1]
                .mul(&minor(1, 2, 0, 2))
                .scale(Complex::new(-1.0, 0.0)),
        )
        .add(&h[0][2].mul(&minor(1, 2, 0, 1)));
    let mut det = det;
    det.degree = 3 * (f.degree - 2);
    Ok(det)
}

/// A point of P^2, normalized so that its first coordinate of maximal
/// modulus equals 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct ProjectivePoint {
    coords: [Complex; 3],
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    coords: [Complex; 3],
}

impl TryFrom<PointRepr> for ProjectivePoint {
    type Error = Error;
    fn try_from(r: PointRepr) -> Result<Self> {
        ProjectivePoint::new(r.coords)
    }
}

impl From<ProjectivePoint> for PointRepr {
    fn from(p: ProjectivePoint) -> Self {
        PointRepr { coords: p.coords }
    }
}

impl ProjectivePoint {
    pub fn new(coords: [Complex; 3]) -> Result<Self> {
        if coords.iter().any(|c| !finite(*c)) {
            return Err(Error::InvalidInput(
                "non-finite projective coordinate".into(),
            ));
        }
        let mut idx = 0;
        for i in 1..3 {
            if coords[i].norm() > coords[idx].norm() {
                idx = i;
            }
        }
        let pivot = coords[idx];
        if pivot == ZERO {
            return Err(Error::InvalidInput(
                "(0:0:0) is not a projective point".into(),
            ));
        }
        let mut c = coords.map(|v| v / pivot);
        c[idx] = Complex::new(1.0, 0.0);
        Ok(Self { coords: c })
    }

    pub fn from_real(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new([
            Complex::new(x, 0.0),
            Complex::new(y, 0.0),
            Complex::new(z, 0.0),
        ])
    }

    pub fn coords(&self) -> &[Complex; 3] {
        &self.coords
    }

    fn unit(&self) -> [Complex; 3] {
        let n = self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        self.coords.map(|c| c / n)
    }

    /// Chordal distance between the lines through the two points: the
    /// distance between unit representatives after optimal phase alignment.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        let a = self.unit();
        let b = other.unit();
        let inner: Complex = (0..3).map(|i| a[i].conj() * b[i]).sum();
        let phase = if inner.norm() > 0.0 {
            inner.conj() / inner.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        (0..3)
            .map(|i| (a[i] - b[i] * phase).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Hausdorff distance between two finite sets of projective points.
pub fn hausdorff(a: &[ProjectivePoint], b: &[ProjectivePoint]) -> f64 {
    let one_sided = |from: &[ProjectivePoint], to: &[ProjectivePoint]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| p.distance(q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_sided(a, b).max(one_sided(b, a))
}

/// `|F(p)|` relative to the coefficient size and `|p|^d`.
pub fn relative_residual(f: &TernaryForm, p: &[Complex; 3]) -> f64 {
    let norm = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    f.eval(p).norm() / (f.norm_inf().max(f64::MIN_POSITIVE) * norm.powi(f.degree() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn hessian_examples() {
        let h = hessian(&TernaryForm::fermat_cubic()).unwrap();
        assert_eq!(h, TernaryForm::from_real(3, &[([1, 1, 1], 216.0)]).unwrap());
        let conic =
            TernaryForm::from_real(2, &[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0)])
                .unwrap();
        let hc = hessian(&conic).unwrap();
        assert_eq!(hc.degree(), 0);
        assert_eq!(hc.coeff([0, 0, 0]), c(8.0));
        let xyz = TernaryForm::from_real(3, &[([1, 1, 1], 1.0)]).unwrap();
        assert_eq!(
            hessian(&xyz).unwrap(),
            TernaryForm::from_real(3, &[([1, 1, 1], 2.0)]).unwrap()
        );
    }

    #[test]
    fn constructor_validates() {
        assert!(TernaryForm::from_real(3, &[([1, 1, 0], 1.0)]).is_err());
        assert!(TernaryForm::from_real(2, &[([1, 1, 0], 0.0)]).is_err());
        let merged = TernaryForm::from_real(2, &[([1, 1, 0], 1.0), ([1, 1, 0], 2.0)]).unwrap();
        assert_eq!(merged.coeff([1, 1, 0]), c(3.0));
    }

    #[test]
    fn substitution_matches_pointwise_evaluation() {
        let f = TernaryForm::new(
            3,
            [
                ([2, 1, 0], Complex::new(0.5, 1.0)),
                ([0, 0, 3], c(-2.0)),
                ([1, 1, 1], Complex::new(0.0, 3.0)),
            ],
        )
        .unwrap();
        let m = [
            [c(1.0), Complex::new(0.0, 2.0), c(-1.0)],
            [c(0.5), c(1.0), c(0.0)],
            [Complex::new(1.0, 1.0), c(0.0), c(2.0)],
        ];
        let g = f.substitute(&m);
        let u = [Complex::new(0.3, -0.2), c(1.1), Complex::new(-0.7, 0.4)];
        let mu: [Complex; 3] = std::array::from_fn(|i| (0..3).map(|j| m[i][j] * u[j]).sum());
        assert!((g.eval(&u) - f.eval(&mu)).norm() < 1e-12);
    }

    #[test]
    fn projective_normalization_and_distance() {
        let p = ProjectivePoint::from_real(2.0, -4.0, 1.0).unwrap();
        assert_eq!(p.coords(), &[c(-0.5), c(1.0), c(-0.25)]);
        let q = ProjectivePoint::new([c(1.0), c(-2.0), c(0.5)].map(|v| v * Complex::new(0.0, 3.0)))
            .unwrap();
        assert!(p.distance(&q) < 1e-15);
        assert!(ProjectivePoint::from_real(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn json_shape() {
        let f = TernaryForm::from_real(3, &[([1, 1, 1], 2.0)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"degree":3,"terms":[{"exp":[1,1,1],"c":[2.0,0.0]}]}"#);
        assert_eq!(serde_json::from_str::<TernaryForm>(&s).unwrap(), f);
    }
}
