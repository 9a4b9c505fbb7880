use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{check_finite, Complex};
use crate::error::{Error, Result};

/// A general (not necessarily monic) polynomial, coefficients stored from the
/// constant term upwards. Exact zero leading coefficients are trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * z^k`.
    pub fn monomial(c: Complex, k: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `z - r`
    pub fn linear_factor(r: Complex) -> Self {
        Self::new(vec![-r, Complex::new(1.0, 0.0)])
    }

    /// Coefficients from the constant term upwards.
    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        (0..e).fold(Polynomial::constant(Complex::new(1.0, 0.0)), |acc, _| {
            &acc * self
        })
    }

    /// Coefficients from the leading term downwards, padded with leading zeros
    /// up to the formal degree `deg`.
    pub fn descending(&self, deg: usize) -> Vec<Complex> {
        (0..=deg).rev().map(|k| self.coeff(k)).collect()
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Divides by the leading coefficient.
    pub fn to_monic(&self) -> Result<MonicPolynomial> {
        match self.degree() {
            None | Some(0) => Err(Error::InvalidInput(
                "cannot normalize a constant polynomial to a monic one".into(),
            )),
            Some(n) => {
                let lead = self.leading();
                MonicPolynomial::new((0..n).rev().map(|k| self.coeffs[k] / lead).collect())
            }
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A point of `Poly_n` (before the square-free check): the monic polynomial
/// `z^n + a1 z^(n-1) + ... + an`, stored as `[a1, ..., an]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MonicRepr", into = "MonicRepr")]
pub struct MonicPolynomial {
    coeffs: Vec<Complex>,
}

#[derive(Serialize, Deserialize)]
struct MonicRepr {
    degree: usize,
    coeffs: Vec<Complex>,
}

impl TryFrom<MonicRepr> for MonicPolynomial {
    type Error = Error;
    fn try_from(repr: MonicRepr) -> Result<Self> {
        if repr.degree != repr.coeffs.len() {
            return Err(Error::InvalidInput(format!(
                "degree {} does not match {} coefficients",
                repr.degree,
                repr.coeffs.len()
            )));
        }
        MonicPolynomial::new(repr.coeffs)
    }
}

impl From<MonicPolynomial> for MonicRepr {
    fn from(p: MonicPolynomial) -> Self {
        MonicRepr {
            degree: p.coeffs.len(),
            coeffs: p.coeffs,
        }
    }
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "monic polynomial needs degree >= 1".into(),
            ));
        }
        check_finite(&coeffs)?;
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `[a1, ..., an]`
    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .fold(Complex::new(1.0, 0.0), |acc, a| acc * z + a)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let mut p = Complex::new(1.0, 0.0);
        let mut dp = Complex::new(0.0, 0.0);
        for a in &self.coeffs {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    /// Formal derivative as a general polynomial.
    pub fn derivative(&self) -> Polynomial {
        self.to_polynomial().derivative()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let mut c: Vec<Complex> = self.coeffs.iter().rev().copied().collect();
        c.push(Complex::new(1.0, 0.0));
        Polynomial::new(c)
    }

    /// `max_k |a_k|^(1/k)`; every root has modulus at most twice this.
    pub fn root_scale(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm().powf(1.0 / (k + 1) as f64))
            .fold(0.0, f64::max)
    }

    /// Sum of `|a_k| |z|^(n-k)` including the leading term: the Horner
    /// condition number scale at `z`.
    pub fn abs_eval(&self, z: f64) -> f64 {
        self.coeffs.iter().fold(1.0, |acc, a| acc * z + a.norm())
    }

    /// Convex combination `(1-s) self + s other` of two polynomials of equal degree.
    pub fn lerp(&self, other: &MonicPolynomial, s: f64) -> MonicPolynomial {
        debug_assert_eq!(self.degree(), other.degree());
        MonicPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * (1.0 - s) + b * s)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        let p = MonicPolynomial::from_real(&[0.0, -1.0]).unwrap();
        assert_eq!(p.evaluate(c(0.0, 0.0)), c(-1.0, 0.0));
        assert_eq!(p.evaluate(c(1.0, 0.0)), c(0.0, 0.0));
        let q = MonicPolynomial::from_real(&[0.0, 4.0, 0.0]).unwrap();
        assert_eq!(q.evaluate(c(0.0, 2.0)), c(0.0, 0.0));
    }

    #[test]
    fn derivative_examples() {
        let p = MonicPolynomial::from_real(&[0.0, -1.0]).unwrap();
        assert_eq!(p.derivative(), Polynomial::from_real(&[0.0, 2.0]));
        let q = MonicPolynomial::from_real(&[0.0, 4.0, 0.0]).unwrap();
        assert_eq!(q.derivative(), Polynomial::from_real(&[4.0, 0.0, 3.0]));
        let r = MonicPolynomial::from_real(&[-5.0]).unwrap();
        assert_eq!(r.derivative(), Polynomial::from_real(&[1.0]));
    }

    #[test]
    fn degree_zero_is_rejected() {
        assert!(MonicPolynomial::new(vec![]).is_err());
        assert!(MonicPolynomial::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn value_and_derivative_agree_with_separate_evaluation() {
        let p = MonicPolynomial::new(vec![c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1)]).unwrap();
        let z = c(0.4, 1.3);
        let (v, d) = p.eval_with_derivative(z);
        assert!((v - p.evaluate(z)).norm() < 1e-14);
        assert!((d - p.derivative().eval(z)).norm() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let p = MonicPolynomial::from_real(&[0.0, -1.0]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"degree":2,"coeffs":[[0.0,0.0],[-1.0,0.0]]}"#);
        let back: MonicPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(
            serde_json::from_str::<MonicPolynomial>(r#"{"degree":3,"coeffs":[[1,0]]}"#).is_err()
        );
    }

    #[test]
    fn arithmetic() {
        let a = Polynomial::from_real(&[-1.0, 1.0]);
        let b = Polynomial::from_real(&[1.0, 1.0]);
        assert_eq!(&a * &b, Polynomial::from_real(&[-1.0, 0.0, 1.0]));
        assert_eq!(&a + &b, Polynomial::from_real(&[0.0, 2.0]));
        assert_eq!(&a - &a, Polynomial::zero());
        assert_eq!(a.pow(2), Polynomial::from_real(&[1.0, -2.0, 1.0]));
        assert_eq!(
            Polynomial::from_real(&[2.0, 0.0, 4.0])
                .to_monic()
                .unwrap()
                .coeffs(),
            &[c(0.0, 0.0), c(0.5, 0.0)]
        );
    }
}
