use super::{roots, Complex, MonicPolynomial, Polynomial, TolerancePolicy};
use crate::error::{Error, Result};

/// Determinant by LU factorization with partial pivoting. Consumes the
/// row-major matrix.
pub fn determinant(mut m: Vec<Vec<Complex>>) -> Complex {
    let n = m.len();
    let mut det = Complex::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap();
        if m[pivot][col] == Complex::new(0.0, 0.0) {
            return Complex::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        let (top, below) = m.split_at_mut(col + 1);
        let pivot_row = &top[col][col + 1..];
        for row in below {
            let factor = row[col] / p;
            if factor == Complex::new(0.0, 0.0) {
                continue;
            }
            for (x, v) in row[col + 1..].iter_mut().zip(pivot_row) {
                *x -= factor * v;
            }
        }
    }
    det
}

/// Determinant of the Sylvester matrix of two polynomials given by their
/// coefficients from the leading term down. The formal degrees are the slice
/// lengths minus one, so leading zeros are allowed.
pub fn sylvester_determinant(p: &[Complex], q: &[Complex]) -> Complex {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return Complex::new(1.0, 0.0);
    }
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![Complex::new(0.0, 0.0); size];
        row[shift..shift + m + 1].copy_from_slice(p);
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Complex::new(0.0, 0.0); size];
        row[shift..shift + n + 1].copy_from_slice(q);
        rows.push(row);
    }
    determinant(rows)
}

/// Resultant of two polynomials of degree at least one.
pub fn resultant(p: &Polynomial, q: &Polynomial) -> Result<Complex> {
    match (p.degree(), q.degree()) {
        (Some(m), Some(n)) if m >= 1 && n >= 1 => {
            Ok(sylvester_determinant(&p.descending(m), &q.descending(n)))
        }
        _ => Err(Error::InvalidInput("resultant needs degrees >= 1".into())),
    }
}

/// `(-1)^(n(n-1)/2) Res(P, P')`, normalized so that `z^2 + bz + c` has
/// discriminant `b^2 - 4c`; equals the product of squared root differences.
pub fn discriminant(p: &MonicPolynomial) -> Result<Complex> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::InvalidInput("discriminant needs degree >= 2".into()));
    }
    let res = resultant(&p.to_polynomial(), &p.derivative())?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareFreeCheck {
    pub square_free: bool,
    /// `|discriminant|`
    pub margin: f64,
    /// Value `margin` had to exceed: the uncertainty of the discriminant
    /// implied by perturbing each coefficient by `root_tol` relative.
    pub threshold: f64,
    /// Root separation over root diameter (0 when roots could not be computed).
    pub separation_ratio: f64,
}

/// Relative uncertainty of `prod (r_i - r_j)^2` when every root moves by its
/// first-order sensitivity `root_tol * sum |a_k| |r|^(n-k) / |P'(r)|`.
fn discriminant_sensitivity(p: &MonicPolynomial, r: &[Complex], tol: &TolerancePolicy) -> f64 {
    let mut kappa = 0.0;
    for (i, &ri) in r.iter().enumerate() {
        let mut dp = Complex::new(1.0, 0.0);
        let mut inv_sum = 0.0;
        for (j, &rj) in r.iter().enumerate() {
            if i != j {
                dp *= ri - rj;
                inv_sum += 1.0 / (ri - rj).norm();
            }
        }
        let shift = tol.root_tol * p.abs_eval(ri.norm()) / dp.norm();
        kappa += 2.0 * shift * inv_sum;
    }
    if kappa.is_nan() {
        f64::INFINITY
    } else {
        kappa
    }
}

/// Square-free iff `|disc|` exceeds its own uncertainty under relative
/// coefficient perturbations of size `root_tol`, and the computed roots are
/// distinct relative to their diameter.
pub fn is_square_free(p: &MonicPolynomial, tol: &TolerancePolicy) -> Result<SquareFreeCheck> {
    let margin = discriminant(p)?.norm();
    let (distinct, separation_ratio, threshold) = match roots(p, tol) {
        Ok(r) => (
            r.is_distinct(tol),
            r.separation() / r.diameter(),
            match discriminant_sensitivity(p, r.points(), tol) {
                k if k.is_finite() => margin * k,
                _ => f64::INFINITY,
            },
        ),
        Err(_) => (false, 0.0, f64::INFINITY),
    };
    Ok(SquareFreeCheck {
        square_free: margin > threshold && distinct,
        margin,
        threshold,
        separation_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::{from_roots, Configuration};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn resultant_of_linear_factors() {
        let (a, b) = (c(2.0, 1.0), c(-0.5, 3.0));
        let r = resultant(&Polynomial::linear_factor(a), &Polynomial::linear_factor(b)).unwrap();
        assert!((r - (a - b)).norm() < 1e-15);
    }

    #[test]
    fn resultant_examples() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let z = Polynomial::from_real(&[0.0, 1.0]);
        assert!((resultant(&p, &z).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(resultant(&p, &p).unwrap(), c(0.0, 0.0));
        assert!(resultant(&p, &Polynomial::constant(c(1.0, 0.0))).is_err());
    }

    #[test]
    fn determinant_small() {
        let m = vec![
            vec![c(2.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(3.0, 0.0)],
        ];
        assert!((determinant(m) - c(5.0, 0.0)).norm() < 1e-15);
        let singular = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ];
        assert!(determinant(singular).norm() < 1e-15);
    }

    #[test]
    fn discriminant_examples() {
        let p = MonicPolynomial::from_real(&[0.0, -1.0]).unwrap();
        assert!((discriminant(&p).unwrap() - c(4.0, 0.0)).norm() < 1e-14);
        let q = MonicPolynomial::from_real(&[0.0, -1.0, 0.0]).unwrap();
        assert!((discriminant(&q).unwrap() - c(4.0, 0.0)).norm() < 1e-13);
        let r = MonicPolynomial::from_real(&[0.0, 0.0]).unwrap();
        assert_eq!(discriminant(&r).unwrap(), c(0.0, 0.0));
        assert!(discriminant(&MonicPolynomial::from_real(&[1.0]).unwrap()).is_err());
    }

    #[test]
    fn quartic_binomial_discriminant() {
        // z^4 - 1 has discriminant 256 * (-1)^3
        let p = MonicPolynomial::from_real(&[0.0, 0.0, 0.0, -1.0]).unwrap();
        assert!((discriminant(&p).unwrap() - c(-256.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn square_free_examples() {
        let tol = TolerancePolicy::default();
        let a = is_square_free(&MonicPolynomial::from_real(&[0.0, -1.0]).unwrap(), &tol).unwrap();
        assert!(a.square_free);
        assert!((a.margin - 4.0).abs() < 1e-13);
        let b = is_square_free(&MonicPolynomial::from_real(&[0.0, 0.0]).unwrap(), &tol).unwrap();
        assert!(!b.square_free);
        let d = is_square_free(
            &MonicPolynomial::from_real(&[0.0, -1.0, 0.0]).unwrap(),
            &tol,
        )
        .unwrap();
        assert!(d.square_free);
        assert!((d.margin - 4.0).abs() < 1e-12);
        // (z-1)^3 with exact coefficients: the root cluster is rounding noise
        let e = is_square_free(
            &MonicPolynomial::from_real(&[-3.0, 3.0, -1.0]).unwrap(),
            &tol,
        )
        .unwrap();
        assert!(!e.square_free);
    }

    #[test]
    fn square_free_gate_is_translation_aware() {
        let tol = TolerancePolicy::default();
        let spread = Configuration::from_real(&[0.4, 1.2, 2.0, 2.8, 3.6], false).unwrap();
        assert!(
            is_square_free(&from_roots(&spread), &tol)
                .unwrap()
                .square_free
        );
        let far = Configuration::from_real(&[100.0, 101.0, 102.0], false).unwrap();
        assert!(is_square_free(&from_roots(&far), &tol).unwrap().square_free);
        let cluster = Configuration::from_real(&[1.1, 1.1, 1.1], false).unwrap();
        assert!(
            !is_square_free(&from_roots(&cluster), &tol)
                .unwrap()
                .square_free
        );
        let near = Configuration::from_real(&[1.0, 1.0 + 1e-11, 2.0], false).unwrap();
        assert!(
            !is_square_free(&from_roots(&near), &tol)
                .unwrap()
                .square_free
        );
    }
}
