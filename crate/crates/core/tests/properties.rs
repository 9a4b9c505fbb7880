use std::collections::BTreeSet;

use approx::assert_relative_eq;
use cml::monodromy::Permutation;
use cml::plane_curves::{admissible_sizes, jordan_totient, CurvePoint, WeierstrassCurve};
use cml::poly_core::{discriminant, from_roots, is_square_free, roots};
use cml::poly_maps::{phi_disjoin, resolvent_values};
use cml::{Complex, Configuration, MonicPolynomial, TolerancePolicy};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn complex(radius: f64) -> impl Strategy<Value = Complex> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

/// Points in the unit disk at mutual distance at least `sep`.
fn separated(n: std::ops::RangeInclusive<usize>, sep: f64) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec(complex(1.0), n).prop_filter_map("points too close", move |pts| {
        let ok = pts
            .iter()
            .enumerate()
            .all(|(i, p)| pts[..i].iter().all(|q| (p - q).norm() >= sep));
        ok.then_some(pts)
    })
}

fn nearest(p: Complex, set: &[Complex]) -> f64 {
    set.iter()
        .map(|q| (p - q).norm())
        .fold(f64::INFINITY, f64::min)
}

fn pair_product(pts: &[Complex]) -> Complex {
    let mut acc = Complex::new(1.0, 0.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            acc *= (pts[i] - pts[j]).powu(2);
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn viete_round_trip(pts in separated(1..=10, 0.1)) {
        let c = Configuration::unordered(pts.clone()).unwrap();
        let back = roots(&from_roots(&c), &tol()).unwrap();
        prop_assert_eq!(back.len(), pts.len());
        for p in &pts {
            prop_assert!(nearest(*p, back.points()) <= 1e-9);
        }
    }

    #[test]
    fn discriminant_is_squared_root_differences(pts in separated(2..=7, 0.05)) {
        let p = from_roots(&Configuration::unordered(pts.clone()).unwrap());
        let d = discriminant(&p).unwrap();
        let oracle = pair_product(&pts);
        prop_assert!((d - oracle).norm() <= 1e-9 * oracle.norm().max(d.norm()));
    }

    #[test]
    fn viete_ignores_point_order(pts in separated(2..=8, 0.01), shift in 0usize..8) {
        let mut rotated = pts.clone();
        let len = rotated.len();
        rotated.rotate_left(shift % len);
        rotated.reverse();
        let a = from_roots(&Configuration::unordered(pts).unwrap());
        let b = from_roots(&Configuration::unordered(rotated).unwrap());
        prop_assert_eq!(a.coeffs(), b.coeffs());
    }

    #[test]
    fn low_degree_discriminants(b in complex(2.0), c in complex(2.0), d in complex(2.0)) {
        let quad = MonicPolynomial::new(vec![b, c]).unwrap();
        let closed = b * b - 4.0 * c;
        assert_relative_eq!(discriminant(&quad).unwrap().re, closed.re, epsilon = 1e-12, max_relative = 1e-12);
        assert_relative_eq!(discriminant(&quad).unwrap().im, closed.im, epsilon = 1e-12, max_relative = 1e-12);

        let cubic = MonicPolynomial::new(vec![b, c, d]).unwrap();
        let terms = [
            b * b * c * c,
            -4.0 * c * c * c,
            -4.0 * b * b * b * d,
            -27.0 * d * d,
            18.0 * b * c * d,
        ];
        let closed: Complex = terms.iter().sum();
        let scale: f64 = terms.iter().map(|t| t.norm()).sum();
        prop_assert!((discriminant(&cubic).unwrap() - closed).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn resolvent_differences_factor(a in prop::array::uniform4(complex(1.0))) {
        let b = resolvent_values(a);
        let cases = [
            (b[0] - b[1], (a[3] - a[2]) * (a[0] - a[1])),
            (b[0] - b[2], (a[0] - a[2]) * (a[3] - a[1])),
            (b[1] - b[2], (a[0] - a[3]) * (a[2] - a[1])),
        ];
        for (lhs, rhs) in cases {
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn resolvent_values_are_s4_invariant_as_a_set(
        a in prop::array::uniform4(complex(1.0)),
        perm in Just([0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let permuted = [a[perm[0]], a[perm[1]], a[perm[2]], a[perm[3]]];
        let e = |b: [Complex; 3]| {
            [b[0] + b[1] + b[2], b[0] * b[1] + b[0] * b[2] + b[1] * b[2], b[0] * b[1] * b[2]]
        };
        for (x, y) in e(resolvent_values(a)).iter().zip(e(resolvent_values(permuted))) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn phi_disjoin_output_is_separated(pts in separated(1..=6, 0.05)) {
        let c = Configuration::unordered(pts.clone()).unwrap();
        let out = phi_disjoin(&c, &tol()).unwrap();
        prop_assert_eq!(out.len(), pts.len() + 1);
        let far = out.points().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(pts.iter().all(|z| z.norm() < far));
        prop_assert!(out.is_distinct(&tol()));
        prop_assert!(is_square_free(&from_roots(&out), &tol()).unwrap().square_free);
    }

    #[test]
    fn permutation_laws(
        p in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        q in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        r in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let (p, q, r) = (Permutation::new(p).unwrap(), Permutation::new(q).unwrap(), Permutation::new(r).unwrap());
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert_eq!(p.then(&q).inverse(), q.inverse().then(&p.inverse()));
        let moved: usize = p.cycles().iter().map(Vec::len).sum();
        prop_assert_eq!(moved, p.images().iter().enumerate().filter(|(i, &x)| *i != x).count());
    }

    #[test]
    fn jordan_totient_divisor_sum(m in 1u64..400) {
        // sum over d | m of J_2(d) is m^2
        let total: u64 = (1..=m).filter(|d| m % d == 0).map(jordan_totient).sum();
        prop_assert_eq!(total, m * m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law_is_associative(
        lambda in separated(3..=3, 0.3),
        xs in prop::array::uniform3(complex(1.5)),
    ) {
        let e = WeierstrassCurve::new(&Configuration::unordered(lambda).unwrap(), &tol()).unwrap();
        let lift = |x: Complex| {
            let y = e.rhs(x).sqrt();
            CurvePoint::affine(x, y)
        };
        let [p, q, r] = xs.map(lift);
        let left = e.add(&e.add(&p, &q), &r);
        let right = e.add(&p, &e.add(&q, &r));
        // sums landing near the point at infinity are numerically unstable
        prop_assume!(!left.is_infinity() && !right.is_infinity());
        if let (CurvePoint::Affine { x, .. }, CurvePoint::Affine { x: x2, .. }) = (&left, &right) {
            prop_assume!(x.norm() < 1e4 && x2.norm() < 1e4);
        }
        prop_assert!(e.point_distance(&left, &right) <= 1e-6);
        prop_assert!(e.point_distance(&e.add(&p, &e.neg(&p)), &CurvePoint::Infinity) <= 1e-9);
    }
}

#[test]
fn admissible_sizes_match_brute_force_subset_sums() {
    let bound = 3000u64;
    // J_2(m) >= m^2 / 2, so m <= 30 covers every term up to the bound
    let j2: Vec<u64> = (1..=30)
        .map(jordan_totient)
        .filter(|&j| 9 * j <= bound)
        .collect();
    let mut sums = BTreeSet::from([0u64]);
    for &w in &j2 {
        let next: Vec<u64> = sums
            .iter()
            .map(|s| s + w)
            .filter(|s| 9 * s <= bound)
            .collect();
        sums.extend(next);
    }
    let oracle: Vec<u64> = sums.into_iter().filter(|&s| s > 0).map(|s| 9 * s).collect();
    let sizes = admissible_sizes(bound).unwrap();
    assert_eq!(sizes.iter().map(|s| s.n).collect::<Vec<_>>(), oracle);
    assert!(sizes.iter().all(|s| s.verify()));
}

#[test]
fn subsequences_of_separated_sets_stay_square_free() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = separated(4..=8, 0.1).prop_flat_map(|pts| {
        let n = pts.len();
        subsequence(pts, 2..=n)
    });
    runner
        .run(&strategy, |sub| {
            let p = from_roots(&Configuration::unordered(sub).unwrap());
            prop_assert!(is_square_free(&p, &tol()).unwrap().square_free);
            Ok(())
        })
        .unwrap();
}
