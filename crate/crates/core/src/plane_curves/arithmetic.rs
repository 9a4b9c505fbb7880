use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distinct prime divisors of `m`, ascending.
fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Jordan's totient `J_2(m) = m^2 prod_(p | m) (1 - p^-2)`, the number of
/// elements of exact order `m` in `(Z/m)^2`. Exact in integers.
pub fn jordan_totient(m: u64) -> u64 {
    assert!(m >= 1, "jordan_totient is defined for m >= 1");
    prime_divisors(m)
        .into_iter()
        .fold(m * m, |acc, p| acc / (p * p) * (p * p - 1))
}

/// A multisection size `n = 9 * sum_(m in I) J_2(m)` with its witness `I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisectionSize {
    pub n: u64,
    pub index_set: BTreeSet<u64>,
}

impl MultisectionSize {
    /// Recomputes `9 * sum J_2(m)` over the witness.
    pub fn verify(&self) -> bool {
        !self.index_set.is_empty()
            && self.n
                == 9 * self
                    .index_set
                    .iter()
                    .map(|&m| jordan_totient(m))
                    .sum::<u64>()
    }
}

/// All `m >= from` with `factor * J_2(m) <= bound`. Uses `J_2(m) > m^2 / 2`
/// (the Euler product over all primes exceeds `6/pi^2`) to stop the scan.
fn indices_up_to(from: u64, factor: u64, bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = from;
    while factor * m * m / 2 <= bound {
        if factor * jordan_totient(m) <= bound {
            out.push(m);
        }
        m += 1;
    }
    out
}

/// Every `n <= bound` of the form `9 * sum_(m in I) J_2(m)` over nonempty
/// finite sets `I` of distinct positive integers, ascending, each with the
/// first witness found by a subset-sum scan over increasing `m`.
pub fn admissible_sizes(bound: u64) -> Result<Vec<MultisectionSize>> {
    if bound < 9 {
        return Err(Error::InvalidInput("bound must be at least 9".into()));
    }
    let target = (bound / 9) as usize;
    let mut witness: Vec<Option<BTreeSet<u64>>> = vec![None; target + 1];
    witness[0] = Some(BTreeSet::new());
    for m in indices_up_to(1, 9, bound) {
        let w = jordan_totient(m) as usize;
        // descending so each m is used at most once
        for s in (w..=target).rev() {
            if witness[s].is_none() {
                if let Some(prev) = &witness[s - w] {
                    let mut set = prev.clone();
                    set.insert(m);
                    witness[s] = Some(set);
                }
            }
        }
    }
    Ok(witness
        .into_iter()
        .enumerate()
        .skip(1)
        .filter_map(|(s, w)| {
            w.map(|index_set| MultisectionSize {
                n: 9 * s as u64,
                index_set,
            })
        })
        .collect())
}

/// Distinct values `18 J_2(m)` for `m >= 4` up to `bound`, ascending.
pub fn banerjee_chen_sizes(bound: u64) -> Result<Vec<u64>> {
    if bound < 216 {
        return Err(Error::InvalidInput("bound must be at least 216".into()));
    }
    let set: BTreeSet<u64> = indices_up_to(4, 18, bound)
        .into_iter()
        .map(|m| 18 * jordan_totient(m))
        .collect();
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts pairs in (Z/m)^2 of exact order m by brute force.
    fn exact_order_count(m: u64) -> u64 {
        let gcd = |mut a: u64, mut b: u64| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let mut count = 0;
        for a in 0..m {
            for b in 0..m {
                // order of (a, b) is m / gcd(a, b, m)
                if gcd(gcd(a, b), m) == 1 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn totient_examples() {
        assert_eq!(jordan_totient(1), 1);
        assert_eq!(jordan_totient(2), 3);
        assert_eq!(jordan_totient(6), 24);
    }

    #[test]
    fn totient_matches_group_count() {
        for m in 1..=40 {
            assert_eq!(jordan_totient(m), exact_order_count(m), "m = {m}");
        }
    }

    #[test]
    fn totient_sums_over_divisors_to_square() {
        for m in 1..=60u64 {
            let s: u64 = (1..=m).filter(|d| m % d == 0).map(jordan_totient).sum();
            assert_eq!(s, m * m);
        }
    }

    #[test]
    fn admissible_sizes_up_to_110() {
        let sizes: Vec<u64> = admissible_sizes(110).unwrap().iter().map(|s| s.n).collect();
        assert_eq!(sizes, vec![9, 27, 36, 72, 81, 99, 108]);
        assert_eq!(admissible_sizes(9).unwrap().len(), 1);
        assert!(admissible_sizes(8).is_err());
    }

    #[test]
    fn forty_five_is_not_admissible() {
        // brute-force subset sums of {J_2(1), .., J_2(4)} = {1, 3, 8, 12}
        let vals = [1u64, 3, 8, 12];
        let reachable: Vec<u64> = (1u32..16)
            .map(|mask| {
                (0..4)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| vals[i])
                    .sum()
            })
            .collect();
        assert!(!reachable.contains(&5));
        assert!(admissible_sizes(110).unwrap().iter().all(|s| s.n != 45));
    }

    #[test]
    fn witnesses_verify() {
        for s in admissible_sizes(2000).unwrap() {
            assert!(s.verify(), "{s:?}");
        }
    }

    #[test]
    fn banerjee_chen_sizes_up_to_2200() {
        // 18 J_2(m) for m = 4..=11 and m = 12 (J_2(12) = 96), all below 2200
        let oracle: BTreeSet<u64> = (4..=40u64)
            .map(|m| 18 * exact_order_count(m))
            .filter(|&n| n <= 2200)
            .collect();
        let got = banerjee_chen_sizes(2200).unwrap();
        assert_eq!(got, oracle.into_iter().collect::<Vec<_>>());
        assert_eq!(got, vec![216, 432, 864, 1296, 1728, 2160]);
        assert_eq!(banerjee_chen_sizes(216).unwrap(), vec![216]);
        assert_eq!(jordan_totient(5), jordan_totient(6));
    }
}
