use serde::{Deserialize, Serialize};

use super::{check_finite, Complex, TolerancePolicy};
use crate::error::{Error, Result};

/// A finite tuple of points in the complex plane. Unordered configurations
/// model `UConf_n`, ordered ones `PConf_n`; repeated points are representable
/// (separation 0) so that degenerate inputs can be reported rather than
/// rejected at construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationRepr", into = "ConfigurationRepr")]
pub struct Configuration {
    points: Vec<Complex>,
    ordered: bool,
    separation: f64,
}

#[derive(Serialize, Deserialize)]
struct ConfigurationRepr {
    ordered: bool,
    points: Vec<Complex>,
}

impl TryFrom<ConfigurationRepr> for Configuration {
    type Error = Error;
    fn try_from(r: ConfigurationRepr) -> Result<Self> {
        Configuration::new(r.points, r.ordered)
    }
}

impl From<Configuration> for ConfigurationRepr {
    fn from(c: Configuration) -> Self {
        ConfigurationRepr {
            ordered: c.ordered,
            points: c.points,
        }
    }
}

fn min_pairwise(points: &[Complex]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.min((p - q).norm());
        }
    }
    best
}

/// Lexicographic order on (re, im); total, so sorting is deterministic.
pub(crate) fn cmp_points(a: &Complex, b: &Complex) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl Configuration {
    pub fn new(points: Vec<Complex>, ordered: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("configuration must be nonempty".into()));
        }
        check_finite(&points)?;
        let separation = min_pairwise(&points);
        Ok(Self {
            points,
            ordered,
            separation,
        })
    }

    pub fn unordered(points: Vec<Complex>) -> Result<Self> {
        Self::new(points, false)
    }

    pub fn ordered(points: Vec<Complex>) -> Result<Self> {
        Self::new(points, true)
    }

    pub fn from_real(points: &[f64], ordered: bool) -> Result<Self> {
        Self::new(
            points.iter().map(|&x| Complex::new(x, 0.0)).collect(),
            ordered,
        )
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    /// Minimum pairwise distance; infinite for a single point.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Maximum pairwise distance; 1 for a single point.
    pub fn diameter(&self) -> f64 {
        if self.points.len() < 2 {
            return 1.0;
        }
        let mut d: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                d = d.max((p - q).norm());
            }
        }
        d
    }

    /// Points are distinct when the separation exceeds `distinct_tol` times
    /// the diameter.
    pub fn is_distinct(&self, tol: &TolerancePolicy) -> bool {
        self.points.len() < 2 || self.separation > tol.distinct_tol * self.diameter()
    }

    pub fn require_distinct(&self, tol: &TolerancePolicy) -> Result<()> {
        if self.is_distinct(tol) {
            Ok(())
        } else {
            Err(Error::NotDistinct {
                separation: self.separation,
            })
        }
    }

    /// Points sorted by (re, im).
    pub fn canonical_points(&self) -> Vec<Complex> {
        let mut pts = self.points.clone();
        pts.sort_by(cmp_points);
        pts
    }

    pub fn to_unordered(&self) -> Configuration {
        Configuration {
            ordered: false,
            ..self.clone()
        }
    }

    pub fn to_ordered(&self) -> Configuration {
        Configuration {
            ordered: true,
            ..self.clone()
        }
    }

    /// Same points relabelled: `images[i]` is the new position of point `i`.
    pub fn permuted(&self, images: &[usize]) -> Configuration {
        let mut pts = self.points.clone();
        for (i, &j) in images.iter().enumerate() {
            pts[j] = self.points[i];
        }
        Configuration {
            points: pts,
            ..self.clone()
        }
    }

    /// Largest displacement in a greedy nearest-pair matching of the two
    /// point multisets; `None` when the sizes differ.
    pub fn matching_distance(&self, other: &Configuration) -> Option<f64> {
        matching_distance(&self.points, &other.points)
    }

    /// Matching distance divided by `max(1, max |p|)`.
    pub fn relative_matching_distance(&self, other: &Configuration) -> Option<f64> {
        let scale = self
            .points
            .iter()
            .chain(&other.points)
            .map(|p| p.norm())
            .fold(1.0, f64::max);
        self.matching_distance(other).map(|d| d / scale)
    }
}

/// Greedy bipartite matching on sorted pair distances.
pub(crate) fn matching_distance(a: &[Complex], b: &[Complex]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            pairs.push(((p - q).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
            matched += 1;
            if matched == a.len() {
                break;
            }
        }
    }
    Some(worst)
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        if self.ordered != other.ordered || self.points.len() != other.points.len() {
            return false;
        }
        if self.ordered {
            self.points == other.points
        } else {
            self.canonical_points() == other.canonical_points()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_and_diameter() {
        let c = Configuration::from_real(&[0.0, 1.0, 3.0], false).unwrap();
        assert_eq!(c.separation(), 1.0);
        assert_eq!(c.diameter(), 3.0);
        let r = Configuration::from_real(&[0.0, 0.0], false).unwrap();
        assert_eq!(r.separation(), 0.0);
        assert!(!r.is_distinct(&TolerancePolicy::default()));
        let single = Configuration::from_real(&[5.0], false).unwrap();
        assert!(single.is_distinct(&TolerancePolicy::default()));
    }

    #[test]
    fn unordered_equality_ignores_order() {
        let a = Configuration::from_real(&[1.0, -1.0, 2.0], false).unwrap();
        let b = Configuration::from_real(&[2.0, 1.0, -1.0], false).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.to_ordered(), b.to_ordered());
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Configuration::unordered(vec![]).is_err());
        assert!(Configuration::unordered(vec![Complex::new(f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn json_round_trip_recomputes_separation() {
        let c: Configuration =
            serde_json::from_str(r#"{"ordered":false,"points":[[0,0],[3,4]]}"#).unwrap();
        assert_eq!(c.separation(), 5.0);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"ordered":false,"points":[[0.0,0.0],[3.0,4.0]]}"#);
    }

    #[test]
    fn matching_distance_is_permutation_blind() {
        let a = Configuration::from_real(&[0.0, 1.0, 2.0], false).unwrap();
        let b = Configuration::from_real(&[2.0, 0.001, 1.0], false).unwrap();
        assert!((a.matching_distance(&b).unwrap() - 0.001).abs() < 1e-15);
    }
}
