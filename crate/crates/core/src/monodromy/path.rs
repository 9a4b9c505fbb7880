use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly_core::{is_square_free, MonicPolynomial, TolerancePolicy};

pub const DEFAULT_SAMPLES: usize = 64;

/// A piecewise-linear path in coefficient space through square-free
/// waypoints of a common degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub struct CoefficientPath {
    waypoints: Vec<MonicPolynomial>,
    samples_per_segment: usize,
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    degree: usize,
    waypoints: Vec<MonicPolynomial>,
    #[serde(default = "default_samples")]
    samples_per_segment: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

impl TryFrom<PathRepr> for CoefficientPath {
    type Error = Error;
    fn try_from(r: PathRepr) -> Result<Self> {
        if r.waypoints.iter().any(|w| w.degree() != r.degree) {
            return Err(Error::InvalidInput(format!(
                "every waypoint must have degree {}",
                r.degree
            )));
        }
        CoefficientPath::new(
            r.waypoints,
            r.samples_per_segment,
            &TolerancePolicy::default(),
        )
    }
}

impl From<CoefficientPath> for PathRepr {
    fn from(p: CoefficientPath) -> Self {
        PathRepr {
            degree: p.degree(),
            waypoints: p.waypoints,
            samples_per_segment: p.samples_per_segment,
        }
    }
}

impl CoefficientPath {
    /// Fails with `PathHitsDiscriminant { at }` (the waypoint index) when a
    /// waypoint is not square-free.
    pub fn new(
        waypoints: Vec<MonicPolynomial>,
        samples_per_segment: usize,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let Some(first) = waypoints.first() else {
            return Err(Error::InvalidInput(
                "path needs at least one waypoint".into(),
            ));
        };
        if samples_per_segment == 0 {
            return Err(Error::InvalidInput(
                "samples_per_segment must be >= 1".into(),
            ));
        }
        let n = first.degree();
        if waypoints.iter().any(|w| w.degree() != n) {
            return Err(Error::InvalidInput(
                "waypoints must share one degree".into(),
            ));
        }
        if n >= 2 {
            for (i, w) in waypoints.iter().enumerate() {
                if !is_square_free(w, tol)?.square_free {
                    return Err(Error::PathHitsDiscriminant { at: i as f64 });
                }
            }
        }
        Ok(Self {
            waypoints,
            samples_per_segment,
        })
    }

    /// The path sitting at `p`.
    pub fn constant(p: MonicPolynomial, tol: &TolerancePolicy) -> Result<Self> {
        Self::new(vec![p.clone(), p], DEFAULT_SAMPLES, tol)
    }

    pub fn degree(&self) -> usize {
        self.waypoints[0].degree()
    }

    pub fn waypoints(&self) -> &[MonicPolynomial] {
        &self.waypoints
    }

    pub fn samples_per_segment(&self) -> usize {
        self.samples_per_segment
    }

    pub fn segments(&self) -> usize {
        self.waypoints.len().saturating_sub(1)
    }

    pub fn is_closed(&self) -> bool {
        self.waypoints.first() == self.waypoints.last()
    }

    pub fn with_samples(&self, samples_per_segment: usize) -> Result<Self> {
        if samples_per_segment == 0 {
            return Err(Error::InvalidInput(
                "samples_per_segment must be >= 1".into(),
            ));
        }
        Ok(Self {
            waypoints: self.waypoints.clone(),
            samples_per_segment,
        })
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut waypoints = self.waypoints.clone();
        waypoints.reverse();
        Self {
            waypoints,
            samples_per_segment: self.samples_per_segment,
        }
    }

    /// `self` followed by `other`; the end of `self` must equal the start of
    /// `other` exactly and both must use the same sampling.
    pub fn concat(&self, other: &CoefficientPath) -> Result<Self> {
        if self.waypoints.last() != other.waypoints.first() {
            return Err(Error::InvalidInput("paths are not composable".into()));
        }
        if self.samples_per_segment != other.samples_per_segment {
            return Err(Error::InvalidInput("paths use different sampling".into()));
        }
        let mut waypoints = self.waypoints.clone();
        waypoints.extend_from_slice(&other.waypoints[1..]);
        Ok(Self {
            waypoints,
            samples_per_segment: self.samples_per_segment,
        })
    }

    /// Applies `f` to every waypoint; the result is revalidated.
    pub fn map_waypoints(
        &self,
        f: impl Fn(&MonicPolynomial) -> Result<MonicPolynomial>,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let waypoints = self.waypoints.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(waypoints, self.samples_per_segment, tol)
    }
}
