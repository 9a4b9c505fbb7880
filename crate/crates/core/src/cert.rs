//! JSON certificates: what was computed, from what, and which checks passed.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly_core::TolerancePolicy;

/// One verified claim. `measured` is the quantity compared against its
/// threshold (a residual, a count, a margin); non-finite values are clamped
/// to `f64::MAX` so the record stays valid JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CertificateRepr", into = "CertificateRepr")]
pub struct Certificate {
    construction: String,
    inputs: Value,
    outputs: Value,
    checks: Vec<Check>,
    tolerances: TolerancePolicy,
    seed: u64,
    version: String,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    construction: String,
    inputs: Value,
    outputs: Value,
    checks: Vec<Check>,
    tolerances: TolerancePolicy,
    seed: u64,
    version: String,
    passed: bool,
}

impl TryFrom<CertificateRepr> for Certificate {
    type Error = Error;
    fn try_from(r: CertificateRepr) -> Result<Self> {
        let cert = Certificate {
            construction: r.construction,
            inputs: r.inputs,
            outputs: r.outputs,
            checks: r.checks,
            tolerances: r.tolerances,
            seed: r.seed,
            version: r.version,
        };
        if cert.passed() != r.passed {
            return Err(Error::InvalidInput(
                "certificate `passed` disagrees with its checks".into(),
            ));
        }
        Ok(cert)
    }
}

impl From<Certificate> for CertificateRepr {
    fn from(c: Certificate) -> Self {
        let passed = c.passed();
        CertificateRepr {
            construction: c.construction,
            inputs: c.inputs,
            outputs: c.outputs,
            checks: c.checks,
            tolerances: c.tolerances,
            seed: c.seed,
            version: c.version,
            passed,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("certificate payloads are plain data")
}

impl Certificate {
    pub fn new(construction: impl Into<String>, tolerances: TolerancePolicy, seed: u64) -> Self {
        Self {
            construction: construction.into(),
            inputs: Value::Object(Default::default()),
            outputs: Value::Object(Default::default()),
            checks: Vec::new(),
            tolerances,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Records `inputs[key] = value`.
    pub fn input<T: Serialize>(&mut self, key: &str, value: &T) -> &mut Self {
        self.inputs[key] = to_value(value);
        self
    }

    /// Records `outputs[key] = value`.
    pub fn output<T: Serialize>(&mut self, key: &str, value: &T) -> &mut Self {
        self.outputs[key] = to_value(value);
        self
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
        measured: f64,
    ) -> &mut Self {
        let measured = if measured.is_finite() {
            measured
        } else if measured.is_nan() {
            f64::MAX
        } else {
            measured.signum() * f64::MAX
        };
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            measured,
        });
        self
    }

    /// Records a failed check for an error raised during the construction.
    pub fn error(&mut self, name: impl Into<String>, err: &Error) -> &mut Self {
        self.check(name, false, err.to_string(), f64::NAN)
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: &Certificate) -> &mut Self {
        for c in &other.checks {
            self.checks.push(Check {
                name: format!("{prefix}/{}", c.name),
                ..c.clone()
            });
        }
        self
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn construction(&self) -> &str {
        &self.construction
    }

    pub fn inputs(&self) -> &Value {
        &self.inputs
    }

    pub fn outputs(&self) -> &Value {
        &self.outputs
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn tolerances(&self) -> &TolerancePolicy {
        &self.tolerances
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// Turns a failed certificate into `CertificateFailed` naming the first
    /// violated check.
    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        Err(Error::CertificateFailed(
            match self.failed_checks().next() {
                None => "no checks recorded".into(),
                Some(c) => format!("{}: {}", c.name, c.detail),
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_all_checks_pass() {
        let mut c = Certificate::new("demo", TolerancePolicy::default(), 7);
        assert!(!c.passed());
        c.check("a", true, "ok", 0.5);
        assert!(c.passed());
        c.check("b", false, "bad", f64::INFINITY);
        assert!(!c.passed());
        assert_eq!(c.checks()[1].measured, f64::MAX);
        assert!(matches!(c.into_result(), Err(Error::CertificateFailed(m)) if m.starts_with("b:")));
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let mut c = Certificate::new("demo", TolerancePolicy::default(), 42);
        c.input("x", &[0.1f64, 1.0 / 3.0]).output("y", &"z").check(
            "close",
            true,
            "residual",
            1.234_567_890_123_456_7e-13,
        );
        let s = c.to_json();
        let back = Certificate::from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), s);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["passed"], true);
    }

    #[test]
    fn inconsistent_passed_flag_is_rejected() {
        let mut c = Certificate::new("demo", TolerancePolicy::default(), 1);
        c.check("a", false, "", 1.0);
        let s = c
            .to_json()
            .replace("\"passed\": false\n}", "\"passed\": true\n}");
        assert!(Certificate::from_json(&s).is_err());
    }
}
