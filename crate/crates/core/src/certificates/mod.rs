//! Optimality certificates for the ℓ1, weighted ℓ2 and Gram-trace problems.

mod p1;
mod p2;
mod p3;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use p1::certify_p1;
pub use p2::{certify_p2, p2_weight};
pub use p3::{certify_p3, refute_ld_for_p3, Refutation};

/// Default tolerance with deterministic moments.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default tolerance with sampled moments.
pub const DEFAULT_STOCHASTIC_TOL: f64 = 1e-2;
/// Residuals are violations only beyond tol + K·(standard error).
pub const SE_MULTIPLIER: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    P1Kkt,
    P2Moment,
    P3Psd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DualValue {
    Scalar(f64),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub residuals: BTreeMap<String, f64>,
    pub duals: BTreeMap<String, DualValue>,
    /// Standard error attached to each residual; not part of the document.
    #[serde(skip)]
    pub residual_std_errors: BTreeMap<String, f64>,
}

impl Certificate {
    pub(crate) fn build(
        kind: CertificateKind,
        tolerance: f64,
        residuals: Vec<(String, f64, f64)>,
        duals: BTreeMap<String, DualValue>,
    ) -> Self {
        let mut r = BTreeMap::new();
        let mut se = BTreeMap::new();
        for (name, value, err) in residuals {
            r.insert(name.clone(), value);
            se.insert(name, err);
        }
        let mut cert = Certificate {
            kind,
            verdict: Verdict::Pass,
            tolerance,
            residuals: r,
            duals,
            residual_std_errors: se,
        };
        if !cert.failing().is_empty() {
            cert.verdict = Verdict::Fail;
        }
        cert
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Names of residuals exceeding tol + 3·se.
    pub fn failing(&self) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(name, v)| {
                let se = self.residual_std_errors.get(*name).copied().unwrap_or(0.0);
                !(**v <= self.tolerance + SE_MULTIPLIER * se)
            })
            .map(|(name, _)| name.as_str())
            .collect()
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.get(name).copied()
    }

    pub fn dual_scalar(&self, name: &str) -> Option<f64> {
        match self.duals.get(name) {
            Some(DualValue::Scalar(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }
}

/// |vol − target| ≤ tol·target + 3·se, else a precondition error.
pub(crate) fn check_volume(volume: f64, se: f64, target: f64, tol: f64) -> crate::Result<f64> {
    let dev = (volume - target).abs();
    if dev > tol * target + SE_MULTIPLIER * se {
        return Err(crate::Error::Precondition(format!(
            "candidate volume {volume} differs from the L_d ball volume {target} by more than the tolerance; rescale first"
        )));
    }
    Ok(dev / target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_uses_standard_errors() {
        let c = Certificate::build(
            CertificateKind::P1Kkt,
            1e-3,
            vec![("a".into(), 0.01, 0.004), ("b".into(), 0.0, 0.0)],
            BTreeMap::new(),
        );
        assert!(c.passed());
        let c = Certificate::build(
            CertificateKind::P1Kkt,
            1e-3,
            vec![("a".into(), 0.01, 0.001)],
            BTreeMap::new(),
        );
        assert_eq!(c.failing(), vec!["a"]);
        assert_eq!(c.verdict, Verdict::Fail);
    }

    #[test]
    fn nan_residuals_fail() {
        let c = Certificate::build(
            CertificateKind::P3Psd,
            1.0,
            vec![("x".into(), f64::NAN, 0.0)],
            BTreeMap::new(),
        );
        assert!(!c.passed());
    }

    #[test]
    fn json_shape() {
        let mut duals = BTreeMap::new();
        duals.insert("theta".to_string(), DualValue::Scalar(0.5));
        duals.insert("m".to_string(), DualValue::Matrix(vec![vec![1.0]]));
        let c = Certificate::build(CertificateKind::P2Moment, 0.1, vec![("r".into(), 0.0, 0.0)], duals);
        assert_eq!(
            c.to_json(),
            r#"{"kind":"p2_moment","verdict":"pass","tolerance":0.1,"residuals":{"r":0.0},"duals":{"m":[[1.0]],"theta":0.5}}"#
        );
    }
}
