use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::VolumeEstimate;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::poly::{polynomial_to_json, ExponentVector, GeneralizedPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub value: f64,
    pub std_error: f64,
}

/// Moments ∫_G x^α (or |x|^α) of one sublevel set.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    entries: BTreeMap<ExponentVector, MomentEntry>,
    normalization: VolumeEstimate,
    region: String,
}

/// SHA-256 of the canonical JSON of g.
pub(crate) fn content_hash(g: &GeneralizedPolynomial) -> String {
    hex::encode(Sha256::digest(polynomial_to_json(g).as_bytes()))
}

impl MomentTable {
    pub fn new(
        entries: BTreeMap<ExponentVector, MomentEntry>,
        normalization: VolumeEstimate,
        region: String,
    ) -> Self {
        MomentTable {
            entries,
            normalization,
            region,
        }
    }

    pub fn get(&self, alpha: &ExponentVector) -> Result<MomentEntry> {
        self.entries
            .get(alpha)
            .copied()
            .ok_or_else(|| Error::MissingMoment(alpha.key()))
    }

    pub fn value(&self, alpha: &ExponentVector) -> Result<f64> {
        self.get(alpha).map(|e| e.value)
    }

    pub fn entries(&self) -> &BTreeMap<ExponentVector, MomentEntry> {
        &self.entries
    }

    pub fn volume(&self) -> &VolumeEstimate {
        &self.normalization
    }

    /// Content hash of the polynomial defining the region.
    pub fn region(&self) -> &str {
        &self.region
    }

    /// `alpha_times_q;value;std_error`, one row per exponent, volume first.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("alpha_times_q;value;std_error\n");
        for (a, e) in &self.entries {
            let _ = writeln!(s, "{};{};{}", a.key(), e.value, e.std_error);
        }
        s
    }
}

/// M(α, β) = ∫_G x^(α+β) (|x| for generalized g) over a basis of exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    pub basis: Vec<ExponentVector>,
    pub matrix: SymMatrix,
    pub std_error: SymMatrix,
    pub volume: VolumeEstimate,
}

/// Every |M(α, β)| is at most the largest axis moment ∫|x_i|^(2|α|), up to
/// three combined standard errors.
pub fn hankel_diag_bound_check(m: &MomentMatrix) -> bool {
    let mut bound: Option<(f64, f64)> = None;
    for (i, a) in m.basis.iter().enumerate() {
        if a.is_axis_power() || a.dim() == 1 {
            let v = m.matrix.get(i, i);
            if bound.is_none_or(|(b, _)| v > b) {
                bound = Some((v, m.std_error.get(i, i)));
            }
        }
    }
    let Some((b, b_se)) = bound else {
        return false;
    };
    let s = m.matrix.size();
    (0..s).all(|i| {
        (0..s).all(|j| {
            let se = m.std_error.get(i, j).hypot(b_se);
            m.matrix.get(i, j).abs() <= b + 3.0 * se + 1e-12 * b.abs()
        })
    })
}
