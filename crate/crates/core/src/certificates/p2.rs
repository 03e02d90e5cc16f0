use std::collections::BTreeMap;

use super::{Certificate, CertificateKind, DualValue};
use crate::error::{Error, Result};
use crate::poly::{multinomial_coefficient, Convention, ExponentVector, GeneralizedPolynomial};
use crate::volume::MomentTable;

/// Weight of α in the ℓ2 norm: c_α for forms, 1 for generalized polynomials.
pub fn p2_weight(g: &GeneralizedPolynomial, alpha: &ExponentVector) -> Result<f64> {
    if g.is_signed() {
        Ok(multinomial_coefficient(alpha)? as f64)
    } else {
        Ok(1.0)
    }
}

/// Checks g_α = ℓ₂·((n+d)/n)·∫_G x^α / vol(G) for every α, with ℓ₂ = Σ w_α g_α².
///
/// Forms must be stored in the multinomial convention, generalized polynomials
/// in the monomial one (their norm is unweighted). The identity is invariant
/// under rescaling g, so the volume is not required to equal ρ_d.
pub fn certify_p2(g: &GeneralizedPolynomial, moments: &MomentTable, tol: f64) -> Result<Certificate> {
    let want = if g.is_signed() {
        Convention::Multinomial
    } else {
        Convention::Monomial
    };
    if g.convention() != want {
        return Err(Error::ConventionMismatch(format!(
            "the ℓ2 certificate reads {} coefficients",
            match want {
                Convention::Multinomial => "multinomial",
                Convention::Monomial => "monomial",
            }
        )));
    }
    let n = g.n() as f64;
    let d = g.d();
    let vol = moments.volume();
    if !(vol.value > 0.0) {
        return Err(Error::Precondition(format!("volume must be positive, got {}", vol.value)));
    }

    let index = g.index_set();
    let mut l2 = 0.0;
    for a in &index {
        l2 += p2_weight(g, a)? * g.coefficient(a).powi(2);
    }
    let factor = l2 * (n + d) / n;

    let mut residuals = Vec::new();
    let mut worst = (0.0f64, 0.0f64);
    let mut positivity = 0.0f64;
    for a in &index {
        let m = moments.get(a)?;
        let ratio = m.value / vol.value;
        let ratio_se = m.std_error.hypot(ratio * vol.std_error) / vol.value;
        let c = g.coefficient(a);
        let r = (c - factor * ratio).abs();
        let se = factor * ratio_se;
        if r > worst.0 || r.is_nan() {
            worst = (r, se);
        }
        if !g.is_signed() || a.numerators().iter().all(|k| k % 2 == 0) {
            positivity = positivity.max(-c);
        }
        residuals.push((format!("residual({})", a.key()), r, se));
    }
    residuals.push(("max_residual".into(), worst.0, worst.1));
    residuals.push(("even_coefficient_positivity".into(), positivity, 0.0));

    let mut duals = BTreeMap::new();
    duals.insert("l2_star".into(), DualValue::Scalar(l2));
    duals.insert("lambda_star".into(), DualValue::Scalar(4.0 * l2 * d / (n * vol.value)));
    Ok(Certificate::build(CertificateKind::P2Moment, tol, residuals, duals))
}
