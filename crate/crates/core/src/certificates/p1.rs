use std::collections::BTreeMap;

use super::{check_volume, Certificate, CertificateKind, DualValue};
use crate::error::{Error, Result};
use crate::poly::{ExponentVector, GeneralizedPolynomial};
use crate::volume::{closed_form_ball_volume, MomentTable};

/// Largest value with the standard error carried alongside it.
#[derive(Clone, Copy)]
struct Worst {
    value: f64,
    se: f64,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, se: 0.0 }
    }

    fn offer(&mut self, value: f64, se: f64) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.se = se;
        }
    }
}

/// KKT check for min ‖g‖₁ s.t. vol(G) ≤ ρ_d, with the multipliers built as in
/// the optimality proof: θ = (d/(n+d))/m_ref and w_α = θ·((n+d)/d)·m_α split
/// into u = w⁺, v = w⁻, ψ = 1 − u − v, λ = |g|.
pub fn certify_p1(g: &GeneralizedPolynomial, moments: &MomentTable, tol: f64) -> Result<Certificate> {
    let n = g.n();
    let d = g.d();
    let rho = closed_form_ball_volume(n, d)?;
    let vol = moments.volume();
    let vol_dev = check_volume(vol.value, vol.std_error, rho, tol)?;

    let dq = g.d_times_q();
    let mut m_ref = f64::NEG_INFINITY;
    let mut se_ref = 0.0;
    for i in 0..n {
        let e = moments.get(&ExponentVector::axis(n, i, dq, g.q()))?;
        if e.value > m_ref {
            m_ref = e.value;
            se_ref = e.std_error;
        }
    }
    if !(m_ref > 0.0) {
        return Err(Error::Precondition(format!(
            "axis moment must be positive, got {m_ref}"
        )));
    }
    let theta = d / ((n as f64 + d) * m_ref);

    let coeffs = g.monomial_coefficients();
    let index = g.index_set();
    let (mut u, mut v, mut psi, mut lambda) = (vec![], vec![], vec![], vec![]);
    let mut dominance = Worst::new();
    let mut comp_psi = Worst::new();
    let mut comp_u = Worst::new();
    let mut comp_v = Worst::new();
    let mut stationarity = Worst::new();
    for a in &index {
        let m = moments.get(a)?;
        let w = m.value / m_ref;
        let w_se = m.std_error.hypot(w * se_ref) / m_ref;
        let (ua, va) = (w.max(0.0), (-w).max(0.0));
        let p = 1.0 - ua - va;
        let c = coeffs.get(a).copied().unwrap_or(0.0);
        let l = c.abs();
        dominance.offer((-p).max(0.0), w_se);
        comp_psi.offer((l * p).abs(), l * w_se);
        comp_u.offer(ua * (l - c), (l - c) * w_se);
        comp_v.offer(va * (l + c), (l + c) * w_se);
        if l > tol {
            stationarity.offer(p.abs(), w_se);
        }
        u.push(ua);
        v.push(va);
        psi.push(p);
        lambda.push(l);
    }

    let residuals = vec![
        ("dual_feasibility_psi".to_string(), dominance.value, dominance.se),
        ("complementarity_lambda_psi".to_string(), comp_psi.value, comp_psi.se),
        ("complementarity_u".to_string(), comp_u.value, comp_u.se),
        ("complementarity_v".to_string(), comp_v.value, comp_v.se),
        ("support_stationarity".to_string(), stationarity.value, stationarity.se),
        ("volume_feasibility".to_string(), vol_dev, vol.std_error / rho),
    ];
    let mut duals = BTreeMap::new();
    duals.insert("theta".into(), DualValue::Scalar(theta));
    duals.insert(
        "alpha_times_q".into(),
        DualValue::Matrix(
            index
                .iter()
                .map(|a| a.numerators().iter().map(|&k| k as f64).collect())
                .collect(),
        ),
    );
    duals.insert("u".into(), DualValue::Vector(u));
    duals.insert("v".into(), DualValue::Vector(v));
    duals.insert("psi".into(), DualValue::Vector(psi));
    duals.insert("lambda".into(), DualValue::Vector(lambda));
    Ok(Certificate::build(CertificateKind::P1Kkt, tol, residuals, duals))
}
