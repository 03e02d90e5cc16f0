use std::collections::BTreeMap;

use serde::Serialize;

use super::{check_volume, Certificate, CertificateKind, DualValue};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::poly::GramForm;
use crate::volume::{closed_form_ball_volume, moment_matrix, EngineConfig, MomentMatrix};

/// Checks I − ((n+d)·tr Q/(n ρ_d))·M ⪰ 0 and ⟨Q, A⟩ = 0, with M the moment
/// matrix of G_Q over the degree-d/2 monomials.
pub fn certify_p3(form: &GramForm, m: &MomentMatrix, tol: f64) -> Result<Certificate> {
    let s = form.matrix().size();
    if m.basis.len() != s || m.matrix.size() != s || m.basis != form.basis() {
        return Err(Error::DimensionMismatch(format!(
            "Q is {s}×{s} but the moment matrix has {} basis monomials",
            m.basis.len()
        )));
    }
    let n = form.n() as f64;
    let d = form.d() as f64;
    let rho = closed_form_ball_volume(form.n(), d)?;
    let vol_dev = check_volume(m.volume.value, m.volume.std_error, rho, tol)?;

    let q = form.matrix();
    let tr = q.trace();
    let kappa = (n + d) * tr / (n * rho);
    let a = SymMatrix::identity(s).add_scaled(-kappa, &m.matrix);
    if !a.is_finite() {
        return Err(Error::NonFinite("certificate matrix"));
    }
    let eig = a.eigen()?;
    let min_eig = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    let a_se = kappa.abs() * m.std_error.frobenius_norm();
    let comp = q.dot(&a).abs();
    let comp_se = kappa.abs()
        * (0..s)
            .flat_map(|i| (0..s).map(move |j| (i, j)))
            .map(|(i, j)| (q.get(i, j) * m.std_error.get(i, j)).powi(2))
            .sum::<f64>()
            .sqrt();

    let residuals = vec![
        ("psd_violation".to_string(), (-min_eig).max(0.0), a_se),
        ("complementarity".to_string(), comp, comp_se),
        ("volume".to_string(), vol_dev, m.volume.std_error / rho),
    ];
    let mut spectrum = eig.values.clone();
    spectrum.sort_by(f64::total_cmp);
    let mut duals = BTreeMap::new();
    duals.insert("lambda".into(), DualValue::Scalar(d * tr / (n * rho)));
    duals.insert("psi".into(), DualValue::Matrix(a.rows()));
    duals.insert("psi_spectrum".into(), DualValue::Vector(spectrum));
    duals.insert("psi_frobenius_norm".into(), DualValue::Scalar(a.frobenius_norm()));
    duals.insert("min_eigenvalue".into(), DualValue::Scalar(min_eig));
    Ok(Certificate::build(CertificateKind::P3Psd, tol, residuals, duals))
}

/// Outcome of testing Σ x_i^d against the Gram-trace optimality condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refutation {
    pub n: usize,
    pub d: u32,
    pub min_eigenvalue: f64,
    /// True when the certificate fails, i.e. Σ x_i^d is not optimal.
    pub refuted: bool,
    pub certificate: Certificate,
}

/// Runs the Gram-trace certificate on the minimal-trace Gram matrix of Σ x_i^d.
/// Only d ≥ 4 has the off-diagonal monomials that break optimality; at d = 2
/// the certificate passes and `refuted` is false.
pub fn refute_ld_for_p3(n: usize, d: u32, tol: f64, cfg: &EngineConfig) -> Result<Refutation> {
    let form = GramForm::diagonal_lp(n, d)?;
    let g = form.expand();
    let m = moment_matrix(&g, d / 2, 1, cfg)?;
    let certificate = certify_p3(&form, &m, tol)?;
    let min_eigenvalue = certificate.dual_scalar("min_eigenvalue").unwrap_or(f64::NAN);
    Ok(Refutation {
        n,
        d,
        min_eigenvalue,
        refuted: !certificate.passed(),
        certificate,
    })
}
