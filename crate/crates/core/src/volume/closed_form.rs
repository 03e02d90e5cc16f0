use crate::error::{Error, Result};
use crate::special::ln_gamma;

// exp overflows / underflows past these
const LN_MAX: f64 = 709.0;
const LN_MIN: f64 = -744.0;

fn check_args(n: usize, d: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::InvalidArgument(format!("d must be positive and finite, got {d}")));
    }
    Ok(())
}

fn finish(ln_value: f64, n: usize, d: f64) -> Result<f64> {
    if !ln_value.is_finite() || !(LN_MIN..=LN_MAX).contains(&ln_value) {
        return Err(Error::Overflow { n, d });
    }
    Ok(ln_value.exp())
}

/// vol(B_d) = 2ⁿ Γ(1/d)ⁿ / (n d^(n−1) Γ(n/d)), computed in log space.
pub fn closed_form_ball_volume(n: usize, d: f64) -> Result<f64> {
    check_args(n, d)?;
    let nf = n as f64;
    let ln = nf * std::f64::consts::LN_2 + nf * ln_gamma(1.0 / d)
        - nf.ln()
        - (nf - 1.0) * d.ln()
        - ln_gamma(nf / d);
    finish(ln, n, d)
}

/// ∫_{B_d} |x_i|^d dx = vol(B_d)/(n + d).
pub fn closed_form_ball_moment(n: usize, d: f64, axis: usize) -> Result<f64> {
    if axis >= n.max(1) {
        return Err(Error::InvalidArgument(format!("axis {axis} out of range for n = {n}")));
    }
    Ok(closed_form_ball_volume(n, d)? / (n as f64 + d))
}

/// ∫_{B_d} |x|^α dx = Π_i (2Γ((α_i+1)/d)/d) / Γ(1 + (n+|α|)/d).
pub fn closed_form_lp_moment(d: f64, alpha: &[f64]) -> Result<f64> {
    let n = alpha.len();
    check_args(n, d)?;
    if alpha.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
        return Err(Error::InvalidArgument("exponents must be non-negative".into()));
    }
    let total: f64 = alpha.iter().sum();
    let mut ln = -ln_gamma(1.0 + (n as f64 + total) / d);
    for &a in alpha {
        ln += std::f64::consts::LN_2 + ln_gamma((a + 1.0) / d) - d.ln();
    }
    finish(ln, n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_volumes() {
        assert!((closed_form_ball_volume(2, 2.0).unwrap() - PI).abs() < 1e-12);
        assert!((closed_form_ball_volume(2, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((closed_form_ball_volume(2, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((closed_form_ball_volume(3, 2.0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        // mpmath, 30 digits
        let rho4 = 3.70814935460274383686770069439;
        assert!((closed_form_ball_volume(2, 4.0).unwrap() - rho4).abs() < 1e-12);
        assert_eq!(closed_form_ball_volume(1, 3.0).unwrap(), 2.0);
    }

    #[test]
    fn axis_moments() {
        assert!((closed_form_ball_moment(2, 2.0, 0).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!((closed_form_ball_moment(3, 2.0, 2).unwrap() - 4.0 * PI / 15.0).abs() < 1e-12);
        let m = closed_form_ball_moment(2, 4.0, 1).unwrap();
        assert!((m - 0.618024892433790639477950115732).abs() < 1e-12);
        assert!(closed_form_ball_moment(2, 4.0, 2).is_err());
    }

    #[test]
    fn general_moments() {
        let v = closed_form_lp_moment(4.0, &[0.0, 0.0]).unwrap();
        assert!((v - closed_form_ball_volume(2, 4.0).unwrap()).abs() < 1e-12);
        let m22 = closed_form_lp_moment(4.0, &[2.0, 2.0]).unwrap();
        assert!((m22 - 0.282404361597993028868833041161).abs() < 1e-12);
        let half = closed_form_lp_moment(0.5, &[0.5, 0.0]).unwrap();
        assert!((half - 4.0 / 15.0).abs() < 1e-12);
        let mid = closed_form_lp_moment(0.5, &[0.25, 0.25]).unwrap();
        assert!((mid - 0.235619449019234493).abs() < 1e-12);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(closed_form_ball_volume(400, 0.01), Err(Error::Overflow { .. })));
        assert!(matches!(closed_form_ball_volume(2000, 2.0), Err(Error::Overflow { .. })));
        assert!(closed_form_ball_volume(0, 2.0).is_err());
        assert!(closed_form_ball_volume(2, -1.0).is_err());
    }
}
