use serde::{Deserialize, Serialize};

use super::gram::GramForm;
use super::index::multinomial_coefficient;
use super::polynomial::{Convention, GeneralizedPolynomial};
use crate::error::{Error, Result};

/// Coefficient norms of a polynomial or Gram form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    /// Number of non-zero coefficients.
    pub l0: usize,
    /// Σ |g_α| over monomial-convention coefficients.
    pub l1: f64,
    /// Σ c_α p_α² over multinomial-convention coefficients; `None` when q ≠ 1.
    pub l2_weighted_sq: Option<f64>,
    /// trace(Q); only for Gram forms.
    pub trace: Option<f64>,
}

/// ‖g‖²_{2,d} = Σ c_α p_α² where g = Σ c_α p_α x^α.
pub fn weighted_l2_sq(g: &GeneralizedPolynomial) -> Result<f64> {
    if g.q() != 1 {
        return Err(Error::InvalidArgument(format!(
            "weighted ℓ2 norm is defined only for q = 1 (got q = {})",
            g.q()
        )));
    }
    let p = g.to_convention(Convention::Multinomial)?;
    p.terms()
        .iter()
        .map(|(a, &c)| Ok(multinomial_coefficient(a)? as f64 * c * c))
        .sum()
}

pub fn norms(g: &GeneralizedPolynomial) -> NormReport {
    let mono = g.monomial_coefficients();
    NormReport {
        l0: mono.values().filter(|c| **c != 0.0).count(),
        l1: mono.values().map(|c| c.abs()).sum(),
        l2_weighted_sq: weighted_l2_sq(g).ok(),
        trace: None,
    }
}

pub fn gram_norms(form: &GramForm) -> NormReport {
    NormReport {
        trace: Some(form.trace()),
        ..norms(&form.expand())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::index::Degree;

    #[test]
    fn lp_ball_norms() {
        for n in 1..=4 {
            let g = GeneralizedPolynomial::lp_ball(n, Degree::integer(4).unwrap(), 1).unwrap();
            let r = norms(&g);
            assert_eq!(r.l0, n);
            assert_eq!(r.l1, n as f64);
        }
    }

    #[test]
    fn weighted_norm_of_squared_quadratic() {
        let p = GeneralizedPolynomial::from_dense(
            2,
            Degree::integer(4).unwrap(),
            1,
            Convention::Multinomial,
            &[1.0, 0.0, 1.0 / 3.0, 0.0, 1.0],
        )
        .unwrap();
        let r = norms(&p);
        assert!((r.l2_weighted_sq.unwrap() - 8.0 / 3.0).abs() < 1e-15);
        // the same polynomial in the monomial convention has the same norm
        let m = p.to_convention(Convention::Monomial).unwrap();
        assert!((weighted_l2_sq(&m).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.l1, 4.0);
    }

    #[test]
    fn zero_polynomial() {
        let z = GeneralizedPolynomial::from_dense(
            2,
            Degree::integer(2).unwrap(),
            1,
            Convention::Monomial,
            &[0.0, 0.0, 0.0],
        )
        .unwrap();
        let r = norms(&z);
        assert_eq!((r.l0, r.l1, r.l2_weighted_sq), (0, 0.0, Some(0.0)));
    }

    #[test]
    fn l2_rejected_for_generalized() {
        let g = GeneralizedPolynomial::lp_ball(2, Degree::new(1, 2).unwrap(), 4).unwrap();
        assert!(weighted_l2_sq(&g).is_err());
        assert_eq!(norms(&g).l2_weighted_sq, None);
    }

    #[test]
    fn gram_trace() {
        let f = GramForm::diagonal_lp(2, 4).unwrap();
        let r = gram_norms(&f);
        assert_eq!(r.trace, Some(2.0));
        assert_eq!(r.l1, 2.0);
    }
}
