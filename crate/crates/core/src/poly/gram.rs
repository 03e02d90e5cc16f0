//! Gram-matrix representations g_Q(x) = v(x)ᵀ Q v(x) of even forms.

use std::collections::BTreeMap;

use super::index::{binomial, enumerate_indices, Degree, ExponentVector};
use super::polynomial::{Convention, GeneralizedPolynomial};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

pub(crate) const SYMMETRY_TOL: f64 = 1e-12;

/// Symmetric Q indexed by the degree-d/2 monomials in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct GramForm {
    n: usize,
    d: u32,
    q: SymMatrix,
}

/// s(k) = C(n − 1 + k, k), the number of degree-k monomials in n variables.
pub fn monomial_count(n: usize, k: u32) -> usize {
    binomial(n as u64 - 1 + k as u64, k as u64) as usize
}

impl GramForm {
    pub fn new(n: usize, d: u32, q: SymMatrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse("n", "dimension must be at least 1"));
        }
        if d < 2 || !d.is_multiple_of(2) {
            return Err(Error::parse("d", format!("Gram forms need an even degree ≥ 2, got {d}")));
        }
        let s = monomial_count(n, d / 2);
        if q.size() != s {
            return Err(Error::parse(
                "Q",
                format!("expected a {s}×{s} matrix for n = {n}, d = {d}, got {}×{}", q.size(), q.size()),
            ));
        }
        if !q.is_finite() {
            return Err(Error::parse("Q", "entries must be finite"));
        }
        let q = SymMatrix::from_rows(&q.rows(), SYMMETRY_TOL)?;
        Ok(GramForm { n, d, q })
    }

    /// Minimal-trace Gram matrix of Σ x_i^d: ones on the x_i^(d/2) diagonal slots.
    pub fn diagonal_lp(n: usize, d: u32) -> Result<Self> {
        if d < 2 || !d.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("need even d ≥ 2, got {d}")));
        }
        let basis = enumerate_indices(n, d / 2, 1);
        let diag: Vec<f64> = basis
            .iter()
            .map(|a| if a.is_axis_power() || n == 1 { 1.0 } else { 0.0 })
            .collect();
        GramForm::new(n, d, SymMatrix::from_diagonal(&diag))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.q
    }

    pub fn trace(&self) -> f64 {
        self.q.trace()
    }

    /// Basis v_{d/2}(x) labelling rows and columns of Q.
    pub fn basis(&self) -> Vec<ExponentVector> {
        enumerate_indices(self.n, self.d / 2, 1)
    }

    pub fn with_matrix(&self, q: SymMatrix) -> Result<Self> {
        GramForm::new(self.n, self.d, q)
    }

    pub fn scaled(&self, k: f64) -> Self {
        GramForm {
            q: self.q.scaled(k),
            ..self.clone()
        }
    }

    /// Expands to monomial coefficients: coefficient of x^γ is Σ_{α+β=γ} Q(α,β).
    pub fn expand(&self) -> GeneralizedPolynomial {
        let basis = self.basis();
        let mut terms: BTreeMap<ExponentVector, f64> = enumerate_indices(self.n, self.d, 1)
            .into_iter()
            .map(|g| (g, 0.0))
            .collect();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = a.add(b).expect("same lattice");
                *terms.get_mut(&g).expect("γ in index set") += self.q.get(i, j);
            }
        }
        GeneralizedPolynomial::new(
            self.n,
            Degree::integer(self.d).expect("d ≥ 2"),
            1,
            Convention::Monomial,
            terms.into_iter().filter(|(_, c)| *c != 0.0),
        )
        .expect("Gram expansion is homogeneous of degree d")
    }
}

/// Free function form of [`GramForm::expand`].
pub fn expand_gram(form: &GramForm) -> GeneralizedPolynomial {
    form.expand()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(g: &GeneralizedPolynomial) -> Vec<f64> {
        g.dense()
    }

    #[test]
    fn identity_quadratic() {
        let f = GramForm::new(2, 2, SymMatrix::identity(2)).unwrap();
        assert_eq!(coeffs(&f.expand()), vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn identity_quartic_has_cross_term() {
        // basis x1², x1x2, x2²
        let f = GramForm::new(2, 4, SymMatrix::identity(3)).unwrap();
        assert_eq!(coeffs(&f.expand()), vec![1.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn corner_entries_give_square_of_quadratic() {
        let mut q = SymMatrix::zeros(3);
        q.set(0, 0, 1.0);
        q.set(2, 2, 1.0);
        q.set_sym(0, 2, 1.0);
        let f = GramForm::new(2, 4, q).unwrap();
        assert_eq!(coeffs(&f.expand()), vec![1.0, 0.0, 2.0, 0.0, 1.0]);
    }

    #[test]
    fn diagonal_lp_is_sum_of_powers() {
        let f = GramForm::diagonal_lp(3, 4).unwrap();
        assert_eq!(f.trace(), 3.0);
        let g = f.expand();
        assert_eq!(g, GeneralizedPolynomial::lp_ball(3, Degree::integer(4).unwrap(), 1).unwrap());
    }

    #[test]
    fn rejects_wrong_size_and_odd_degree() {
        assert!(GramForm::new(2, 4, SymMatrix::identity(2)).is_err());
        assert!(GramForm::new(2, 3, SymMatrix::identity(2)).is_err());
        assert_eq!(monomial_count(3, 2), 6);
    }
}
