//! Positively homogeneous (generalized) polynomials.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::index::{enumerate_indices, multinomial_coefficient, Degree, ExponentVector};
use crate::error::{Error, Result};

/// How stored coefficients map to terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// term = g_α · x^α
    Monomial,
    /// term = c_α · g_α · x^α with c_α the multinomial coefficient (q = 1 only)
    Multinomial,
}

/// Finite combination of terms x^α (or |x|^α) with every |α| equal to `degree`.
///
/// When `q == 1` and the degree is an even integer this is an ordinary
/// homogeneous form evaluated with signed monomials; otherwise every monomial
/// is evaluated on |x|.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPolynomial {
    n: usize,
    degree: Degree,
    q: u32,
    convention: Convention,
    terms: BTreeMap<ExponentVector, f64>,
}

impl GeneralizedPolynomial {
    /// Builds a polynomial; duplicate exponents are summed.
    pub fn new(
        n: usize,
        degree: Degree,
        q: u32,
        convention: Convention,
        terms: impl IntoIterator<Item = (ExponentVector, f64)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse("n", "dimension must be at least 1"));
        }
        if q == 0 {
            return Err(Error::parse("q", "lattice denominator must be at least 1"));
        }
        let dq = degree.times(q).ok_or_else(|| {
            Error::parse("q", format!("d = {degree} is not on the lattice (1/{q})·ℤ"))
        })?;
        if convention == Convention::Multinomial && q != 1 {
            return Err(Error::ConventionMismatch(
                "multinomial convention requires q = 1".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (i, (alpha, c)) in terms.into_iter().enumerate() {
            if alpha.dim() != n {
                return Err(Error::parse(
                    format!("terms[{i}].alpha_times_q"),
                    format!("expected {n} exponents, got {}", alpha.dim()),
                ));
            }
            if alpha.q() != q {
                return Err(Error::parse(
                    format!("terms[{i}].alpha_times_q"),
                    format!("lattice denominator {} differs from q = {q}", alpha.q()),
                ));
            }
            if alpha.total() != dq {
                return Err(Error::parse(
                    format!("terms[{i}].alpha_times_q"),
                    format!(
                        "degree mismatch: exponents sum to {}/{q}, declared d = {degree}",
                        alpha.total()
                    ),
                ));
            }
            if !c.is_finite() {
                return Err(Error::parse(format!("terms[{i}].coeff"), "coefficient is not finite"));
            }
            *map.entry(alpha).or_insert(0.0) += c;
        }
        Ok(GeneralizedPolynomial {
            n,
            degree,
            q,
            convention,
            terms: map,
        })
    }

    /// Polynomial with one coefficient per index of `index_set(n, degree, q)`.
    pub fn from_dense(
        n: usize,
        degree: Degree,
        q: u32,
        convention: Convention,
        coefficients: &[f64],
    ) -> Result<Self> {
        let dq = degree
            .times(q)
            .ok_or_else(|| Error::parse("q", format!("d = {degree} is not on the lattice (1/{q})·ℤ")))?;
        let idx = enumerate_indices(n, dq, q);
        if idx.len() != coefficients.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for an index set of size {}",
                coefficients.len(),
                idx.len()
            )));
        }
        Self::new(n, degree, q, convention, idx.into_iter().zip(coefficients.iter().copied()))
    }

    /// Σ |x_i|^d, the polynomial whose unit sublevel set is the L_d ball.
    pub fn lp_ball(n: usize, degree: Degree, q: u32) -> Result<Self> {
        let dq = degree
            .times(q)
            .ok_or_else(|| Error::parse("q", format!("d = {degree} is not on the lattice (1/{q})·ℤ")))?;
        Self::new(
            n,
            degree,
            q,
            Convention::Monomial,
            (0..n).map(|i| (ExponentVector::axis(n, i, dq, q), 1.0)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn d(&self) -> f64 {
        self.degree.as_f64()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// q·d as an integer (validated at construction).
    pub fn d_times_q(&self) -> u32 {
        self.degree.times(self.q).expect("validated at construction")
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, f64> {
        &self.terms
    }

    pub fn coefficient(&self, alpha: &ExponentVector) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    /// True for ordinary forms in Hom_d (evaluated on signed x).
    pub fn is_signed(&self) -> bool {
        self.q == 1 && self.degree.is_even_integer()
    }

    /// The full coefficient index set of this polynomial's space.
    pub fn index_set(&self) -> Vec<ExponentVector> {
        enumerate_indices(self.n, self.d_times_q(), self.q)
    }

    /// Coefficients over `index_set()` in this polynomial's own convention.
    pub fn dense(&self) -> Vec<f64> {
        self.index_set().iter().map(|a| self.coefficient(a)).collect()
    }

    /// True if x ↦ g(x) is even in coordinate `i` (always for generalized polynomials).
    pub fn is_even_in(&self, i: usize) -> bool {
        !self.is_signed()
            || self
                .terms
                .iter()
                .all(|(a, &c)| c == 0.0 || a.numerators()[i] % 2 == 0)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "point dimension differs from n");
        self.evaluator().eval(x)
    }

    /// Multiplies every coefficient by λ > 0.
    pub fn rescale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "rescale factor must be positive and finite, got {lambda}"
            )));
        }
        Ok(self.map_coefficients(|_, c| c * lambda))
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(&ExponentVector, f64) -> f64) -> Self {
        GeneralizedPolynomial {
            terms: self.terms.iter().map(|(a, &c)| (a.clone(), f(a, c))).collect(),
            ..self.clone()
        }
    }

    /// a·self + b·other, for polynomials in the same space and convention.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.n != other.n
            || self.degree != other.degree
            || self.q != other.q
            || self.convention != other.convention
        {
            return Err(Error::DimensionMismatch(
                "polynomials live in different spaces".into(),
            ));
        }
        let mut terms: BTreeMap<ExponentVector, f64> =
            self.terms.iter().map(|(k, &c)| (k.clone(), a * c)).collect();
        for (k, &c) in &other.terms {
            *terms.entry(k.clone()).or_insert(0.0) += b * c;
        }
        Ok(GeneralizedPolynomial { terms, ..self.clone() })
    }

    /// Re-expresses the coefficients in another convention (exact ·c_α / ÷c_α).
    pub fn to_convention(&self, target: Convention) -> Result<Self> {
        if target == self.convention {
            return Ok(self.clone());
        }
        if self.q != 1 {
            return Err(Error::ConventionMismatch(
                "multinomial convention requires q = 1".into(),
            ));
        }
        let mut terms = BTreeMap::new();
        for (a, &c) in &self.terms {
            let w = multinomial_coefficient(a)? as f64;
            let v = match target {
                Convention::Monomial => c * w,
                Convention::Multinomial => c / w,
            };
            terms.insert(a.clone(), v);
        }
        Ok(GeneralizedPolynomial {
            terms,
            convention: target,
            ..self.clone()
        })
    }

    /// Coefficients of the x^α terms, whatever the stored convention.
    pub fn monomial_coefficients(&self) -> BTreeMap<ExponentVector, f64> {
        match self.convention {
            Convention::Monomial => self.terms.clone(),
            Convention::Multinomial => self
                .to_convention(Convention::Monomial)
                .expect("multinomial polynomials have q = 1")
                .terms,
        }
    }

    /// Precompiled form for repeated evaluation.
    pub fn evaluator(&self) -> Evaluator {
        let terms = self
            .monomial_coefficients()
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(a, c)| (a.numerators().iter().map(|&k| k as i32).collect(), c))
            .collect();
        Evaluator {
            n: self.n,
            signed: self.is_signed(),
            root: 1.0 / self.q as f64,
            q_is_one: self.q == 1,
            terms,
        }
    }
}

const STACK_DIM: usize = 16;

/// Evaluates Σ c·Π bᵢ^kᵢ where bᵢ = xᵢ (signed forms) or |xᵢ|^(1/q).
#[derive(Debug, Clone)]
pub struct Evaluator {
    n: usize,
    signed: bool,
    root: f64,
    q_is_one: bool,
    terms: Vec<(Vec<i32>, f64)>,
}

impl Evaluator {
    #[inline]
    fn base(&self, x: f64) -> f64 {
        if self.signed {
            x
        } else if self.q_is_one {
            x.abs()
        } else {
            x.abs().powf(self.root)
        }
    }

    #[inline]
    fn eval_bases(&self, b: &[f64]) -> f64 {
        let mut s = 0.0;
        for (k, c) in &self.terms {
            let mut t = *c;
            for (bi, &ki) in b.iter().zip(k) {
                if ki != 0 {
                    t *= bi.powi(ki);
                }
            }
            s += t;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        if self.n <= STACK_DIM {
            let mut b = [0.0f64; STACK_DIM];
            for (bi, &xi) in b.iter_mut().zip(x) {
                *bi = self.base(xi);
            }
            self.eval_bases(&b[..self.n])
        } else {
            let b: Vec<f64> = x.iter().map(|&xi| self.base(xi)).collect();
            self.eval_bases(&b)
        }
    }
}
