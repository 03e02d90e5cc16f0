use crate::error::{Error, Result};
use crate::poly::{Evaluator, ExponentVector, GeneralizedPolynomial};

/// A positively homogeneous function integrated over the sublevel set.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// 1, giving the volume.
    One,
    /// x^α for signed regions, |x|^α otherwise.
    Monomial(ExponentVector),
    /// A homogeneous (generalized) polynomial.
    Poly(GeneralizedPolynomial),
}

impl Kernel {
    pub fn degree(&self) -> f64 {
        match self {
            Kernel::One => 0.0,
            Kernel::Monomial(a) => a.degree(),
            Kernel::Poly(p) => p.d(),
        }
    }
}

/// Σ_k w_k ∫_G K_k(x) dx, estimated from one shared set of nodes or samples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Integrand {
    pub terms: Vec<(f64, Kernel)>,
}

impl Integrand {
    pub fn one() -> Self {
        Integrand {
            terms: vec![(1.0, Kernel::One)],
        }
    }

    pub fn monomial(alpha: ExponentVector) -> Self {
        Integrand {
            terms: vec![(1.0, Kernel::Monomial(alpha))],
        }
    }

    pub fn poly(p: GeneralizedPolynomial) -> Self {
        Integrand {
            terms: vec![(1.0, Kernel::Poly(p))],
        }
    }

    pub fn plus(mut self, weight: f64, kernel: Kernel) -> Self {
        self.terms.push((weight, kernel));
        self
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Eval {
    One,
    Signed(Vec<i32>),
    AbsInt(Vec<i32>),
    AbsReal(Vec<f64>),
    Poly(Evaluator),
}

impl Eval {
    #[inline]
    pub(crate) fn at(&self, x: &[f64]) -> f64 {
        match self {
            Eval::One => 1.0,
            Eval::Signed(k) => {
                let mut t = 1.0;
                for (xi, &ki) in x.iter().zip(k) {
                    if ki != 0 {
                        t *= xi.powi(ki);
                    }
                }
                t
            }
            Eval::AbsInt(k) => {
                let mut t = 1.0;
                for (xi, &ki) in x.iter().zip(k) {
                    if ki != 0 {
                        t *= xi.abs().powi(ki);
                    }
                }
                t
            }
            Eval::AbsReal(e) => {
                let mut t = 1.0;
                for (xi, &ei) in x.iter().zip(e) {
                    if ei != 0.0 {
                        t *= xi.abs().powf(ei);
                    }
                }
                t
            }
            Eval::Poly(p) => p.eval(x),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledTerm {
    pub weight: f64,
    /// Index into `Compiled::degrees`.
    pub degree: usize,
    pub eval: Eval,
}

/// Integrands lowered to evaluable form; degrees are deduplicated so each
/// backend computes one radial factor per distinct degree.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub degrees: Vec<f64>,
    pub integrands: Vec<Vec<CompiledTerm>>,
}

impl Compiled {
    pub(crate) fn new(g: &GeneralizedPolynomial, integrands: &[Integrand]) -> Result<Self> {
        let mut degrees: Vec<f64> = Vec::new();
        let mut out = Vec::with_capacity(integrands.len());
        for integrand in integrands {
            let mut terms = Vec::with_capacity(integrand.terms.len());
            for (w, k) in &integrand.terms {
                let e = k.degree();
                let degree = match degrees.iter().position(|&x| x == e) {
                    Some(i) => i,
                    None => {
                        degrees.push(e);
                        degrees.len() - 1
                    }
                };
                terms.push(CompiledTerm {
                    weight: *w,
                    degree,
                    eval: lower(g, k)?,
                });
            }
            out.push(terms);
        }
        Ok(Compiled {
            degrees,
            integrands: out,
        })
    }

    /// Σ_k w_k·K_k(x)·scale[degree_k] for integrand `i`.
    #[inline]
    pub(crate) fn value(&self, i: usize, x: &[f64], scale: &[f64]) -> f64 {
        self.integrands[i]
            .iter()
            .map(|t| t.weight * scale[t.degree] * t.eval.at(x))
            .sum()
    }

    pub(crate) fn len(&self) -> usize {
        self.integrands.len()
    }
}

fn lower(g: &GeneralizedPolynomial, k: &Kernel) -> Result<Eval> {
    Ok(match k {
        Kernel::One => Eval::One,
        Kernel::Monomial(a) => {
            if a.dim() != g.n() {
                return Err(Error::DimensionMismatch(format!(
                    "exponent {a} has {} entries, polynomial has n = {}",
                    a.dim(),
                    g.n()
                )));
            }
            let ints: Vec<i32> = a.numerators().iter().map(|&k| k as i32).collect();
            if g.is_signed() {
                if a.q() != 1 {
                    return Err(Error::InvalidArgument(format!(
                        "fractional exponent {a} on a signed polynomial"
                    )));
                }
                Eval::Signed(ints)
            } else if a.q() == 1 {
                Eval::AbsInt(ints)
            } else {
                Eval::AbsReal((0..a.dim()).map(|i| a.exponent(i)).collect())
            }
        }
        Kernel::Poly(p) => {
            if p.n() != g.n() {
                return Err(Error::DimensionMismatch(format!(
                    "integrand has n = {}, polynomial has n = {}",
                    p.n(),
                    g.n()
                )));
            }
            Eval::Poly(p.evaluator())
        }
    })
}
