use std::collections::BTreeMap;

use super::closed_form::closed_form_lp_moment;
use super::feasibility::finite_volume_test;
use super::kernel::{Compiled, Integrand, Kernel};
use super::table::{content_hash, MomentEntry, MomentMatrix, MomentTable};
use super::{grid, monte_carlo, spherical, Backend, EngineConfig, Estimate, VolumeEstimate};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::poly::{
    enumerate_indices, multinomial_coefficient, Convention, ExponentVector, GeneralizedPolynomial,
};

/// Estimates of several integrands over one sublevel set.
#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub values: Vec<Estimate>,
    pub backend: Backend,
    pub samples_or_nodes: u64,
}

/// Integrates every integrand over {g ≤ 1} with shared nodes or samples.
pub fn integrate(
    g: &GeneralizedPolynomial,
    integrands: &[Integrand],
    cfg: &EngineConfig,
) -> Result<Integration> {
    let compiled = Compiled::new(g, integrands)?;
    let n = g.n();
    let budget = cfg.budget_for(n);
    let (values, samples_or_nodes) = match cfg.backend {
        Backend::ClosedForm => (closed_form(g, integrands)?, 1),
        Backend::Spherical => match spherical::integrate(g, &compiled, budget) {
            Ok(out) => (out.values.into_iter().map(Estimate::exact).collect(), out.nodes),
            Err(Error::InfiniteVolume { sphere_minimum }) => {
                let refined = finite_volume_test(g).sphere_minimum;
                return Err(Error::InfiniteVolume {
                    sphere_minimum: refined.min(sphere_minimum),
                });
            }
            Err(e) => return Err(e),
        },
        Backend::MonteCarlo => {
            let out = monte_carlo::integrate(g, &compiled, budget, cfg.seed)?;
            (out.values, out.samples)
        }
        Backend::GridOracle => {
            let out = grid::integrate(g, &compiled, budget, cfg.seed)?;
            (out.values, out.points)
        }
    };
    Ok(Integration {
        values,
        backend: cfg.backend,
        samples_or_nodes,
    })
}

/// λ when g = λ·Σ|x_i|^d with λ > 0.
fn lp_multiple(g: &GeneralizedPolynomial) -> Option<f64> {
    let mono = g.monomial_coefficients();
    let nonzero: Vec<_> = mono.iter().filter(|(_, c)| **c != 0.0).collect();
    if nonzero.len() != g.n() {
        return None;
    }
    let lambda = *nonzero[0].1;
    let all_axes = nonzero
        .iter()
        .all(|(a, c)| (a.is_axis_power() || g.n() == 1) && **c == lambda);
    (all_axes && lambda > 0.0).then_some(lambda)
}

fn closed_form(g: &GeneralizedPolynomial, integrands: &[Integrand]) -> Result<Vec<Estimate>> {
    let lambda = lp_multiple(g).ok_or_else(|| Error::UnsupportedBackend {
        backend: "closed_form",
        reason: "closed forms exist only for positive multiples of Σ|x_i|^d".into(),
    })?;
    let n = g.n();
    let d = g.d();
    let monomial = |alpha: &ExponentVector, signed: bool| -> Result<f64> {
        if signed && alpha.has_odd_component() {
            return Ok(0.0);
        }
        let e: Vec<f64> = (0..n).map(|i| alpha.exponent(i)).collect();
        Ok(closed_form_lp_moment(d, &e)? * lambda.powf(-(n as f64 + alpha.degree()) / d))
    };
    integrands
        .iter()
        .map(|integrand| {
            let mut total = 0.0;
            for (w, k) in &integrand.terms {
                total += w * match k {
                    Kernel::One => monomial(&ExponentVector::zeros(n, 1), false)?,
                    Kernel::Monomial(a) => monomial(a, g.is_signed())?,
                    Kernel::Poly(p) => {
                        let mut s = 0.0;
                        for (a, c) in p.monomial_coefficients() {
                            if c != 0.0 {
                                s += c * monomial(&a, p.is_signed())?;
                            }
                        }
                        s
                    }
                };
            }
            Ok(Estimate::exact(total))
        })
        .collect()
}

pub fn volume(g: &GeneralizedPolynomial, cfg: &EngineConfig) -> Result<VolumeEstimate> {
    let out = integrate(g, &[Integrand::one()], cfg)?;
    let e = out.values[0];
    Ok(VolumeEstimate {
        value: e.value,
        std_error: e.std_error,
        backend: out.backend,
        samples_or_nodes: out.samples_or_nodes,
    })
}

/// True when ∫_G x^α vanishes by the reflection x_i ↦ −x_i.
fn vanishes_by_symmetry(g: &GeneralizedPolynomial, alpha: &ExponentVector) -> bool {
    g.is_signed()
        && alpha.q() == 1
        && (0..g.n()).any(|i| alpha.numerators()[i] % 2 == 1 && g.is_even_in(i))
}

pub fn moment(
    g: &GeneralizedPolynomial,
    alpha: &ExponentVector,
    cfg: &EngineConfig,
) -> Result<Estimate> {
    if alpha.dim() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "exponent {alpha} has {} entries, polynomial has n = {}",
            alpha.dim(),
            g.n()
        )));
    }
    if vanishes_by_symmetry(g, alpha) {
        return Ok(Estimate::exact(0.0));
    }
    Ok(integrate(g, &[Integrand::monomial(alpha.clone())], cfg)?.values[0])
}

/// Moments for every requested exponent plus the volume (all-zeros index).
pub fn moments(
    g: &GeneralizedPolynomial,
    alphas: &[ExponentVector],
    cfg: &EngineConfig,
) -> Result<MomentTable> {
    let q = alphas.first().map_or(g.q(), |a| a.q());
    let zero = ExponentVector::zeros(g.n(), q);
    let mut todo: Vec<ExponentVector> = Vec::new();
    let mut entries = BTreeMap::new();
    for a in alphas {
        if a.dim() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "exponent {a} has {} entries, polynomial has n = {}",
                a.dim(),
                g.n()
            )));
        }
        if a.total() == 0 {
            continue;
        }
        if vanishes_by_symmetry(g, a) {
            entries.insert(a.clone(), MomentEntry { value: 0.0, std_error: 0.0 });
        } else if !todo.contains(a) {
            todo.push(a.clone());
        }
    }
    let mut integrands = vec![Integrand::one()];
    integrands.extend(todo.iter().cloned().map(Integrand::monomial));
    let out = integrate(g, &integrands, cfg)?;
    let vol = VolumeEstimate {
        value: out.values[0].value,
        std_error: out.values[0].std_error,
        backend: out.backend,
        samples_or_nodes: out.samples_or_nodes,
    };
    entries.insert(
        zero,
        MomentEntry {
            value: vol.value,
            std_error: vol.std_error,
        },
    );
    for (a, e) in todo.into_iter().zip(&out.values[1..]) {
        entries.insert(
            a,
            MomentEntry {
                value: e.value,
                std_error: e.std_error,
            },
        );
    }
    Ok(MomentTable::new(entries, vol, content_hash(g)))
}

/// Moments over the full coefficient index set of g.
pub fn moment_table(g: &GeneralizedPolynomial, cfg: &EngineConfig) -> Result<MomentTable> {
    moments(g, &g.index_set(), cfg)
}

/// ∂f/∂g_α = −((n+d)/d)·∫_G x^α, times c_α for multinomial coefficients.
pub fn gradient_from_table(
    g: &GeneralizedPolynomial,
    table: &MomentTable,
) -> Result<BTreeMap<ExponentVector, Estimate>> {
    let n = g.n() as f64;
    let d = g.d();
    let k = -(n + d) / d;
    g.index_set()
        .into_iter()
        .map(|a| {
            let m = table.get(&a)?;
            let w = match g.convention() {
                Convention::Monomial => 1.0,
                Convention::Multinomial => multinomial_coefficient(&a)? as f64,
            };
            let e = Estimate {
                value: k * w * m.value,
                std_error: (k * w).abs() * m.std_error,
            };
            Ok((a, e))
        })
        .collect()
}

pub fn grad_volume(
    g: &GeneralizedPolynomial,
    cfg: &EngineConfig,
) -> Result<BTreeMap<ExponentVector, Estimate>> {
    gradient_from_table(g, &moment_table(g, cfg)?)
}

/// M(α, β) = ∫_G x^(α+β) (|x| for generalized g) over the basis `enumerate_indices(n, half_times_q, q)`.
pub fn moment_matrix(
    g: &GeneralizedPolynomial,
    half_times_q: u32,
    q: u32,
    cfg: &EngineConfig,
) -> Result<MomentMatrix> {
    if q == 0 {
        return Err(Error::InvalidArgument("lattice denominator must be positive".into()));
    }
    let basis = enumerate_indices(g.n(), half_times_q, q);
    let mut sums = Vec::new();
    for a in &basis {
        for b in &basis {
            let s = a.add(b)?;
            if !sums.contains(&s) {
                sums.push(s);
            }
        }
    }
    let table = moments(g, &sums, cfg)?;
    let s = basis.len();
    let mut m = SymMatrix::zeros(s);
    let mut se = SymMatrix::zeros(s);
    for i in 0..s {
        for j in i..s {
            let e = table.get(&basis[i].add(&basis[j])?)?;
            m.set_sym(i, j, e.value);
            se.set_sym(i, j, e.std_error);
        }
    }
    Ok(MomentMatrix {
        basis,
        matrix: m,
        std_error: se,
        volume: *table.volume(),
    })
}

/// ∫_G g − (n/(n+d))·vol(G), both terms from the same nodes or samples.
pub fn euler_residual(g: &GeneralizedPolynomial, cfg: &EngineConfig) -> Result<Estimate> {
    let n = g.n() as f64;
    let integrand = Integrand::poly(g.clone()).plus(-n / (n + g.d()), Kernel::One);
    Ok(integrate(g, &[integrand], cfg)?.values[0])
}
