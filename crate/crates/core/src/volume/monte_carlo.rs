//! Importance sampling of ∫ K e^(−g) from the density ∝ exp(−c Σ|x_i|^d),
//! with c the minimum of g / Σ|x_i|^d over the sphere so weights stay ≤ 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;
use rayon::prelude::*;

use super::feasibility::{sphere_minimum, FEASIBILITY_TOL};
use super::kernel::Compiled;
use super::Estimate;
use crate::error::{Error, Result};
use crate::poly::GeneralizedPolynomial;
use crate::special::{gamma, ln_gamma};

pub(crate) const BATCH: usize = 8192;
/// Effective sample sizes below this fraction of the budget are reported as divergent.
pub(crate) const MIN_ESS_FRACTION: f64 = 0.01;

pub(crate) struct Output {
    pub values: Vec<Estimate>,
    pub samples: u64,
}

struct Batch {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    w: f64,
    w_sq: f64,
}

/// Largest c with g(x) ≥ c·Σ|x_i|^d, shrunk slightly to absorb search error.
fn reference_scale(g: &GeneralizedPolynomial) -> Result<f64> {
    let ev = g.evaluator();
    let d = g.d();
    let plain = sphere_minimum(g.n(), |x| ev.eval(x));
    if !(plain.value > FEASIBILITY_TOL) {
        return Err(Error::InfiniteVolume {
            sphere_minimum: plain.value,
        });
    }
    let ratio = sphere_minimum(g.n(), |x| {
        ev.eval(x) / x.iter().map(|v| v.abs().powf(d)).sum::<f64>()
    });
    Ok(0.99 * ratio.value)
}

pub(crate) fn integrate(
    g: &GeneralizedPolynomial,
    compiled: &Compiled,
    budget: usize,
    seed: u64,
) -> Result<Output> {
    let n = g.n();
    let d = g.d();
    let c = reference_scale(g)?;
    let ev = g.evaluator();
    let shape = Gamma::new(1.0 / d, 1.0).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let inv_d = 1.0 / d;
    let c_root = c.powf(-inv_d);
    // ln Z_c = n ln(2Γ(1+1/d)) − (n/d) ln c
    let ln_z = n as f64 * (std::f64::consts::LN_2 + ln_gamma(1.0 + inv_d)) - n as f64 / d * c.ln();
    let scale: Vec<f64> = compiled
        .degrees
        .iter()
        .map(|e| (ln_z - ln_gamma(1.0 + (n as f64 + e) / d)).exp())
        .collect();
    if scale.iter().any(|s| !s.is_finite()) || !gamma(1.0 + inv_d).is_finite() {
        return Err(Error::Overflow { n, d });
    }
    let k = compiled.len();
    let n_batches = budget.div_ceil(BATCH);

    let batches: Vec<Batch> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let size = BATCH.min(budget - b * BATCH);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut out = Batch {
                sum: vec![0.0; k],
                sum_sq: vec![0.0; k],
                w: 0.0,
                w_sq: 0.0,
            };
            let mut x = vec![0.0; n];
            for _ in 0..size {
                let mut s_total = 0.0;
                for xi in x.iter_mut() {
                    let s: f64 = rng.sample(shape);
                    s_total += s;
                    let r = c_root * s.powf(inv_d);
                    *xi = if rng.random::<bool>() { r } else { -r };
                }
                let w = (s_total - ev.eval(&x)).exp();
                out.w += w;
                out.w_sq += w * w;
                if w == 0.0 {
                    continue;
                }
                for i in 0..k {
                    let y = w * compiled.value(i, &x, &scale);
                    out.sum[i] += y;
                    out.sum_sq[i] += y * y;
                }
            }
            out
        })
        .collect();

    let mut sum = vec![0.0; k];
    let mut sum_sq = vec![0.0; k];
    let (mut w, mut w_sq) = (0.0, 0.0);
    for b in batches {
        w += b.w;
        w_sq += b.w_sq;
        for i in 0..k {
            sum[i] += b.sum[i];
            sum_sq[i] += b.sum_sq[i];
        }
    }
    let ess = if w_sq > 0.0 { w * w / w_sq } else { 0.0 };
    if ess < MIN_ESS_FRACTION * budget as f64 {
        return Err(Error::Divergent { ess, budget });
    }
    let nf = budget as f64;
    let values = (0..k)
        .map(|i| {
            let mean = sum[i] / nf;
            let var = ((sum_sq[i] / nf - mean * mean) * nf / (nf - 1.0).max(1.0)).max(0.0);
            Estimate {
                value: mean,
                std_error: (var / nf).sqrt(),
            }
        })
        .collect::<Vec<_>>();
    if values.iter().any(|e| !e.value.is_finite()) {
        return Err(Error::NonFinite("Monte Carlo estimate"));
    }
    Ok(Output {
        values,
        samples: budget as u64,
    })
}
