//! Projected gradient with backtracking on a norm sphere.

use super::SolveConfig;
use crate::error::{Error, Result};

/// One problem in coordinates: volume, gradient in the model's metric, and
/// the projection onto the norm sphere.
pub(crate) trait Model {
    fn value(&self, x: &[f64]) -> Result<f64>;
    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)>;
    fn project(&self, y: &[f64]) -> Result<Vec<f64>>;
    fn weights(&self) -> &[f64];
    fn feasible(&self, x: &[f64]) -> bool;
    /// Norm of the rescaled iterate with volume ρ_d.
    fn objective(&self, x: &[f64], f: f64) -> f64;
}

pub(crate) struct Descent {
    pub x: Vec<f64>,
    pub trace: Vec<(f64, f64)>,
    pub converged: bool,
}

/// Step failures that mean "too far", not "broken".
fn is_rejection(e: &Error) -> bool {
    matches!(e, Error::InfiniteVolume { .. } | Error::Divergent { .. } | Error::NonFinite(_))
}

pub(crate) fn run(model: &impl Model, start: Vec<f64>, cfg: &SolveConfig) -> Result<Descent> {
    let rule = &cfg.step_rule;
    let w = model.weights().to_vec();
    let mut x = start;
    let (mut f, mut grad) = model.value_and_gradient(&x)?;
    let mut trace = vec![(model.objective(&x, f), f)];
    let mut t = rule.initial_step;
    let mut slow = 0;
    let mut converged = false;

    for _ in 0..cfg.max_iters {
        let mut accepted = None;
        while t >= rule.min_step {
            let y: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a - t * g).collect();
            let cand = model.project(&y)?;
            if !model.feasible(&cand) {
                t *= rule.shrink;
                continue;
            }
            let fc = match model.value(&cand) {
                Ok(v) => v,
                Err(e) if is_rejection(&e) => {
                    t *= rule.shrink;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let slope: f64 = (0..x.len()).map(|i| w[i] * grad[i] * (cand[i] - x[i])).sum();
            if fc <= f + rule.sufficient_decrease * slope.min(0.0) && fc <= f {
                accepted = Some((cand, fc));
                break;
            }
            t *= rule.shrink;
        }
        let Some((cand, fc)) = accepted else {
            // no descent at any admissible step
            converged = true;
            break;
        };
        let dx = x.iter().zip(&cand).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let scale = x.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        let rel = (f - fc) / f;
        grad = model.value_and_gradient(&cand)?.1;
        x = cand;
        f = fc;
        trace.push((model.objective(&x, f), f));
        t = (t * rule.grow).min(rule.max_step);
        if dx <= cfg.tol_step * scale {
            converged = true;
            break;
        }
        slow = if rel < cfg.tol_objective { slow + 1 } else { 0 };
        if slow >= 3 {
            converged = true;
            break;
        }
    }
    Ok(Descent { x, trace, converged })
}
