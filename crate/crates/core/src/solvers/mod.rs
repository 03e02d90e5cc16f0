//! First-order solvers for the ℓ1, weighted ℓ2 and Gram-trace problems.
//!
//! Each problem is solved as "minimize vol(G) over a norm sphere" and the
//! result is rescaled so that vol(G) = ρ_d, which by homogeneity gives the
//! minimal norm at that volume.

mod descent;
mod problems;
pub mod projection;

use serde::{Deserialize, Serialize};
use serde_json::json;

pub use problems::{solve_p1, solve_p2, solve_p3};

use crate::certificates::{Certificate, DEFAULT_STOCHASTIC_TOL};
use crate::error::{Error, Result};
use crate::poly::{GeneralizedPolynomial, GramDoc, GramForm, PolynomialDoc};
use crate::volume::{volume, EngineConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRule {
    pub initial_step: f64,
    pub shrink: f64,
    pub grow: f64,
    pub max_step: f64,
    /// Line search gives up below this step.
    pub min_step: f64,
    /// Armijo constant along the projection arc.
    pub sufficient_decrease: f64,
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule {
            initial_step: 0.5,
            shrink: 0.5,
            grow: 1.5,
            max_step: 64.0,
            min_step: 1e-12,
            sufficient_decrease: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub max_iters: usize,
    pub step_rule: StepRule,
    /// Stop after three accepted steps with relative volume decrease below this.
    pub tol_objective: f64,
    /// Stop when an accepted step moves no coordinate more than this (relative).
    pub tol_step: f64,
    /// Backend, budget and seed of every volume and gradient estimate. With
    /// sampling backends the seed is fixed for the whole run, so the solver
    /// minimizes one sample-average objective.
    pub engine: EngineConfig,
    /// Seed of the perturbation applied to the default start.
    pub seed: u64,
    pub start_noise: f64,
    pub certificate_tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_iters: 500,
            step_rule: StepRule::default(),
            tol_objective: 1e-10,
            tol_step: 1e-10,
            engine: EngineConfig::spherical(),
            seed: 1,
            start_noise: 0.2,
            certificate_tol: DEFAULT_STOCHASTIC_TOL,
        }
    }
}

impl SolveConfig {
    pub fn with_engine(mut self, engine: EngineConfig) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.step_rule;
        let positive = [
            self.tol_objective,
            self.tol_step,
            self.certificate_tol,
            r.initial_step,
            r.min_step,
            r.max_step,
            r.sufficient_decrease,
        ];
        if self.max_iters == 0 || positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidArgument(
                "max_iters, tolerances and step parameters must be positive".into(),
            ));
        }
        if !(r.shrink > 0.0 && r.shrink < 1.0) || !(r.grow >= 1.0) || !(self.start_noise >= 0.0) {
            return Err(Error::InvalidArgument(
                "need 0 < shrink < 1, grow ≥ 1 and nonnegative start noise".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    P1,
    P1q,
    P2,
    P3,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::P1 => "p1",
            Problem::P1q => "p1q",
            Problem::P2 => "p2",
            Problem::P3 => "p3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Polynomial(GeneralizedPolynomial),
    Gram(GramForm),
}

impl Solution {
    pub fn polynomial(&self) -> GeneralizedPolynomial {
        match self {
            Solution::Polynomial(g) => g.clone(),
            Solution::Gram(f) => f.expand(),
        }
    }

    pub fn gram(&self) -> Option<&GramForm> {
        match self {
            Solution::Gram(f) => Some(f),
            Solution::Polynomial(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub problem: Problem,
    /// ℓ1 norm, weighted ℓ2² or trace of the rescaled solution.
    pub objective: f64,
    pub volume: f64,
    pub volume_std_error: f64,
    pub solution: Solution,
    /// (objective after rescaling, volume before rescaling) per accepted iterate.
    pub iterations: Vec<(f64, f64)>,
    pub certificate: Certificate,
    pub converged: bool,
}

impl SolveResult {
    pub fn to_json_value(&self) -> serde_json::Value {
        let solution = match &self.solution {
            Solution::Polynomial(g) => serde_json::to_value(PolynomialDoc::from(g)),
            Solution::Gram(f) => serde_json::to_value(GramDoc::from(f)),
        }
        .expect("documents serialize");
        json!({
            "problem": self.problem.name(),
            "objective": self.objective,
            "volume": self.volume,
            "solution": solution,
            "iterations": self.iterations.iter().map(|(o, v)| [*o, *v]).collect::<Vec<_>>(),
            "certificate": serde_json::to_value(&self.certificate).expect("certificates serialize"),
            "converged": self.converged,
        })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }
}

/// k·g with k = (f(g)/target)^(d/n), so that vol{k·g ≤ 1} = target.
pub fn scale_to_target_volume(
    g: &GeneralizedPolynomial,
    target: f64,
    cfg: &EngineConfig,
) -> Result<GeneralizedPolynomial> {
    let k = scale_factor(volume(g, cfg)?.value, target, g.n(), g.d())?;
    g.rescale(k)
}

/// Gram version of [`scale_to_target_volume`].
pub fn scale_gram_to_target_volume(form: &GramForm, target: f64, cfg: &EngineConfig) -> Result<GramForm> {
    let k = scale_factor(volume(&form.expand(), cfg)?.value, target, form.n(), form.d() as f64)?;
    Ok(form.scaled(k))
}

pub(crate) fn scale_factor(vol: f64, target: f64, n: usize, d: f64) -> Result<f64> {
    if !(vol > 0.0) || !vol.is_finite() {
        return Err(Error::NonFinite("volume estimate"));
    }
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::InvalidArgument(format!("target volume must be positive, got {target}")));
    }
    let k = (vol / target).powf(d / n as f64);
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::NonFinite("rescale factor"));
    }
    Ok(k)
}
