//! Volume functional, moments, gradients and moment matrices of sublevel sets.

mod closed_form;
mod engine;
mod feasibility;
mod grid;
mod kernel;
mod monte_carlo;
mod quadrature;
mod spherical;
mod table;

use serde::{Deserialize, Serialize};

pub use closed_form::{closed_form_ball_moment, closed_form_ball_volume, closed_form_lp_moment};
pub use engine::{
    euler_residual, grad_volume, gradient_from_table, integrate, moment, moment_matrix, moment_table,
    moments, volume, Integration,
};
pub use feasibility::{finite_volume_test, FeasibilityVerdict, FEASIBILITY_TOL};
pub use kernel::{Integrand, Kernel};
pub use table::{hankel_diag_bound_check, MomentEntry, MomentMatrix, MomentTable};

/// Integration backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Exact formulas; only for multiples of Σ|x_i|^d.
    ClosedForm,
    /// Radial integration over the unit sphere (n ≤ 3).
    Spherical,
    /// Importance sampling from a generalized Gaussian (any n).
    MonteCarlo,
    /// Randomly shifted lattice over a bounding box (n ≤ 3).
    GridOracle,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::ClosedForm => "closed_form",
            Backend::Spherical => "spherical",
            Backend::MonteCarlo => "monte_carlo",
            Backend::GridOracle => "grid_oracle",
        }
    }

    pub fn is_deterministic(self) -> bool {
        matches!(self, Backend::ClosedForm | Backend::Spherical)
    }

    /// Spherical for n ≤ 3, Monte Carlo above.
    pub fn default_for(n: usize) -> Self {
        if n <= 3 {
            Backend::Spherical
        } else {
            Backend::MonteCarlo
        }
    }

    /// Budget used when none is given: nodes per angle, samples, or cells per axis.
    pub fn default_budget(self, n: usize) -> usize {
        match self {
            Backend::ClosedForm => 1,
            Backend::Spherical => match n {
                0..=2 => 2048,
                _ => 96,
            },
            Backend::MonteCarlo => 1 << 18,
            Backend::GridOracle => match n {
                1 => 1 << 16,
                2 => 1024,
                _ => 128,
            },
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Backend selection plus the knobs that make estimates reproducible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub backend: Backend,
    /// `None` picks [`Backend::default_budget`].
    pub budget: Option<usize>,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

impl EngineConfig {
    pub fn new(backend: Backend) -> Self {
        EngineConfig {
            backend,
            budget: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn spherical() -> Self {
        Self::new(Backend::Spherical)
    }

    pub fn closed_form() -> Self {
        Self::new(Backend::ClosedForm)
    }

    pub fn monte_carlo(budget: usize, seed: u64) -> Self {
        EngineConfig {
            backend: Backend::MonteCarlo,
            budget: Some(budget),
            seed,
        }
    }

    pub fn grid(cells_per_axis: usize, seed: u64) -> Self {
        EngineConfig {
            backend: Backend::GridOracle,
            budget: Some(cells_per_axis),
            seed,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn budget_for(&self, n: usize) -> usize {
        self.budget.unwrap_or_else(|| self.backend.default_budget(n)).max(1)
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self::spherical()
    }
}

/// A scalar estimate with its standard error (0 for deterministic backends).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            std_error: 0.0,
        }
    }

    /// |a − b| ≤ k·sqrt(se_a² + se_b²) + abs_tol.
    pub fn agrees_with(&self, other: &Estimate, k: f64, abs_tol: f64) -> bool {
        let se = self.std_error.hypot(other.std_error);
        (self.value - other.value).abs() <= k * se + abs_tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub backend: Backend,
    pub samples_or_nodes: u64,
}

impl VolumeEstimate {
    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.value,
            std_error: self.std_error,
        }
    }
}
