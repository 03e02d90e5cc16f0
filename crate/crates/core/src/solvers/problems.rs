use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::descent::{self, Model};
use super::projection::{project_l1_ball, project_psd_trace, scale_to_weighted_sphere};
use super::{scale_factor, Problem, Solution, SolveConfig, SolveResult};
use crate::certificates::{certify_p1, certify_p2, certify_p3, p2_weight};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::poly::{
    enumerate_indices, monomial_count, Convention, Degree, ExponentVector, GeneralizedPolynomial,
    GramForm,
};
use crate::volume::{
    closed_form_ball_volume, finite_volume_test, moment_matrix, moment_table, volume, EngineConfig,
};

const START_ATTEMPTS: usize = 200;

/// Coefficient vector over a fixed index set.
struct Space {
    n: usize,
    degree: Degree,
    q: u32,
    convention: Convention,
    index: Vec<ExponentVector>,
}

impl Space {
    fn new(n: usize, degree: Degree, q: u32, convention: Convention) -> Result<Self> {
        let dq = degree.times(q).ok_or_else(|| {
            Error::InvalidArgument(format!("d·q must be an integer, got d = {degree}, q = {q}"))
        })?;
        Ok(Space {
            n,
            degree,
            q,
            convention,
            index: enumerate_indices(n, dq, q),
        })
    }

    fn poly(&self, x: &[f64]) -> Result<GeneralizedPolynomial> {
        GeneralizedPolynomial::new(
            self.n,
            self.degree,
            self.q,
            self.convention,
            self.index.iter().cloned().zip(x.iter().copied()),
        )
    }

    fn coords(&self, g: &GeneralizedPolynomial) -> Result<Vec<f64>> {
        if g.n() != self.n || g.degree() != self.degree || g.q() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "start lives in n = {}, d = {}, q = {}; expected n = {}, d = {}, q = {}",
                g.n(),
                g.degree(),
                g.q(),
                self.n,
                self.degree,
                self.q
            )));
        }
        let g = g.to_convention(self.convention)?;
        Ok(self.index.iter().map(|a| g.coefficient(a)).collect())
    }

    /// L_d plus uniform noise on the monomial coefficients, until feasible.
    fn perturbed_lp(&self, noise: f64, seed: u64) -> Result<Vec<f64>> {
        let base = GeneralizedPolynomial::lp_ball(self.n, self.degree, self.q)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..START_ATTEMPTS {
            let terms: Vec<(ExponentVector, f64)> = self
                .index
                .iter()
                .map(|a| (a.clone(), base.coefficient(a) + noise * rng.random_range(-1.0..=1.0)))
                .collect();
            let g = GeneralizedPolynomial::new(self.n, self.degree, self.q, Convention::Monomial, terms)?;
            if finite_volume_test(&g).finite_volume {
                return self.coords(&g);
            }
        }
        Err(Error::Precondition(format!(
            "no finite-volume start found in {START_ATTEMPTS} perturbations of magnitude {noise}"
        )))
    }
}

fn rho(n: usize, d: f64) -> Result<f64> {
    closed_form_ball_volume(n, d)
}

/// −((n+d)/d)·∫_G x^α for each α, plus the volume.
fn moment_gradient(space: &Space, g: &GeneralizedPolynomial, engine: &EngineConfig) -> Result<(f64, Vec<f64>)> {
    let table = moment_table(g, engine)?;
    let k = -(space.n as f64 + g.d()) / g.d();
    let grad = space
        .index
        .iter()
        .map(|a| table.value(a).map(|m| k * m))
        .collect::<Result<Vec<_>>>()?;
    Ok((table.volume().value, grad))
}

struct L1Model {
    space: Space,
    engine: EngineConfig,
    radius: f64,
    rho: f64,
    ones: Vec<f64>,
}

impl Model for L1Model {
    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(volume(&self.space.poly(x)?, &self.engine)?.value)
    }

    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        moment_gradient(&self.space, &self.space.poly(x)?, &self.engine)
    }

    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        let p = project_l1_ball(y, self.radius);
        let norm: f64 = p.iter().map(|v| v.abs()).sum();
        if !(norm > 0.0) {
            return Err(Error::InvalidArgument("iterate collapsed to zero".into()));
        }
        Ok(p.iter().map(|v| v * self.radius / norm).collect())
    }

    fn weights(&self) -> &[f64] {
        &self.ones
    }

    fn feasible(&self, x: &[f64]) -> bool {
        self.space
            .poly(x)
            .map(|g| finite_volume_test(&g).finite_volume)
            .unwrap_or(false)
    }

    fn objective(&self, x: &[f64], f: f64) -> f64 {
        let k = (f / self.rho).powf(self.space.degree.as_f64() / self.space.n as f64);
        k * x.iter().map(|v| v.abs()).sum::<f64>()
    }
}

fn finish_polynomial(space: &Space, x: &[f64], f: f64) -> Result<GeneralizedPolynomial> {
    let d = space.degree.as_f64();
    let k = scale_factor(f, rho(space.n, d)?, space.n, d)?;
    space.poly(x)?.rescale(k)
}

/// min ‖g‖₁ subject to vol{g ≤ 1} ≤ ρ_d over forms (q = 1) or generalized
/// polynomials on the 1/q lattice. Requires d·q even.
pub fn solve_p1(
    n: usize,
    degree: Degree,
    q: u32,
    start: Option<&GeneralizedPolynomial>,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    let dq = degree.times(q);
    if q == 0 || dq.is_none_or(|v| v % 2 != 0) {
        return Err(Error::InvalidArgument(format!(
            "the ℓ1 problem needs d·q to be an even integer (d a multiple of 2/q), got d = {degree}, q = {q}"
        )));
    }
    let space = Space::new(n, degree, q, Convention::Monomial)?;
    let d = degree.as_f64();
    let model = L1Model {
        engine: cfg.engine,
        radius: n as f64,
        rho: rho(n, d)?,
        ones: vec![1.0; space.index.len()],
        space,
    };
    let x0 = match start {
        Some(g) => model.space.coords(g)?,
        None => model.space.perturbed_lp(cfg.start_noise, cfg.seed)?,
    };
    if !model.feasible(&x0) {
        return Err(Error::Precondition("start has infinite volume".into()));
    }
    let x0 = model.project(&x0)?;
    let run = descent::run(&model, x0, cfg)?;
    let f = run.trace.last().expect("trace starts at x0").1;
    let g = finish_polynomial(&model.space, &run.x, f)?;
    let table = moment_table(&g, &cfg.engine)?;
    let certificate = certify_p1(&g, &table, cfg.certificate_tol)?;
    Ok(SolveResult {
        problem: if q == 1 { Problem::P1 } else { Problem::P1q },
        objective: g.monomial_coefficients().values().map(|c| c.abs()).sum(),
        volume: table.volume().value,
        volume_std_error: table.volume().std_error,
        solution: Solution::Polynomial(g),
        iterations: run.trace,
        certificate,
        converged: run.converged,
    })
}

struct L2Model {
    space: Space,
    engine: EngineConfig,
    radius_sq: f64,
    rho: f64,
    weights: Vec<f64>,
}

impl Model for L2Model {
    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(volume(&self.space.poly(x)?, &self.engine)?.value)
    }

    /// In the weighted metric the gradient w.r.t. p_α is −((n+d)/d)·∫x^α for
    /// both conventions.
    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        moment_gradient(&self.space, &self.space.poly(x)?, &self.engine)
    }

    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        scale_to_weighted_sphere(y, &self.weights, self.radius_sq)
    }

    fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn feasible(&self, x: &[f64]) -> bool {
        self.space
            .poly(x)
            .map(|g| finite_volume_test(&g).finite_volume)
            .unwrap_or(false)
    }

    fn objective(&self, x: &[f64], f: f64) -> f64 {
        let k = (f / self.rho).powf(self.space.degree.as_f64() / self.space.n as f64);
        k * k * x.iter().zip(&self.weights).map(|(v, w)| w * v * v).sum::<f64>()
    }
}

/// min Σ w_α g_α² subject to vol{g ≤ 1} ≤ ρ_d. Forms (q = 1, d even) use the
/// multinomial weights and report multinomial coefficients; generalized
/// polynomials use unit weights on monomial coefficients.
pub fn solve_p2(
    n: usize,
    degree: Degree,
    q: u32,
    start: Option<&GeneralizedPolynomial>,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    if q == 0 {
        return Err(Error::InvalidArgument("lattice denominator must be positive".into()));
    }
    if q == 1 && !degree.is_even_integer() {
        return Err(Error::InvalidArgument(format!(
            "the weighted ℓ2 problem over forms needs an even degree, got d = {degree}"
        )));
    }
    let convention = if q == 1 { Convention::Multinomial } else { Convention::Monomial };
    let space = Space::new(n, degree, q, convention)?;
    let probe = GeneralizedPolynomial::lp_ball(n, degree, q)?;
    let weights = space
        .index
        .iter()
        .map(|a| p2_weight(&probe, a))
        .collect::<Result<Vec<_>>>()?;
    let d = degree.as_f64();
    let model = L2Model {
        engine: cfg.engine,
        radius_sq: n as f64,
        rho: rho(n, d)?,
        weights,
        space,
    };
    let x0 = match start {
        Some(g) => model.space.coords(g)?,
        None => model.space.perturbed_lp(cfg.start_noise, cfg.seed)?,
    };
    if !model.feasible(&x0) {
        return Err(Error::Precondition("start has infinite volume".into()));
    }
    let x0 = model.project(&x0)?;
    let run = descent::run(&model, x0, cfg)?;
    let f = run.trace.last().expect("trace starts at x0").1;
    let g = finish_polynomial(&model.space, &run.x, f)?;
    let table = moment_table(&g, &cfg.engine)?;
    let certificate = certify_p2(&g, &table, cfg.certificate_tol)?;
    let objective = model
        .space
        .index
        .iter()
        .zip(&model.weights)
        .map(|(a, w)| w * g.coefficient(a).powi(2))
        .sum();
    Ok(SolveResult {
        problem: Problem::P2,
        objective,
        volume: table.volume().value,
        volume_std_error: table.volume().std_error,
        solution: Solution::Polynomial(g),
        iterations: run.trace,
        certificate,
        converged: run.converged,
    })
}

struct GramModel {
    n: usize,
    d: u32,
    s: usize,
    engine: EngineConfig,
    radius: f64,
    rho: f64,
    ones: Vec<f64>,
}

impl GramModel {
    fn matrix(&self, x: &[f64]) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.s);
        for i in 0..self.s {
            for j in i..self.s {
                m.set_sym(i, j, 0.5 * (x[i * self.s + j] + x[j * self.s + i]));
            }
        }
        m
    }

    fn form(&self, x: &[f64]) -> Result<GramForm> {
        GramForm::new(self.n, self.d, self.matrix(x))
    }
}

impl Model for GramModel {
    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(volume(&self.form(x)?.expand(), &self.engine)?.value)
    }

    /// ∂f/∂Q(α,β) = −((n+d)/d)·∫ x^(α+β).
    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let g = self.form(x)?.expand();
        let m = moment_matrix(&g, self.d / 2, 1, &self.engine)?;
        let k = -(self.n as f64 + self.d as f64) / self.d as f64;
        let grad = m.matrix.as_slice().iter().map(|v| k * v).collect();
        Ok((m.volume.value, grad))
    }

    fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        let p = project_psd_trace(&self.matrix(y), self.radius)?;
        let tr = p.trace();
        if !(tr > 0.0) {
            return Err(Error::InvalidArgument("iterate collapsed to zero".into()));
        }
        Ok(p.scaled(self.radius / tr).as_slice().to_vec())
    }

    fn weights(&self) -> &[f64] {
        &self.ones
    }

    fn feasible(&self, x: &[f64]) -> bool {
        self.form(x)
            .map(|f| finite_volume_test(&f.expand()).finite_volume)
            .unwrap_or(false)
    }

    fn objective(&self, x: &[f64], f: f64) -> f64 {
        let k = (f / self.rho).powf(self.d as f64 / self.n as f64);
        k * self.matrix(x).trace()
    }
}

/// min trace Q subject to Q ⪰ 0 and vol{v(x)ᵀQv(x) ≤ 1} ≤ ρ_d, d even.
pub fn solve_p3(n: usize, d: u32, start: Option<&GramForm>, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    if d < 2 || !d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "the Gram-trace problem needs an even degree ≥ 2, got d = {d}"
        )));
    }
    let s = monomial_count(n, d / 2);
    let model = GramModel {
        n,
        d,
        s,
        engine: cfg.engine,
        radius: n as f64,
        rho: rho(n, d as f64)?,
        ones: vec![1.0; s * s],
    };
    let x0 = match start {
        Some(f) => {
            if f.n() != n || f.d() != d {
                return Err(Error::DimensionMismatch(format!(
                    "start has n = {}, d = {}; expected n = {n}, d = {d}",
                    f.n(),
                    f.d()
                )));
            }
            f.matrix().as_slice().to_vec()
        }
        None => SymMatrix::identity(s).scaled(n as f64 / s as f64).as_slice().to_vec(),
    };
    if !model.feasible(&x0) {
        return Err(Error::Precondition("start has infinite volume".into()));
    }
    let x0 = model.project(&x0)?;
    let run = descent::run(&model, x0, cfg)?;
    let f = run.trace.last().expect("trace starts at x0").1;
    let k = scale_factor(f, model.rho, n, d as f64)?;
    let form = model.form(&run.x)?.scaled(k);
    let m = moment_matrix(&form.expand(), d / 2, 1, &cfg.engine)?;
    let certificate = certify_p3(&form, &m, cfg.certificate_tol)?;
    Ok(SolveResult {
        problem: Problem::P3,
        objective: form.trace(),
        volume: m.volume.value,
        volume_std_error: m.volume.std_error,
        solution: Solution::Gram(form),
        iterations: run.trace,
        certificate,
        converged: run.converged,
    })
}
