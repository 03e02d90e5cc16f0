//! Heuristic membership test for the cone of finite-volume polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::poly::GeneralizedPolynomial;

/// Sphere minima at or below this are treated as infinite volume.
pub const FEASIBILITY_TOL: f64 = 1e-10;

const SEED: u64 = 0x0f1e_2d3c;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    /// A belief, not a proof: no point with g ≤ tolerance was found on the sphere.
    pub finite_volume: bool,
    pub sphere_minimum: f64,
    pub restarts: usize,
}

/// Multi-start minimization of g over the unit sphere.
pub fn finite_volume_test(g: &GeneralizedPolynomial) -> FeasibilityVerdict {
    let ev = g.evaluator();
    let m = sphere_minimum(g.n(), |x| ev.eval(x));
    FeasibilityVerdict {
        finite_volume: m.value > FEASIBILITY_TOL,
        sphere_minimum: m.value,
        restarts: m.restarts,
    }
}

pub(crate) struct SphereMin {
    pub value: f64,
    pub restarts: usize,
}

/// Minimum of a function on the Euclidean unit sphere in ℝⁿ.
pub(crate) fn sphere_minimum(n: usize, f: impl Fn(&[f64]) -> f64) -> SphereMin {
    match n {
        0 => SphereMin { value: f64::NAN, restarts: 0 },
        1 => SphereMin {
            value: f(&[1.0]).min(f(&[-1.0])),
            restarts: 0,
        },
        2 => circle_minimum(|t| f(&[t.cos(), t.sin()])),
        _ => multistart(n, &f),
    }
}

fn circle_minimum(h: impl Fn(f64) -> f64) -> SphereMin {
    const M: usize = 2880;
    const STARTS: usize = 6;
    let step = std::f64::consts::TAU / M as f64;
    let vals: Vec<f64> = (0..M).map(|k| h(k as f64 * step)).collect();
    let mut best = f64::INFINITY;
    for v in &vals {
        best = best.min(*v);
    }
    // refine the lowest discrete local minima
    let mut local: Vec<usize> = (0..M)
        .filter(|&k| vals[k] <= vals[(k + M - 1) % M] && vals[k] <= vals[(k + 1) % M])
        .collect();
    local.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    local.truncate(STARTS);
    for &k in &local {
        let c = k as f64 * step;
        best = best.min(golden(&h, c - step, c + step));
    }
    SphereMin {
        value: best,
        restarts: local.len(),
    }
}

fn golden(h: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (h(c), h(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = h(d);
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    fc.min(fd)
}

fn normalize(x: &mut [f64]) {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= r;
    }
}

fn multistart(n: usize, f: &impl Fn(&[f64]) -> f64) -> SphereMin {
    let samples = 3000 * n;
    const STARTS: usize = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cands: Vec<(f64, Vec<f64>)> = Vec::with_capacity(samples + 2 * n + (1 << n.min(6)));
    for i in 0..n {
        for s in [-1.0, 1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            cands.push((f(&e), e));
        }
    }
    for mask in 0..(1usize << n.min(6)) {
        let mut x: Vec<f64> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        normalize(&mut x);
        cands.push((f(&x), x));
    }
    for _ in 0..samples {
        let mut x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        normalize(&mut x);
        cands.push((f(&x), x));
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = cands[0].0;
    let starts = STARTS.min(cands.len());
    for (v, x) in cands.into_iter().take(starts) {
        best = best.min(descend(f, x, v));
    }
    SphereMin {
        value: best,
        restarts: starts,
    }
}

/// Projected gradient with central-difference gradients and backtracking.
fn descend(f: &impl Fn(&[f64]) -> f64, mut x: Vec<f64>, mut fx: f64) -> f64 {
    let n = x.len();
    let mut step = 0.1;
    let mut grad = vec![0.0; n];
    let mut y = vec![0.0; n];
    for _ in 0..300 {
        let eps = 1e-7;
        for i in 0..n {
            let xi = x[i];
            x[i] = xi + eps;
            let up = f(&x);
            x[i] = xi - eps;
            let dn = f(&x);
            x[i] = xi;
            grad[i] = (up - dn) / (2.0 * eps);
        }
        // tangential component
        let radial: f64 = grad.iter().zip(&x).map(|(g, xi)| g * xi).sum();
        for i in 0..n {
            grad[i] -= radial * x[i];
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-12 || !gnorm.is_finite() {
            break;
        }
        let mut accepted = false;
        while step > 1e-14 {
            for i in 0..n {
                y[i] = x[i] - step * grad[i] / gnorm;
            }
            normalize(&mut y);
            let fy = f(&y);
            if fy < fx {
                x.copy_from_slice(&y);
                fx = fy;
                step *= 1.5;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    fx
}
