//! Radial integration: ∫_G K = (1/(n+e)) ∫_{S^{n−1}} K(θ) h(θ)^(−(n+e)/d) dσ
//! for K positively homogeneous of degree e and h = g restricted to the sphere.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;

use super::kernel::Compiled;
use super::quadrature::{gauss_legendre, tanh_sinh};
use crate::error::{Error, Result};
use crate::poly::GeneralizedPolynomial;

const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy)]
struct Node {
    u: [f64; 3],
    w: f64,
}

/// Nodes over the sphere. Generalized polynomials are symmetric under every
/// sign flip, so their rules cover one orthant and carry the 2ⁿ factor.
fn nodes(n: usize, signed: bool, m: usize) -> Result<Vec<Node>> {
    let m = m.max(4);
    let mut out = Vec::new();
    match (n, signed) {
        (1, _) => {
            out.push(Node { u: [1.0, 0.0, 0.0], w: 1.0 });
            out.push(Node { u: [-1.0, 0.0, 0.0], w: 1.0 });
        }
        (2, true) => {
            let w = TAU / m as f64;
            for k in 0..m {
                let t = k as f64 * w;
                out.push(Node { u: [t.cos(), t.sin(), 0.0], w });
            }
        }
        (2, false) => {
            for (lo, hi, w) in tanh_sinh(m) {
                let (a, b) = (FRAC_PI_2 * lo, FRAC_PI_2 * hi);
                out.push(Node { u: [b.sin(), a.sin(), 0.0], w: 4.0 * FRAC_PI_2 * w });
            }
        }
        (3, true) => {
            let mt = 2 * m;
            let wt = TAU / mt as f64;
            let polar = gauss_legendre(m);
            for k in 0..mt {
                let t = k as f64 * wt;
                let (st, ct) = t.sin_cos();
                for &(x, wx) in &polar {
                    let phi = 0.5 * PI * (1.0 + x);
                    let (sp, cp) = phi.sin_cos();
                    out.push(Node { u: [sp * ct, sp * st, cp], w: wt * 0.5 * PI * wx * sp });
                }
            }
        }
        (3, false) => {
            let rule = tanh_sinh(m);
            for &(tlo, thi, tw) in &rule {
                let (ct, st) = ((FRAC_PI_2 * thi).sin(), (FRAC_PI_2 * tlo).sin());
                for &(plo, phi, pw) in &rule {
                    let (cp, sp) = ((FRAC_PI_2 * phi).sin(), (FRAC_PI_2 * plo).sin());
                    let w = 8.0 * FRAC_PI_2 * tw * FRAC_PI_2 * pw * sp;
                    out.push(Node { u: [sp * ct, sp * st, cp], w });
                }
            }
        }
        _ => {
            return Err(Error::UnsupportedBackend {
                backend: "spherical",
                reason: format!("needs n ≤ 3, got n = {n}"),
            })
        }
    }
    Ok(out)
}

pub(crate) struct Output {
    pub values: Vec<f64>,
    pub nodes: u64,
}

/// Refines by doubling the angular resolution until two successive rules agree
/// to `REL_TOL`. Both rule families converge spectrally, so the difference of
/// successive rules is a sharp error estimate.
pub(crate) fn integrate(g: &GeneralizedPolynomial, compiled: &Compiled, m: usize) -> Result<Output> {
    const REL_TOL: f64 = 1e-11;
    let max_doublings = if g.n() <= 2 { 8 } else { 2 };
    let mut m = m.max(4);
    let mut prev = fixed(g, compiled, m)?;
    let mut total_nodes = prev.nodes;
    if g.n() == 1 {
        return Ok(prev);
    }
    for _ in 0..max_doublings {
        m *= 2;
        let next = fixed(g, compiled, m)?;
        total_nodes += next.nodes;
        let scale = next.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let converged = prev
            .values
            .iter()
            .zip(&next.values)
            .all(|(a, b)| (a - b).abs() <= REL_TOL * scale);
        prev = next;
        if converged {
            break;
        }
    }
    prev.nodes = total_nodes;
    Ok(prev)
}

fn fixed(g: &GeneralizedPolynomial, compiled: &Compiled, m: usize) -> Result<Output> {
    let n = g.n();
    let d = g.d();
    let nodes = nodes(n, g.is_signed(), m)?;
    let ev = g.evaluator();
    let k = compiled.len();
    let exps: Vec<f64> = compiled.degrees.iter().map(|e| -(n as f64 + e) / d).collect();
    let norms: Vec<f64> = compiled.degrees.iter().map(|e| 1.0 / (n as f64 + e)).collect();

    let blocks: Vec<(Vec<f64>, f64)> = nodes
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut acc = vec![0.0; k];
            let mut hmin = f64::INFINITY;
            let mut scale = vec![0.0; exps.len()];
            for node in chunk {
                let u = &node.u[..n];
                let h = ev.eval(u);
                hmin = hmin.min(h);
                if !(h > 0.0) {
                    continue;
                }
                for ((s, e), c) in scale.iter_mut().zip(&exps).zip(&norms) {
                    *s = c * h.powf(*e);
                }
                for (i, a) in acc.iter_mut().enumerate() {
                    *a += node.w * compiled.value(i, u, &scale);
                }
            }
            (acc, hmin)
        })
        .collect();

    let mut values = vec![0.0; k];
    let mut hmin = f64::INFINITY;
    for (acc, m) in blocks {
        hmin = hmin.min(m);
        for (v, a) in values.iter_mut().zip(acc) {
            *v += a;
        }
    }
    if !(hmin > 0.0) {
        return Err(Error::InfiniteVolume { sphere_minimum: hmin });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("spherical quadrature"));
    }
    Ok(Output {
        values,
        nodes: nodes.len() as u64,
    })
}
