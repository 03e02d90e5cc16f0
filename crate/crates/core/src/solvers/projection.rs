//! Euclidean projections onto the norm balls used by the solvers.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Projection of a nonnegative vector onto {z ≥ 0, Σ z = radius}.
fn simplex(v: &[f64], radius: f64) -> Vec<f64> {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - radius) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Projection onto {‖z‖₁ ≤ radius}.
pub fn project_l1_ball(y: &[f64], radius: f64) -> Vec<f64> {
    let norm: f64 = y.iter().map(|v| v.abs()).sum();
    if norm <= radius {
        return y.to_vec();
    }
    let mags: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    simplex(&mags, radius)
        .into_iter()
        .zip(y)
        .map(|(m, &s)| m.copysign(s))
        .collect()
}

/// Projection onto {z ≥ 0, Σ z ≤ radius}.
pub fn project_capped_simplex(v: &[f64], radius: f64) -> Vec<f64> {
    let clipped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= radius {
        clipped
    } else {
        simplex(&clipped, radius)
    }
}

/// Frobenius projection onto {Q ⪰ 0, trace Q ≤ radius}.
pub fn project_psd_trace(y: &SymMatrix, radius: f64) -> Result<SymMatrix> {
    if !y.is_finite() {
        return Err(Error::NonFinite("matrix to project"));
    }
    let eig = y.eigen()?;
    Ok(eig.reconstruct(&project_capped_simplex(&eig.values, radius)))
}

/// Scales z so that Σ w z² = r².
pub fn scale_to_weighted_sphere(z: &[f64], weights: &[f64], r_sq: f64) -> Result<Vec<f64>> {
    let norm: f64 = z.iter().zip(weights).map(|(v, w)| w * v * v).sum();
    if !(norm > 0.0) {
        return Err(Error::InvalidArgument("cannot scale the zero vector".into()));
    }
    let k = (r_sq / norm).sqrt();
    Ok(z.iter().map(|v| v * k).collect())
}
