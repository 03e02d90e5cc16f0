//! One-dimensional rules used by the spherical backend.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1].
pub(crate) fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    let mf = m as f64;
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = mf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Tanh-sinh rule on [0, 1] as (x, 1 − x, weight), with both distances to
/// the endpoints computed without cancellation.
pub(crate) fn tanh_sinh(m: usize) -> Vec<(f64, f64, f64)> {
    const T: f64 = 4.0;
    let m = m.max(3);
    let h = 2.0 * T / (m - 1) as f64;
    (0..m)
        .map(|j| {
            let t = -T + j as f64 * h;
            let s = 0.5 * PI * t.sinh();
            let lo = 1.0 / (1.0 + (-2.0 * s).exp());
            let hi = 1.0 / (1.0 + (2.0 * s).exp());
            let c = s.cosh();
            let w = h * 0.25 * PI * t.cosh() / (c * c);
            (lo, hi, if w.is_finite() { w } else { 0.0 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8);
        let s: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        let x14: f64 = rule.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((x14 - 2.0 / 15.0).abs() < 1e-14);
        let one = gauss_legendre(1);
        assert!((one[0].0).abs() < 1e-15 && (one[0].1 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularities() {
        let rule = tanh_sinh(200);
        let s: f64 = rule.iter().map(|(x, _, w)| w * x.powf(-0.5)).sum();
        assert!((s - 2.0).abs() < 1e-10, "{s}");
        let s: f64 = rule.iter().map(|(_, y, w)| w * y.ln()).sum();
        assert!((s + 1.0).abs() < 1e-10, "{s}");
    }
}
