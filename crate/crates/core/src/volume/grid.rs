//! Indicator integration over a box containing G, on randomly shifted
//! midpoint lattices. Each replicate is unbiased; their spread gives the error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::feasibility::{sphere_minimum, FEASIBILITY_TOL};
use super::kernel::Compiled;
use super::Estimate;
use crate::error::{Error, Result};
use crate::poly::GeneralizedPolynomial;

pub(crate) const REPLICATES: usize = 16;

pub(crate) struct Output {
    pub values: Vec<Estimate>,
    pub points: u64,
}

pub(crate) fn integrate(
    g: &GeneralizedPolynomial,
    compiled: &Compiled,
    cells: usize,
    seed: u64,
) -> Result<Output> {
    let n = g.n();
    if n > 3 {
        return Err(Error::UnsupportedBackend {
            backend: "grid_oracle",
            reason: format!("needs n ≤ 3, got n = {n}"),
        });
    }
    let ev = g.evaluator();
    let smin = sphere_minimum(n, |x| ev.eval(x)).value;
    if !(smin > FEASIBILITY_TOL) {
        return Err(Error::InfiniteVolume { sphere_minimum: smin });
    }
    // g(x) ≥ smin·|x|^d, so G lies in the ball of radius smin^(−1/d)
    let half = 1.01 * smin.powf(-1.0 / g.d());
    let m = cells.max(2);
    let h = 2.0 * half / m as f64;
    let cell_volume = h.powi(n as i32);
    let k = compiled.len();
    let scale = vec![cell_volume; compiled.degrees.len()];

    let mut replicates: Vec<Vec<f64>> = Vec::with_capacity(REPLICATES);
    for r in 0..REPLICATES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let shift: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let coord = |axis: usize, i: usize| -half + (i as f64 + shift[axis]) * h;
        let inner = m.pow(n as u32 - 1);
        let slices: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i0| {
                let mut acc = vec![0.0; k];
                let mut x = [0.0f64; 3];
                x[0] = coord(0, i0);
                for j in 0..inner {
                    let mut rest = j;
                    for axis in 1..n {
                        x[axis] = coord(axis, rest % m);
                        rest /= m;
                    }
                    let p = &x[..n];
                    if ev.eval(p) <= 1.0 {
                        for (i, a) in acc.iter_mut().enumerate() {
                            *a += compiled.value(i, p, &scale);
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![0.0; k];
        for s in slices {
            for (t, v) in total.iter_mut().zip(s) {
                *t += v;
            }
        }
        replicates.push(total);
    }

    let rf = REPLICATES as f64;
    let values = (0..k)
        .map(|i| {
            let mean = replicates.iter().map(|r| r[i]).sum::<f64>() / rf;
            let var = replicates.iter().map(|r| (r[i] - mean).powi(2)).sum::<f64>() / (rf - 1.0);
            Estimate {
                value: mean,
                std_error: (var / rf).sqrt(),
            }
        })
        .collect();
    Ok(Output {
        values,
        points: (REPLICATES * m.pow(n as u32)) as u64,
    })
}
