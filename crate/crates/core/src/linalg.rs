//! Dense symmetric matrices and the cyclic Jacobi eigensolver shared by the
//! PSD projection and the Gram-form certificate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    size: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(size: usize) -> Self {
        SymMatrix {
            size,
            data: vec![0.0; size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged input and asymmetry beyond
    /// `rel_tol` (relative to the largest entry).
    pub fn from_rows(rows: &[Vec<f64>], rel_tol: f64) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::parse(
                    format!("Q[{i}]"),
                    format!("row has {} entries, expected {size}", row.len()),
                ));
            }
            data.extend_from_slice(row);
        }
        let m = SymMatrix { size, data };
        if let Some((i, j)) = m.asymmetry(rel_tol) {
            return Err(Error::parse(
                format!("Q[{i}][{j}]"),
                format!(
                    "matrix is not symmetric: Q[{i}][{j}] = {} but Q[{j}][{i}] = {}",
                    m.get(i, j),
                    m.get(j, i)
                ),
            ));
        }
        Ok(m)
    }

    /// Builds a matrix from a row-major buffer without a symmetry check.
    pub(crate) fn from_raw(size: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), size * size);
        SymMatrix { size, data }
    }

    fn asymmetry(&self, rel_tol: f64) -> Option<(usize, usize)> {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                if (self.get(i, j) - self.get(j, i)).abs() > rel_tol * scale {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.size + j] = v;
    }

    /// Sets both (i, j) and (j, i).
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, v);
        self.set(j, i, v);
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.size.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius inner product ⟨A, B⟩ = trace(AᵀB).
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: f64) -> SymMatrix {
        SymMatrix {
            size: self.size,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    /// self + k·other
    pub fn add_scaled(&self, k: f64, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.size, other.size);
        SymMatrix {
            size: self.size,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Symmetric eigendecomposition by cyclic Jacobi sweeps.
    pub fn eigen(&self) -> Result<Eigen> {
        jacobi_eigen(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self
            .eigen()?
            .values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }
}

/// Eigenpairs of a symmetric matrix; `vectors` holds the eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: SymMatrix,
}

impl Eigen {
    /// V·diag(values)·Vᵀ for replacement eigenvalues.
    pub fn reconstruct(&self, values: &[f64]) -> SymMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let s: f64 = (0..n).map(|k| v.get(i, k) * values[k] * v.get(j, k)).sum();
                out.set_sym(i, j, s);
            }
        }
        out
    }
}

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn jacobi_eigen(m: &SymMatrix) -> Result<Eigen> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix passed to the eigensolver"));
    }
    let n = m.size;
    let mut a = m.data.clone();
    let mut v = SymMatrix::identity(n).data;
    let scale = m.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Stable rotation (Golub & Van Loan, sym.schur2)
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !a.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("Jacobi iteration"));
    }
    Ok(Eigen {
        values: (0..n).map(|i| a[i * n + i]).collect(),
        vectors: SymMatrix::from_raw(n, v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_known_spectrum() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]], 1e-12).unwrap();
        let mut vals = m.eigen().unwrap().values;
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn corner_block_has_negative_eigenvalue() {
        let c = 0.4;
        let m = SymMatrix::from_rows(
            &[
                vec![0.0, 0.0, -c],
                vec![0.0, 1.0 - c, 0.0],
                vec![-c, 0.0, 0.0],
            ],
            1e-12,
        )
        .unwrap();
        assert!((m.min_eigenvalue().unwrap() + c).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_round_trip() {
        let rows = vec![
            vec![4.0, -2.0, 0.5, 1.0],
            vec![-2.0, 3.0, 0.0, 0.25],
            vec![0.5, 0.0, 1.0, -1.5],
            vec![1.0, 0.25, -1.5, 2.0],
        ];
        let m = SymMatrix::from_rows(&rows, 1e-12).unwrap();
        let e = m.eigen().unwrap();
        let back = e.reconstruct(&e.values);
        assert!(back.add_scaled(-1.0, &m).max_abs() < 1e-11);
        // orthonormal columns
        let v = &e.vectors;
        for i in 0..4 {
            for j in 0..4 {
                let d: f64 = (0..4).map(|k| v.get(k, i) * v.get(k, j)).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn asymmetric_rows_name_the_entry() {
        let err = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]], 1e-12).unwrap_err();
        match err {
            Error::Parse { field, .. } => assert_eq!(field, "Q[0][1]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_is_rejected() {
        let m = SymMatrix::from_raw(2, vec![f64::NAN, 0.0, 0.0, 1.0]);
        assert!(matches!(m.eigen(), Err(Error::NonFinite(_))));
    }
}
