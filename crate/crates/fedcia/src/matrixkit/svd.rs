use super::DenseMatrix;
use crate::par;
use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-8;

/// Truncated SVD of a symmetric matrix.
///
/// Symmetry makes left and right singular vectors identical, so only one
/// factor is kept. Noisy similarity matrices can be indefinite; singular
/// values are stored as magnitudes (non-increasing) with the eigenvalue
/// sign folded back in during reconstruction.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    left_vectors: DenseMatrix, // M x L, orthonormal columns
    singular_values: Vec<f64>, // non-negative, non-increasing
    signs: Vec<f64>,           // +-1 per retained component
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn dim(&self) -> usize {
        self.left_vectors.rows()
    }

    pub fn left_vectors(&self) -> &DenseMatrix {
        &self.left_vectors
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    /// Number of real values a client transmits for this factorization:
    /// `M * L_k` vector entries plus `L_k` signed singular values.
    pub fn payload_len(&self) -> usize {
        self.dim() * self.rank() + self.rank()
    }

    /// `U diag(sign * sigma) U^T`, exactly symmetric by construction.
    pub fn reconstruct(&self) -> DenseMatrix {
        let m = self.dim();
        let l = self.rank();
        let signed: Vec<f64> = self
            .singular_values
            .iter()
            .zip(&self.signs)
            .map(|(s, sg)| s * sg)
            .collect();
        let mut out = DenseMatrix::zeros(m, m);
        par::for_each_row(out.values_mut(), m, |i, out_row| {
            for (j, slot) in out_row.iter_mut().enumerate().skip(i) {
                let mut acc = 0.0;
                for k in 0..l {
                    acc += signed[k] * self.left_vectors.get(i, k) * self.left_vectors.get(j, k);
                }
                *slot = acc;
            }
        });
        for i in 0..m {
            for j in (i + 1)..m {
                let v = out.get(i, j);
                out.set(j, i, v);
            }
        }
        out
    }
}

/// Top `rank` singular triplets of a symmetric matrix, computed through a
/// symmetric eigendecomposition with components ordered by eigenvalue
/// magnitude (ties broken by original position).
pub fn truncated_svd(c: &DenseMatrix, rank: usize) -> Result<TruncatedSvd> {
    let m = c.rows();
    if c.cols() != m {
        return Err(Error::ShapeMismatch {
            expected: "square matrix".into(),
            actual: format!("{}x{}", c.rows(), c.cols()),
        });
    }
    let dev = c.symmetry_deviation();
    if dev > SYMMETRY_TOL {
        return Err(Error::NotSymmetric {
            deviation: dev,
            tolerance: SYMMETRY_TOL,
        });
    }
    if rank == 0 || rank > m {
        return Err(Error::RankOutOfRange { rank, max: m });
    }

    let na = nalgebra::DMatrix::from_fn(m, m, |i, j| {
        // exact symmetry for the solver even when within tolerance
        0.5 * (c.get(i, j) + c.get(j, i))
    });
    let eigen = na.symmetric_eigen();

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .abs()
            .partial_cmp(&eigen.eigenvalues[a].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    order.truncate(rank);

    let mut left = DenseMatrix::zeros(m, rank);
    let mut singular_values = Vec::with_capacity(rank);
    let mut signs = Vec::with_capacity(rank);
    for (k, &idx) in order.iter().enumerate() {
        let lambda = eigen.eigenvalues[idx];
        singular_values.push(lambda.abs());
        signs.push(if lambda < 0.0 { -1.0 } else { 1.0 });
        for i in 0..m {
            left.set(i, k, eigen.eigenvectors[(i, idx)]);
        }
    }
    Ok(TruncatedSvd {
        left_vectors: left,
        singular_values,
        signs,
    })
}
