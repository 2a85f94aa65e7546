use super::DenseMatrix;
use rand::Rng;

/// Binary user-item interaction matrix stored as per-row sorted item
/// index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseInteractionMatrix {
    num_rows: usize,
    num_cols: usize,
    rows: Vec<Vec<u32>>,
}

impl SparseInteractionMatrix {
    pub fn from_pairs(
        num_rows: usize,
        num_cols: usize,
        pairs: impl IntoIterator<Item = (u32, u32)>,
    ) -> Self {
        let mut rows = vec![Vec::new(); num_rows];
        for (r, c) in pairs {
            debug_assert!((r as usize) < num_rows && (c as usize) < num_cols);
            rows[r as usize].push(c);
        }
        for row in &mut rows {
            row.sort_unstable();
            row.dedup();
        }
        Self {
            num_rows,
            num_cols,
            rows,
        }
    }

    /// Random binary matrix with the given fill density.
    pub fn random(num_rows: usize, num_cols: usize, density: f64, rng: &mut impl Rng) -> Self {
        let mut rows = vec![Vec::new(); num_rows];
        for row in &mut rows {
            for c in 0..num_cols {
                if rng.gen::<f64>() < density {
                    row.push(c as u32);
                }
            }
        }
        Self {
            num_rows,
            num_cols,
            rows,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.rows[r]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, r: usize, c: u32) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    /// Per-row interaction counts (user degrees).
    pub fn row_degrees(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Per-column interaction counts (item degrees).
    pub fn col_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_cols];
        for row in &self.rows {
            for &c in row {
                deg[c as usize] += 1;
            }
        }
        deg
    }

    /// Restrict to a subset of rows, keeping the column space.
    pub fn select_rows(&self, rows: &[u32]) -> Self {
        Self {
            num_rows: rows.len(),
            num_cols: self.num_cols,
            rows: rows.iter().map(|&r| self.rows[r as usize].clone()).collect(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.num_rows, self.num_cols);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                out.set(r, c as usize, 1.0);
            }
        }
        out
    }
}

/// Degree-normalize a bipartite interaction matrix:
/// `D_u^{-1/2} A D_i^{-1/2}`, with the pseudo-inverse convention
/// `0^{-1/2} := 0` so rows/columns of isolated nodes stay zero.
pub fn normalize_bipartite(a: &SparseInteractionMatrix) -> DenseMatrix {
    let inv_sqrt = |d: usize| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() };
    let row_scale: Vec<f64> = a.row_degrees().into_iter().map(inv_sqrt).collect();
    let col_scale: Vec<f64> = a.col_degrees().into_iter().map(inv_sqrt).collect();
    let mut out = DenseMatrix::zeros(a.num_rows(), a.num_cols());
    for r in 0..a.num_rows() {
        for &c in a.row(r) {
            out.set(r, c as usize, row_scale[r] * col_scale[c as usize]);
        }
    }
    out
}
