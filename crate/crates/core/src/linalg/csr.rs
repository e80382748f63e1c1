use std::sync::Arc;

use crate::{Error, Result};

/// Square sparse matrix in compressed sparse row format.
///
/// Column indices are sorted and unique within each row. The index arrays
/// are reference counted so that matrices assembled on the same mesh share
/// their sparsity pattern and can be combined entrywise.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    row_ptr: Arc<[usize]>,
    col_idx: Arc<[usize]>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Zero matrix with a given pattern.
    pub fn from_pattern(row_ptr: Arc<[usize]>, col_idx: Arc<[usize]>) -> Self {
        debug_assert_eq!(*row_ptr.last().unwrap(), col_idx.len());
        let nnz = col_idx.len();
        Self {
            row_ptr,
            col_idx,
            values: vec![0.0; nnz],
        }
    }

    /// Assembles an `n × n` matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::SizeMismatch(format!(
                    "triplet ({i}, {j}) outside a {n}x{n} matrix"
                )));
            }
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (j, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            row_ptr: row_ptr.into(),
            col_idx: col_idx.into(),
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            row_ptr: (0..=n).collect::<Vec<_>>().into(),
            col_idx: (0..n).collect::<Vec<_>>().into(),
            values: vec![1.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Entry `(i, j)`, zero outside the pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|p| vals[p]).unwrap_or(0.0)
    }

    /// Position of `(i, j)` in the value array.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (cols, _) = self.row(i);
        cols.binary_search(&j).ok().map(|p| self.row_ptr[i] + p)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows()).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.nrows());
        for (i, yi) in y.iter_mut().enumerate() {
            let r = self.row_ptr[i]..self.row_ptr[i + 1];
            *yi = self.col_idx[r.clone()]
                .iter()
                .zip(&self.values[r])
                .map(|(&j, &a)| a * x[j])
                .sum();
        }
    }

    /// `y = (A ⊗ I_d) x` for vertex-major vectors with `d` components per row.
    pub fn mul_blocks(&self, d: usize, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.nrows() * d);
        let mut acc = [0.0; 3];
        for i in 0..self.nrows() {
            acc[..d].iter_mut().for_each(|a| *a = 0.0);
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (j, a) = (self.col_idx[p], self.values[p]);
                for k in 0..d {
                    acc[k] += a * x[j * d + k];
                }
            }
            y[i * d..(i + 1) * d].copy_from_slice(&acc[..d]);
        }
    }

    /// `xᵀ (A ⊗ I_d) x`.
    pub fn quadratic_form_blocks(&self, d: usize, x: &[f64]) -> f64 {
        let mut y = vec![0.0; x.len()];
        self.mul_blocks(d, x, &mut y);
        dot(x, &y)
    }

    pub fn same_pattern(&self, other: &CsrMatrix) -> bool {
        (Arc::ptr_eq(&self.row_ptr, &other.row_ptr) && Arc::ptr_eq(&self.col_idx, &other.col_idx))
            || (self.row_ptr == other.row_ptr && self.col_idx == other.col_idx)
    }

    /// `Σ c_k A_k` for matrices sharing one pattern.
    pub fn linear_combination(terms: &[(f64, &CsrMatrix)]) -> Result<CsrMatrix> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        let mut out = CsrMatrix::from_pattern(first.row_ptr.clone(), first.col_idx.clone());
        for (c, m) in terms {
            if !first.same_pattern(m) {
                return Err(Error::SizeMismatch(
                    "linear combination of matrices with different patterns".into(),
                ));
            }
            for (o, v) in out.values.iter_mut().zip(&m.values) {
                *o += c * v;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, c: f64) -> CsrMatrix {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// Largest `|a_ij - a_ji|` relative to the largest `|a_ij|`.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.nrows() {
            let (cols, vals) = self.row(i);
            for (&j, &a) in cols.iter().zip(vals) {
                worst = worst.max((a - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    /// Principal submatrix on `keep` (ascending indices).
    pub fn principal_submatrix(&self, keep: &[usize]) -> CsrMatrix {
        let mut map = vec![usize::MAX; self.nrows()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut row_ptr = Vec::with_capacity(keep.len() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for &i in keep {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if map[j] != usize::MAX {
                    col_idx.push(map[j]);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            row_ptr: row_ptr.into(),
            col_idx: col_idx.into(),
            values,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.nrows();
        let mut out = vec![vec![0.0; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                row[j] = v;
            }
        }
        out
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
