//! Null-space reduction for the tangential director update.
//!
//! The constraint `t(z) · n(z) = 0` acts vertex by vertex, so the discrete
//! tangent space is parametrized by `d - 1` coordinates per free vertex
//! through an orthonormal basis `Z_z` of `n(z)^⊥`. For an operator of the
//! form `A ⊗ I_d` the reduced operator `Zᵀ (A ⊗ I_d) Z` stays SPD and its
//! diagonal is `a_zz` in every tangential direction.

use super::cg::{pcg, CgSettings, LinearOperator};
use super::csr::CsrMatrix;
use crate::fem::VectorField;
use crate::{Error, Result};

/// Orthonormal bases of `n(z)^⊥` at the free vertices.
#[derive(Debug, Clone)]
pub struct TangentBasis {
    dim: usize,
    num_vertices: usize,
    free: Vec<usize>,
    /// `d × (d-1)` column-major per free vertex.
    columns: Vec<f64>,
}

impl TangentBasis {
    /// Builds the basis at every vertex listed in `free_vertices`.
    ///
    /// The first column is the coordinate axis least aligned with `n(z)`
    /// (lowest index on ties) orthogonalized against `n(z)/|n(z)|`; in 3D the
    /// second column is `n̂ × first`.
    pub fn build(n: &VectorField, free_vertices: &[usize]) -> Result<Self> {
        let d = n.dim();
        let mut columns = Vec::with_capacity(free_vertices.len() * d * (d - 1));
        for &z in free_vertices {
            let nz = n.at(z);
            let norm = nz.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::DegenerateDirector { vertex: z });
            }
            let mut nhat = [0.0; 3];
            for k in 0..d {
                nhat[k] = nz[k] / norm;
            }
            let mut axis = 0;
            for k in 1..d {
                if nhat[k].abs() < nhat[axis].abs() {
                    axis = k;
                }
            }
            let mut v = [0.0; 3];
            v[axis] = 1.0;
            let proj = nhat[axis];
            for k in 0..d {
                v[k] -= proj * nhat[k];
            }
            let vn = v[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= vn);
            columns.extend_from_slice(&v[..d]);
            if d == 3 {
                let w = [
                    nhat[1] * v[2] - nhat[2] * v[1],
                    nhat[2] * v[0] - nhat[0] * v[2],
                    nhat[0] * v[1] - nhat[1] * v[0],
                ];
                columns.extend_from_slice(&w);
            }
        }
        Ok(Self {
            dim: d,
            num_vertices: n.num_vertices(),
            free: free_vertices.to_vec(),
            columns,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn free_vertices(&self) -> &[usize] {
        &self.free
    }

    /// Number of reduced unknowns, `(d - 1)` per free vertex.
    pub fn reduced_len(&self) -> usize {
        self.free.len() * (self.dim - 1)
    }

    /// Column `c` of the basis at the `i`-th free vertex.
    pub fn column(&self, i: usize, c: usize) -> &[f64] {
        let d = self.dim;
        let start = (i * (d - 1) + c) * d;
        &self.columns[start..start + d]
    }

    /// `t = Z y`, zero at constrained vertices.
    pub fn expand(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut t = vec![0.0; self.num_vertices * d];
        for (i, &z) in self.free.iter().enumerate() {
            for c in 0..d - 1 {
                let coef = y[i * (d - 1) + c];
                for (k, zk) in self.column(i, c).iter().enumerate() {
                    t[z * d + k] += coef * zk;
                }
            }
        }
        t
    }

    /// `Zᵀ w` for a full vertex-major vector `w`.
    pub fn restrict(&self, w: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut y = Vec::with_capacity(self.reduced_len());
        for (i, &z) in self.free.iter().enumerate() {
            for c in 0..d - 1 {
                y.push(
                    self.column(i, c)
                        .iter()
                        .zip(&w[z * d..(z + 1) * d])
                        .map(|(a, b)| a * b)
                        .sum(),
                );
            }
        }
        y
    }
}

/// The operator `Zᵀ (A ⊗ I_d) Z` on reduced coordinates.
pub struct ReducedOperator<'a> {
    scalar: &'a CsrMatrix,
    basis: &'a TangentBasis,
}

impl<'a> ReducedOperator<'a> {
    pub fn new(scalar: &'a CsrMatrix, basis: &'a TangentBasis) -> Self {
        Self { scalar, basis }
    }
}

impl LinearOperator for ReducedOperator<'_> {
    fn dim(&self) -> usize {
        self.basis.reduced_len()
    }

    fn apply(&self, y: &[f64], out: &mut [f64]) {
        let t = self.basis.expand(y);
        let mut at = vec![0.0; t.len()];
        self.scalar.mul_blocks(self.basis.dim, &t, &mut at);
        out.copy_from_slice(&self.basis.restrict(&at));
    }

    fn diagonal(&self) -> Vec<f64> {
        let m = self.basis.dim - 1;
        let mut diag = Vec::with_capacity(self.dim());
        for &z in &self.basis.free {
            let a = self.scalar.get(z, z);
            diag.extend(std::iter::repeat_n(a, m));
        }
        diag
    }
}

/// Solves `(A ⊗ I_d) t = rhs` over the discrete tangent space.
///
/// The result satisfies `t(z) · n(z) = 0` at every free vertex by
/// construction and vanishes at every other vertex.
pub fn reduced_solve(
    a_scalar: &CsrMatrix,
    basis: &TangentBasis,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<VectorField> {
    if a_scalar.nrows() != basis.num_vertices || rhs.len() != basis.num_vertices * basis.dim {
        return Err(Error::SizeMismatch(
            "operator, tangent basis and right-hand side disagree".into(),
        ));
    }
    let op = ReducedOperator::new(a_scalar, basis);
    let b = basis.restrict(rhs);
    let out = pcg(&op, &b, CgSettings::new(tol, max_iter))?;
    Ok(VectorField::from_vec(basis.dim, basis.expand(&out.x)))
}
