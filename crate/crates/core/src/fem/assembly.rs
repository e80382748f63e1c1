//! Assembly of the P1 bilinear forms appearing in the Ericksen energy and
//! in the gradient flow.
//!
//! Every integrand is at most quadratic on a cell (products of two affine
//! functions times constant gradients), so all entries are computed exactly
//! from the barycentric moment identity
//! `∫_K λ_i λ_j = |K| (1 + δ_ij) / ((d+1)(d+2))`.
//! Vector-valued forms are component-diagonal and are returned as the
//! scalar operator to be applied blockwise.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::field::{ScalarField, VectorField};
use super::quadrature::QuadratureRule;
use crate::linalg::CsrMatrix;
use crate::mesh::SimplicialMesh;
use crate::{Error, Result};

/// P1 Lagrange space on a mesh, with a cached sparsity pattern.
#[derive(Debug, Clone)]
pub struct FeSpace<'m> {
    mesh: &'m SimplicialMesh,
    row_ptr: Arc<[usize]>,
    col_idx: Arc<[usize]>,
    /// Value-array position of local entry `(a, b)` of each cell.
    slots: Vec<usize>,
    rule2: QuadratureRule,
    rule4: QuadratureRule,
}

impl<'m> FeSpace<'m> {
    pub fn new(mesh: &'m SimplicialMesh) -> Self {
        let nv = mesh.num_vertices();
        let nvc = mesh.cell_size();
        let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nv];
        for cell in mesh.cells() {
            for &a in cell {
                adjacency[a].extend(cell.iter().copied());
            }
        }
        let mut row_ptr = Vec::with_capacity(nv + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for row in &adjacency {
            col_idx.extend(row.iter().copied());
            row_ptr.push(col_idx.len());
        }
        let mut slots = Vec::with_capacity(mesh.num_cells() * nvc * nvc);
        for cell in mesh.cells() {
            for &a in cell {
                let cols = &col_idx[row_ptr[a]..row_ptr[a + 1]];
                for &b in cell {
                    slots.push(row_ptr[a] + cols.binary_search(&b).unwrap());
                }
            }
        }
        let dim = mesh.dim();
        Self {
            mesh,
            row_ptr: row_ptr.into(),
            col_idx: col_idx.into(),
            slots,
            rule2: QuadratureRule::with_degree(dim, 2).expect("degree 2 rule"),
            rule4: QuadratureRule::with_degree(dim, 4).expect("degree 4 rule"),
        }
    }

    pub fn mesh(&self) -> &'m SimplicialMesh {
        self.mesh
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn num_vertices(&self) -> usize {
        self.mesh.num_vertices()
    }

    /// Rule exact for quadratic integrands.
    pub fn rule2(&self) -> &QuadratureRule {
        &self.rule2
    }

    /// Rule exact for quartic integrands.
    pub fn rule4(&self) -> &QuadratureRule {
        &self.rule4
    }

    pub fn zero_matrix(&self) -> CsrMatrix {
        CsrMatrix::from_pattern(self.row_ptr.clone(), self.col_idx.clone())
    }

    /// Assembles a matrix from per-cell dense blocks written row-major into
    /// a `(d+1)²` buffer.
    pub fn assemble<F>(&self, mut local: F) -> CsrMatrix
    where
        F: FnMut(usize, &mut [f64]),
    {
        let nvc = self.mesh.cell_size();
        let nloc = nvc * nvc;
        let mut out = self.zero_matrix();
        let mut buf = vec![0.0; nloc];
        let values = out.values_mut();
        for k in 0..self.mesh.num_cells() {
            buf.iter_mut().for_each(|v| *v = 0.0);
            local(k, &mut buf);
            for (slot, v) in self.slots[k * nloc..(k + 1) * nloc].iter().zip(&buf) {
                values[*slot] += v;
            }
        }
        out
    }

    /// Assembles a load vector from per-cell contributions of length `d+1`.
    pub fn assemble_vector<F>(&self, mut local: F) -> Vec<f64>
    where
        F: FnMut(usize, &mut [f64]),
    {
        let nvc = self.mesh.cell_size();
        let mut out = vec![0.0; self.num_vertices()];
        let mut buf = vec![0.0; nvc];
        for k in 0..self.mesh.num_cells() {
            buf.iter_mut().for_each(|v| *v = 0.0);
            local(k, &mut buf);
            for (&v, b) in self.mesh.cell(k).iter().zip(&buf) {
                out[v] += b;
            }
        }
        out
    }

    /// `∇λ_a · ∇λ_b` on cell `k`.
    pub(crate) fn grad_dot(&self, k: usize, a: usize, b: usize) -> f64 {
        let d = self.dim();
        let g = self.mesh.cell_grads(k);
        (0..d).map(|c| g[a * d + c] * g[b * d + c]).sum()
    }

    /// Per-cell constant gradient of a scalar field.
    pub(crate) fn scalar_gradient(&self, k: usize, s: &[f64]) -> [f64; 3] {
        let d = self.dim();
        let g = self.mesh.cell_grads(k);
        let mut out = [0.0; 3];
        for (a, &v) in self.mesh.cell(k).iter().enumerate() {
            for c in 0..d {
                out[c] += s[v] * g[a * d + c];
            }
        }
        out
    }

    /// `|∇s_h|²` on cell `k`.
    pub(crate) fn scalar_gradient_sq(&self, k: usize, s: &[f64]) -> f64 {
        self.scalar_gradient(k, s).iter().map(|x| x * x).sum()
    }

    /// Frobenius norm squared of the per-cell constant Jacobian of a vector field.
    pub(crate) fn vector_gradient_sq(&self, k: usize, n: &VectorField) -> f64 {
        let d = self.dim();
        let g = self.mesh.cell_grads(k);
        let cell = self.mesh.cell(k);
        let mut total = 0.0;
        for comp in 0..d {
            for c in 0..d {
                let v: f64 = cell
                    .iter()
                    .enumerate()
                    .map(|(a, &z)| n.at(z)[comp] * g[a * d + c])
                    .sum();
                total += v * v;
            }
        }
        total
    }

    /// `∫_K f_h²` for an affine function with nodal values `f` on cell `k`.
    pub(crate) fn cell_square_integral(&self, k: usize, nodal: impl Fn(usize) -> f64) -> f64 {
        let d = self.dim();
        let cell = self.mesh.cell(k);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for &z in cell {
            let v = nodal(z);
            sum += v;
            sum_sq += v * v;
        }
        self.mesh.cell_volume(k) * (sum * sum + sum_sq) / ((d + 1) * (d + 2)) as f64
    }

    /// `∫_K |n_h|²` on cell `k`.
    pub(crate) fn cell_vector_square_integral(&self, k: usize, n: &VectorField) -> f64 {
        (0..self.dim())
            .map(|comp| self.cell_square_integral(k, |z| n.at(z)[comp]))
            .sum()
    }

    fn mass_block(&self, k: usize, scale: f64, buf: &mut [f64]) {
        let nvc = self.mesh.cell_size();
        let d = self.dim();
        let c = scale * self.mesh.cell_volume(k) / ((d + 1) * (d + 2)) as f64;
        for a in 0..nvc {
            for b in 0..nvc {
                buf[a * nvc + b] = if a == b { 2.0 * c } else { c };
            }
        }
    }

    fn stiffness_block(&self, k: usize, scale: f64, buf: &mut [f64]) {
        let nvc = self.mesh.cell_size();
        let vol = self.mesh.cell_volume(k);
        for a in 0..nvc {
            for b in 0..nvc {
                buf[a * nvc + b] = scale * vol * self.grad_dot(k, a, b);
            }
        }
    }
}

/// Consistent mass matrix `∫ φ_i φ_j`.
pub fn assemble_mass(space: &FeSpace) -> CsrMatrix {
    space.assemble(|k, buf| space.mass_block(k, 1.0, buf))
}

/// Stiffness matrix `Σ_K w_K ∫_K ∇φ_i · ∇φ_j` with a nonnegative weight per cell.
pub fn assemble_stiffness_weighted(space: &FeSpace, weights: &[f64]) -> Result<CsrMatrix> {
    if weights.len() != space.mesh().num_cells() {
        return Err(Error::SizeMismatch(format!(
            "{} cell weights for {} cells",
            weights.len(),
            space.mesh().num_cells()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "stiffness weight must be finite and nonnegative, got {w}"
        )));
    }
    Ok(space.assemble(|k, buf| space.stiffness_block(k, weights[k], buf)))
}

/// Unweighted stiffness matrix `∫ ∇φ_i · ∇φ_j`.
pub fn assemble_stiffness(space: &FeSpace) -> CsrMatrix {
    space.assemble(|k, buf| space.stiffness_block(k, 1.0, buf))
}

/// `∫ s_h² ∇φ_i · ∇φ_j`.
pub fn assemble_s2_stiffness(space: &FeSpace, s: &ScalarField) -> Result<CsrMatrix> {
    s.check(space.mesh())?;
    let sv = s.values();
    Ok(space.assemble(|k, buf| {
        let w = space.cell_square_integral(k, |z| sv[z]) / space.mesh().cell_volume(k);
        space.stiffness_block(k, w, buf)
    }))
}

/// `∫ |∇s_h|² φ_i φ_j`.
pub fn assemble_gradsq_mass(space: &FeSpace, s: &ScalarField) -> Result<CsrMatrix> {
    s.check(space.mesh())?;
    let sv = s.values();
    Ok(space.assemble(|k, buf| space.mass_block(k, space.scalar_gradient_sq(k, sv), buf)))
}

/// `∫ |n_h|² ∇φ_i · ∇φ_j`.
pub fn assemble_nsq_stiffness(space: &FeSpace, n: &VectorField) -> Result<CsrMatrix> {
    n.check(space.mesh())?;
    Ok(space.assemble(|k, buf| {
        let w = space.cell_vector_square_integral(k, n) / space.mesh().cell_volume(k);
        space.stiffness_block(k, w, buf)
    }))
}

/// `∫ |∇n_h|² φ_i φ_j` with the Frobenius norm.
pub fn assemble_gradnsq_mass(space: &FeSpace, n: &VectorField) -> Result<CsrMatrix> {
    n.check(space.mesh())?;
    Ok(space.assemble(|k, buf| space.mass_block(k, space.vector_gradient_sq(k, n), buf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_unit_square;

    fn reference_triangle() -> SimplicialMesh {
        SimplicialMesh::with_boundary_tagger(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0], vec![0, 1, 2], |_| 1).unwrap()
    }

    #[test]
    fn reference_mass() {
        let m = reference_triangle();
        let space = FeSpace::new(&m);
        let mass = assemble_mass(&space).to_dense();
        let c = 0.5 / 12.0;
        let expected = [[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((mass[i][j] - c * expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn reference_stiffness_matches_cotangent_formula() {
        // right angle at vertex 0, 45° at vertices 1 and 2:
        // K_ij = -½ cot(angle opposite edge ij)
        let m = reference_triangle();
        let space = FeSpace::new(&m);
        let k = assemble_stiffness(&space).to_dense();
        let cot45 = 1.0;
        let cot90 = 0.0;
        assert!((k[0][1] + 0.5 * cot45).abs() < 1e-15);
        assert!((k[0][2] + 0.5 * cot45).abs() < 1e-15);
        assert!((k[1][2] + 0.5 * cot90).abs() < 1e-15);
        assert!((k[0][0] - 1.0).abs() < 1e-15);
        assert!((k[1][1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mass_sums_to_area() {
        let m = generate_unit_square(5).unwrap();
        let total: f64 = assemble_mass(&FeSpace::new(&m)).values().iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn stiffness_kills_constants() {
        let m = generate_unit_square(4).unwrap();
        let k = assemble_stiffness(&FeSpace::new(&m));
        let mut y = vec![0.0; m.num_vertices()];
        k.mul_vec(&vec![3.0; m.num_vertices()], &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn negative_weight_rejected() {
        let m = reference_triangle();
        let space = FeSpace::new(&m);
        assert!(matches!(
            assemble_stiffness_weighted(&space, &[-1.0]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn weighted_stiffness_uniform_factor() {
        let m = generate_unit_square(4).unwrap();
        let space = FeSpace::new(&m);
        let w: Vec<f64> = (0..m.num_cells()).map(|k| m.cell_diameter(k).powi(2)).collect();
        let kw = assemble_stiffness_weighted(&space, &w).unwrap();
        let k = assemble_stiffness(&space);
        let h2 = m.h_max().powi(2);
        for (a, b) in kw.values().iter().zip(k.values()) {
            assert!((a - h2 * b).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_weights() {
        let m = generate_unit_square(2).unwrap();
        let space = FeSpace::new(&m);
        let nv = m.num_vertices();
        let zero = assemble_s2_stiffness(&space, &ScalarField::constant(nv, 0.0)).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
        let c = assemble_s2_stiffness(&space, &ScalarField::constant(nv, 0.7)).unwrap();
        let k = assemble_stiffness(&space);
        for (a, b) in c.values().iter().zip(k.values()) {
            assert!((a - 0.49 * b).abs() < 1e-14);
        }
        let g = assemble_gradsq_mass(&space, &ScalarField::constant(nv, 2.0)).unwrap();
        assert!(g.values().iter().all(|&v| v.abs() < 1e-14));
        let n0 = VectorField::zeros(2, nv);
        assert!(assemble_nsq_stiffness(&space, &n0)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn unit_gradient_gives_mass() {
        let m = generate_unit_square(3).unwrap();
        let space = FeSpace::new(&m);
        let s = super::super::interpolate_scalar(&m, |x| 0.6 * x[0] + 0.8 * x[1]).unwrap();
        let g = assemble_gradsq_mass(&space, &s).unwrap();
        let mass = assemble_mass(&space);
        for (a, b) in g.values().iter().zip(mass.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_director_gradient() {
        let m = generate_unit_square(3).unwrap();
        let space = FeSpace::new(&m);
        let n = super::super::interpolate_vector(&m, |x| x.to_vec()).unwrap();
        let g = assemble_gradnsq_mass(&space, &n).unwrap();
        let mass = assemble_mass(&space);
        for (a, b) in g.values().iter().zip(mass.values()) {
            assert!((a - 2.0 * b).abs() < 1e-13);
        }
    }
}
