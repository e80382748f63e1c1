use std::fmt;
use std::sync::Arc;

use crate::fem::{assemble_stiffness, FeSpace, VectorField};
use crate::linalg::cg_solve;
use crate::mesh::{SimplicialMesh, Tag};
use crate::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Strong anchoring data on `Γ_D`: `s = g`, `n = q` and `u = r = g q`.
#[derive(Clone)]
pub struct DirichletData {
    /// Boundary tags forming `Γ_D`; empty means the whole boundary.
    pub tags: Vec<Tag>,
    pub g: ScalarFn,
    pub q: VectorFn,
}

impl fmt::Debug for DirichletData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletData")
            .field("tags", &self.tags)
            .finish_non_exhaustive()
    }
}

/// Dirichlet data interpolated at the vertices of `Γ_D`.
#[derive(Debug, Clone, Default)]
pub struct DirichletNodes {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub g: Vec<f64>,
    /// `d` entries per vertex in `vertices`.
    pub q: Vec<f64>,
}

impl DirichletNodes {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `true` at Dirichlet vertices.
    pub fn mask(&self, num_vertices: usize) -> Vec<bool> {
        let mut mask = vec![false; num_vertices];
        for &z in &self.vertices {
            mask[z] = true;
        }
        mask
    }

    /// Complement of `vertices` in `0..num_vertices`.
    pub fn free_vertices(&self, num_vertices: usize) -> Vec<usize> {
        let mask = self.mask(num_vertices);
        (0..num_vertices).filter(|&z| !mask[z]).collect()
    }
}

impl DirichletData {
    pub fn new(
        tags: Vec<Tag>,
        g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        q: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            tags,
            g: Arc::new(g),
            q: Arc::new(q),
        }
    }

    /// `r(x) = g(x) q(x)`.
    pub fn r(&self, x: &[f64]) -> Vec<f64> {
        let g = (self.g)(x);
        (self.q)(x).into_iter().map(|v| g * v).collect()
    }

    /// Vertices of `Γ_D` on `mesh`.
    pub fn vertices(&self, mesh: &SimplicialMesh) -> Result<Vec<usize>> {
        if self.tags.is_empty() {
            let all: Vec<Tag> = mesh.tag_census().into_iter().map(|(t, _)| t).collect();
            if all.is_empty() {
                return Ok(Vec::new());
            }
            mesh.boundary_vertices(&all)
        } else {
            mesh.boundary_vertices(&self.tags)
        }
    }

    /// Evaluates `g` and `q` at the Dirichlet vertices and checks `|q| = 1`.
    pub fn nodal(&self, mesh: &SimplicialMesh) -> Result<DirichletNodes> {
        let d = mesh.dim();
        let vertices = self.vertices(mesh)?;
        let mut g = Vec::with_capacity(vertices.len());
        let mut q = Vec::with_capacity(vertices.len() * d);
        for &z in &vertices {
            let x = mesh.vertex(z);
            let gz = (self.g)(x);
            if !gz.is_finite() {
                return Err(Error::Evaluation { vertex: z, value: gz });
            }
            let qz = (self.q)(x);
            if qz.len() != d {
                return Err(Error::SizeMismatch(format!(
                    "boundary director has {} components in dimension {d}",
                    qz.len()
                )));
            }
            let norm_sq: f64 = qz.iter().map(|v| v * v).sum();
            if !((norm_sq - 1.0).abs() <= 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "boundary director at vertex {z} has length {}",
                    norm_sq.sqrt()
                )));
            }
            g.push(gz);
            q.extend(qz);
        }
        Ok(DirichletNodes { vertices, g, q })
    }
}

/// Radial unit field `(x − c)/|x − c|` at every vertex, with `e₁` at a
/// vertex that coincides with `c`.
pub fn point_defect_field(mesh: &SimplicialMesh, center: &[f64]) -> Result<VectorField> {
    let d = mesh.dim();
    if center.len() != d {
        return Err(Error::SizeMismatch(format!(
            "defect center has {} coordinates in dimension {d}",
            center.len()
        )));
    }
    let mut values = Vec::with_capacity(d * mesh.num_vertices());
    for z in 0..mesh.num_vertices() {
        values.extend(radial_direction(mesh.vertex(z), center));
    }
    Ok(VectorField::from_vec(d, values))
}

/// Point defect at `c` made compatible with the Dirichlet director.
///
/// Adds to the radial field the discrete harmonic extension (homogeneous
/// Neumann on the rest of the boundary) of the mismatch `q − (x − c)/|x − c|`
/// on `Γ_D`, then normalizes every nodal value. Dirichlet vertices receive
/// `q` exactly, so the field has no one-element boundary layer.
pub fn compatible_defect_field(mesh: &SimplicialMesh, center: &[f64], nodes: &DirichletNodes) -> Result<VectorField> {
    let d = mesh.dim();
    let nv = mesh.num_vertices();
    let mut field = point_defect_field(mesh, center)?;
    let free = nodes.free_vertices(nv);
    if !nodes.is_empty() && !free.is_empty() {
        let stiffness = assemble_stiffness(&FeSpace::new(mesh));
        let reduced = stiffness.principal_submatrix(&free);
        let mut mismatch = vec![0.0; nv];
        let mut lift = vec![0.0; nv];
        for c in 0..d {
            mismatch.iter_mut().for_each(|v| *v = 0.0);
            for (i, &z) in nodes.vertices.iter().enumerate() {
                mismatch[z] = nodes.q[i * d + c] - field.at(z)[c];
            }
            stiffness.mul_vec(&mismatch, &mut lift);
            let rhs: Vec<f64> = free.iter().map(|&z| -lift[z]).collect();
            let extension = cg_solve(&reduced, &rhs, 1e-12, 10 * free.len())?;
            for (&z, v) in free.iter().zip(extension) {
                field.at_mut(z)[c] += v;
            }
        }
    }
    for z in free {
        let nz = field.at_mut(z);
        let norm = nz.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-8) {
            return Err(Error::DegenerateDirector { vertex: z });
        }
        nz.iter_mut().for_each(|v| *v /= norm);
    }
    for (i, &z) in nodes.vertices.iter().enumerate() {
        field.at_mut(z).copy_from_slice(&nodes.q[i * d..(i + 1) * d]);
    }
    Ok(field)
}

/// `(x − c)/|x − c|` over the first `c.len()` coordinates, zero-padded to
/// the length of `x`; `e₁` when `x = c`.
pub fn radial_direction(x: &[f64], center: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, xi)| match center.get(i) {
            Some(c) => xi - c,
            None => 0.0,
        })
        .collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        v.iter_mut().for_each(|a| *a = 0.0);
        v[0] = 1.0;
    } else {
        v.iter_mut().for_each(|a| *a /= norm);
    }
    v
}

/// Outer-box anchoring rotating from `(0,0,−1)` at `t = 0` through `(1,0,0)`
/// to `(0,0,1)` at `t = 1`; `t` is clamped to `[0, 1]`.
pub fn saturn_ring_bc(t: f64) -> [f64; 3] {
    let t = t.clamp(0.0, 1.0);
    let a = std::f64::consts::PI * t;
    [a.sin(), 0.0, -a.cos()]
}
