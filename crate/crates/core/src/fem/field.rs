use crate::mesh::SimplicialMesh;
use crate::{Error, Result};

/// Nodal coefficients of a continuous piecewise affine scalar function.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn from_vec(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(num_vertices: usize, value: f64) -> Self {
        Self {
            values: vec![value; num_vertices],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn check(&self, mesh: &SimplicialMesh) -> Result<()> {
        if self.values.len() != mesh.num_vertices() {
            return Err(Error::SizeMismatch(format!(
                "scalar field has {} values for {} vertices",
                self.values.len(),
                mesh.num_vertices()
            )));
        }
        Ok(())
    }
}

/// Nodal coefficients of a continuous piecewise affine `d`-vector field,
/// stored vertex-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    dim: usize,
    values: Vec<f64>,
}

impl VectorField {
    pub fn from_vec(dim: usize, values: Vec<f64>) -> Self {
        assert!(dim > 0 && values.len().is_multiple_of(dim), "ragged vector field");
        Self { dim, values }
    }

    pub fn zeros(dim: usize, num_vertices: usize) -> Self {
        Self {
            dim,
            values: vec![0.0; dim * num_vertices],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn at(&self, z: usize) -> &[f64] {
        &self.values[z * self.dim..(z + 1) * self.dim]
    }

    pub fn at_mut(&mut self, z: usize) -> &mut [f64] {
        &mut self.values[z * self.dim..(z + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// `|v(z)|²` at every vertex.
    pub fn nodal_norms_sq(&self) -> Vec<f64> {
        self.values
            .chunks(self.dim)
            .map(|v| v.iter().map(|x| x * x).sum())
            .collect()
    }

    /// `max_z |v(z)|`.
    pub fn max_norm(&self) -> f64 {
        self.nodal_norms_sq().into_iter().fold(0.0, f64::max).sqrt()
    }

    /// `min_z |v(z)|`.
    pub fn min_norm(&self) -> f64 {
        self.nodal_norms_sq().into_iter().fold(f64::INFINITY, f64::min).sqrt()
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: f64, other: &VectorField) -> VectorField {
        debug_assert_eq!(self.values.len(), other.values.len());
        VectorField {
            dim: self.dim,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect(),
        }
    }

    pub(crate) fn check(&self, mesh: &SimplicialMesh) -> Result<()> {
        if self.dim != mesh.dim() || self.values.len() != mesh.dim() * mesh.num_vertices() {
            return Err(Error::SizeMismatch(format!(
                "vector field of dimension {} with {} values on a {}-dimensional mesh with {} vertices",
                self.dim,
                self.values.len(),
                mesh.dim(),
                mesh.num_vertices()
            )));
        }
        Ok(())
    }
}

/// Nodal interpolant of a scalar function.
pub fn interpolate_scalar<F>(mesh: &SimplicialMesh, f: F) -> Result<ScalarField>
where
    F: Fn(&[f64]) -> f64,
{
    let mut values = Vec::with_capacity(mesh.num_vertices());
    for z in 0..mesh.num_vertices() {
        let v = f(mesh.vertex(z));
        if !v.is_finite() {
            return Err(Error::Evaluation { vertex: z, value: v });
        }
        values.push(v);
    }
    Ok(ScalarField::from_vec(values))
}

/// Nodal interpolant of a `d`-vector valued function.
pub fn interpolate_vector<F>(mesh: &SimplicialMesh, f: F) -> Result<VectorField>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let d = mesh.dim();
    let mut values = Vec::with_capacity(d * mesh.num_vertices());
    for z in 0..mesh.num_vertices() {
        let v = f(mesh.vertex(z));
        if v.len() != d {
            return Err(Error::SizeMismatch(format!(
                "vector function returned {} components in dimension {d}",
                v.len()
            )));
        }
        if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::Evaluation { vertex: z, value: *bad });
        }
        values.extend(v);
    }
    Ok(VectorField::from_vec(d, values))
}
