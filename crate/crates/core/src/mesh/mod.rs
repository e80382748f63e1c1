//! Conforming simplicial meshes in two and three dimensions.
//!
//! A [`SimplicialMesh`] stores vertex coordinates and cell connectivity
//! together with the geometric data needed by P1 assembly: cell measures,
//! gradients of the barycentric coordinate functions and diameters. The
//! boundary is extracted from the facet census at construction time and each
//! boundary facet carries an integer tag.

mod generators;

pub use generators::{generate_cylinder, generate_unit_cube, generate_unit_square, CYLINDER_RADIUS};

use std::collections::{BTreeSet, HashMap};

use crate::{Error, Result};

/// Boundary facet marker.
pub type Tag = i32;

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// Conforming triangle (d = 2) or tetrahedron (d = 3) mesh.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct SimplicialMesh {
    dim: usize,
    coords: Vec<f64>,
    cells: Vec<usize>,
    boundary_facets: Vec<usize>,
    boundary_tags: Vec<Tag>,
    cell_volume: Vec<f64>,
    cell_grads: Vec<f64>,
    cell_diam: Vec<f64>,
    patch_diam: Vec<f64>,
    h_min: f64,
    h_max: f64,
}

impl SimplicialMesh {
    /// Builds a mesh from raw connectivity, tagging boundary facets with `tagger`.
    ///
    /// `tagger` receives the coordinates of the facet vertices. Cells with a
    /// negative orientation are reordered; zero-volume cells are rejected.
    pub fn with_boundary_tagger<F>(dim: usize, coords: Vec<f64>, cells: Vec<usize>, tagger: F) -> Result<Self>
    where
        F: Fn(&[&[f64]]) -> Tag,
    {
        Self::build(dim, coords, cells, |facet, coords| {
            let pts: Vec<&[f64]> = facet.iter().map(|&v| &coords[v * dim..(v + 1) * dim]).collect();
            tagger(&pts)
        })
    }

    /// Builds a mesh whose boundary tags are given explicitly per facet.
    ///
    /// Boundary facets not listed in `tagged` get tag 0. Listed facets that
    /// are not on the boundary are ignored.
    pub fn with_tagged_facets(
        dim: usize,
        coords: Vec<f64>,
        cells: Vec<usize>,
        tagged: &[(Vec<usize>, Tag)],
    ) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(tagged.len());
        for (facet, tag) in tagged {
            if facet.len() != dim {
                return Err(Error::InvalidMesh(format!(
                    "boundary facet with {} vertices in a {}-dimensional mesh",
                    facet.len(),
                    dim
                )));
            }
            lookup.insert(facet_key(facet), *tag);
        }
        Self::build(dim, coords, cells, |facet, _| {
            lookup.get(&facet_key(facet)).copied().unwrap_or(0)
        })
    }

    fn build<F>(dim: usize, coords: Vec<f64>, mut cells: Vec<usize>, tag_of: F) -> Result<Self>
    where
        F: Fn(&[usize], &[f64]) -> Tag,
    {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidParameter(format!(
                "mesh dimension must be 2 or 3, got {dim}"
            )));
        }
        let nv = coords.len() / dim;
        let nvc = dim + 1;
        if !coords.len().is_multiple_of(dim) || !cells.len().is_multiple_of(nvc) {
            return Err(Error::InvalidMesh("ragged coordinate or cell array".into()));
        }
        if cells.is_empty() {
            return Err(Error::InvalidMesh("mesh has no cells".into()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite vertex coordinate".into()));
        }
        if let Some(&bad) = cells.iter().find(|&&v| v >= nv) {
            return Err(Error::InvalidMesh(format!("cell references missing vertex {bad}")));
        }
        let nc = cells.len() / nvc;

        let mut cell_volume = Vec::with_capacity(nc);
        let mut cell_grads = Vec::with_capacity(nc * nvc * dim);
        let mut cell_diam = Vec::with_capacity(nc);
        for k in 0..nc {
            let cell = &mut cells[k * nvc..(k + 1) * nvc];
            let mut geo = simplex_geometry(dim, &coords, cell);
            if geo.det < 0.0 {
                cell.swap(0, 1);
                geo = simplex_geometry(dim, &coords, cell);
            }
            let vol = geo.det / factorial(dim);
            let scale = (0..nvc).map(|i| diameter_of(dim, &coords, cell, i)).fold(0.0, f64::max);
            if !(vol > 1e-14 * scale.powi(dim as i32)) {
                return Err(Error::InvalidMesh(format!("cell {k} has zero volume")));
            }
            cell_volume.push(vol);
            cell_grads.extend_from_slice(&geo.grads[..nvc * dim]);
            cell_diam.push(scale);
        }

        // facet census
        let mut census: HashMap<[usize; MAX_DIM], u32> = HashMap::with_capacity(nc * nvc);
        for cell in cells.chunks(nvc) {
            for omit in 0..nvc {
                *census.entry(facet_key_of_cell(cell, omit)).or_insert(0) += 1;
            }
        }
        if let Some((f, c)) = census.iter().find(|(_, &c)| c > 2) {
            return Err(Error::InvalidMesh(format!(
                "non-conforming mesh: facet {:?} shared by {c} cells",
                &f[..dim]
            )));
        }
        let mut boundary_facets = Vec::new();
        let mut boundary_tags = Vec::new();
        for cell in cells.chunks(nvc) {
            for omit in 0..nvc {
                let key = facet_key_of_cell(cell, omit);
                if census[&key] == 1 {
                    let facet = &key[..dim];
                    boundary_tags.push(tag_of(facet, &coords));
                    boundary_facets.extend_from_slice(facet);
                }
            }
        }

        let h_min = cell_diam.iter().copied().fold(f64::INFINITY, f64::min);
        let h_max = cell_diam.iter().copied().fold(0.0, f64::max);

        let mut neighbours: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nv];
        for cell in cells.chunks(nvc) {
            for &a in cell {
                neighbours[a].extend(cell.iter().copied());
            }
        }
        let patch_diam = neighbours
            .iter()
            .map(|patch| {
                let pts: Vec<usize> = patch.iter().copied().collect();
                let mut best: f64 = 0.0;
                for (i, &a) in pts.iter().enumerate() {
                    for &b in &pts[i + 1..] {
                        best = best.max(distance(dim, &coords, a, b));
                    }
                }
                best
            })
            .collect();

        Ok(Self {
            dim,
            coords,
            cells,
            boundary_facets,
            boundary_tags,
            cell_volume,
            cell_grads,
            cell_diam,
            patch_diam,
            h_min,
            h_max,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn num_cells(&self) -> usize {
        self.cell_volume.len()
    }

    /// Number of vertices per cell, `d + 1`.
    pub fn cell_size(&self) -> usize {
        self.dim + 1
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Flat vertex coordinate array, `dim` entries per vertex.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn cell(&self, k: usize) -> &[usize] {
        let n = self.dim + 1;
        &self.cells[k * n..(k + 1) * n]
    }

    pub fn cells(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.cells.chunks(self.dim + 1)
    }

    pub fn cell_volume(&self, k: usize) -> f64 {
        self.cell_volume[k]
    }

    /// Gradients of the barycentric functions of cell `k`, row `i` is `∇λ_i`.
    pub fn cell_grads(&self, k: usize) -> &[f64] {
        let n = (self.dim + 1) * self.dim;
        &self.cell_grads[k * n..(k + 1) * n]
    }

    /// Diameter `h_K` of cell `k` (its longest edge).
    pub fn cell_diameter(&self, k: usize) -> f64 {
        self.cell_diam[k]
    }

    /// Diameter of the vertex patch of `z`.
    pub fn patch_diameter(&self, z: usize) -> f64 {
        self.patch_diam[z]
    }

    pub fn h_min(&self) -> f64 {
        self.h_min
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn total_volume(&self) -> f64 {
        self.cell_volume.iter().sum()
    }

    pub fn num_boundary_facets(&self) -> usize {
        self.boundary_tags.len()
    }

    pub fn boundary_facet(&self, f: usize) -> (&[usize], Tag) {
        let d = self.dim;
        (&self.boundary_facets[f * d..(f + 1) * d], self.boundary_tags[f])
    }

    pub fn boundary_facets(&self) -> impl Iterator<Item = (&[usize], Tag)> + '_ {
        self.boundary_facets
            .chunks(self.dim)
            .zip(self.boundary_tags.iter().copied())
    }

    /// Distinct boundary tags with their facet counts, in ascending tag order.
    pub fn tag_census(&self) -> Vec<(Tag, usize)> {
        let mut census = std::collections::BTreeMap::new();
        for &t in &self.boundary_tags {
            *census.entry(t).or_insert(0usize) += 1;
        }
        census.into_iter().collect()
    }

    /// Vertices incident to a boundary facet whose tag is in `tags`, ascending.
    pub fn boundary_vertices(&self, tags: &[Tag]) -> Result<Vec<usize>> {
        if tags.is_empty() {
            return Err(Error::InvalidParameter("empty boundary tag set".into()));
        }
        let census = self.tag_census();
        for t in tags {
            if !census.iter().any(|(c, _)| c == t) {
                return Err(Error::InvalidParameter(format!(
                    "boundary tag {t} does not occur in the mesh"
                )));
            }
        }
        let mut out = BTreeSet::new();
        for (facet, tag) in self.boundary_facets() {
            if tags.contains(&tag) {
                out.extend(facet.iter().copied());
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Worst cell aspect ratio `max_K h_K / ρ_K` with `ρ_K` the inradius.
    pub fn shape_regularity(&self) -> f64 {
        (0..self.num_cells())
            .map(|k| self.cell_diam[k] / self.inradius(k))
            .fold(0.0, f64::max)
    }

    /// Inradius `d |K| / |∂K|` of cell `k`.
    pub fn inradius(&self, k: usize) -> f64 {
        let cell = self.cell(k);
        let d = self.dim;
        let surface: f64 = (0..d + 1)
            .map(|omit| {
                let f: Vec<usize> = (0..d + 1).filter(|&i| i != omit).map(|i| cell[i]).collect();
                facet_measure(d, &self.coords, &f)
            })
            .sum();
        d as f64 * self.cell_volume[k] / surface
    }

    /// Barycenter of cell `k`.
    pub fn cell_centroid(&self, k: usize) -> Vec<f64> {
        let d = self.dim;
        let mut c = vec![0.0; d];
        for &v in self.cell(k) {
            for (ci, x) in c.iter_mut().zip(self.vertex(v)) {
                *ci += x;
            }
        }
        c.iter_mut().for_each(|x| *x /= (d + 1) as f64);
        c
    }

    /// Keeps the cells for which `keep` returns true and drops unused vertices.
    ///
    /// Facets already on the boundary keep their tag; facets exposed by the
    /// removal are tagged `new_tag`.
    pub fn retain_cells<F>(&self, keep: F, new_tag: Tag) -> Result<Self>
    where
        F: Fn(usize) -> bool,
    {
        let nvc = self.dim + 1;
        let kept: Vec<usize> = (0..self.num_cells()).filter(|&k| keep(k)).collect();
        let mut remap = vec![usize::MAX; self.num_vertices()];
        let mut coords = Vec::new();
        let mut cells = Vec::with_capacity(kept.len() * nvc);
        for &k in &kept {
            for &v in self.cell(k) {
                if remap[v] == usize::MAX {
                    remap[v] = coords.len() / self.dim;
                    coords.extend_from_slice(self.vertex(v));
                }
                cells.push(remap[v]);
            }
        }
        let mut old: HashMap<[usize; MAX_DIM], Tag> = HashMap::new();
        for (facet, tag) in self.boundary_facets() {
            if facet.iter().all(|&v| remap[v] != usize::MAX) {
                let mapped: Vec<usize> = facet.iter().map(|&v| remap[v]).collect();
                old.insert(facet_key(&mapped), tag);
            }
        }
        Self::build(self.dim, coords, cells, |facet, _| {
            old.get(&facet_key(facet)).copied().unwrap_or(new_tag)
        })
    }
}

struct SimplexGeometry {
    det: f64,
    grads: [f64; (MAX_DIM + 1) * MAX_DIM],
}

/// Jacobian determinant and barycentric gradients of a simplex.
fn simplex_geometry(dim: usize, coords: &[f64], cell: &[usize]) -> SimplexGeometry {
    let x = |v: usize, r: usize| coords[cell[v] * dim + r];
    let mut grads = [0.0; (MAX_DIM + 1) * MAX_DIM];
    let det;
    if dim == 2 {
        let (a, b) = (x(1, 0) - x(0, 0), x(2, 0) - x(0, 0));
        let (c, d) = (x(1, 1) - x(0, 1), x(2, 1) - x(0, 1));
        // J = [[a, b], [c, d]]
        det = a * d - b * c;
        let inv = [d / det, -b / det, -c / det, a / det];
        // row i of J^{-1} is ∇λ_{i+1}
        grads[2..6].copy_from_slice(&inv);
    } else {
        let mut j = [[0.0; 3]; 3];
        for (r, row) in j.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = x(c + 1, r) - x(0, r);
            }
        }
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| j[r0][c0] * j[r1][c1] - j[r0][c1] * j[r1][c0];
        det = j[0][0] * cof(1, 2, 1, 2) - j[0][1] * cof(1, 2, 0, 2) + j[0][2] * cof(1, 2, 0, 1);
        let inv = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        for i in 0..3 {
            for c in 0..3 {
                grads[(i + 1) * 3 + c] = inv[i][c] / det;
            }
        }
    }
    for c in 0..dim {
        grads[c] = -(1..=dim).map(|i| grads[i * dim + c]).sum::<f64>();
    }
    SimplexGeometry { det, grads }
}

fn factorial(d: usize) -> f64 {
    (1..=d).product::<usize>() as f64
}

fn distance(dim: usize, coords: &[f64], a: usize, b: usize) -> f64 {
    (0..dim)
        .map(|r| (coords[a * dim + r] - coords[b * dim + r]).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn diameter_of(dim: usize, coords: &[f64], cell: &[usize], i: usize) -> f64 {
    cell[i + 1..]
        .iter()
        .map(|&b| distance(dim, coords, cell[i], b))
        .fold(0.0, f64::max)
}

/// (d-1)-measure of a facet given by `dim` vertex indices.
fn facet_measure(dim: usize, coords: &[f64], f: &[usize]) -> f64 {
    if dim == 2 {
        distance(2, coords, f[0], f[1])
    } else {
        let p = |v: usize| [coords[v * 3], coords[v * 3 + 1], coords[v * 3 + 2]];
        let (a, b, c) = (p(f[0]), p(f[1]), p(f[2]));
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let w = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let cr = [
            u[1] * w[2] - u[2] * w[1],
            u[2] * w[0] - u[0] * w[2],
            u[0] * w[1] - u[1] * w[0],
        ];
        0.5 * (cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]).sqrt()
    }
}

fn facet_key(facet: &[usize]) -> [usize; MAX_DIM] {
    let mut key = [usize::MAX; MAX_DIM];
    key[..facet.len()].copy_from_slice(facet);
    key[..facet.len()].sort_unstable();
    key
}

fn facet_key_of_cell(cell: &[usize], omit: usize) -> [usize; MAX_DIM] {
    let mut key = [usize::MAX; MAX_DIM];
    let mut m = 0;
    for (i, &v) in cell.iter().enumerate() {
        if i != omit {
            key[m] = v;
            m += 1;
        }
    }
    key[..m].sort_unstable();
    key
}
