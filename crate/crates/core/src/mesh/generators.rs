//! Structured mesh generators for the unit square, the unit cube and a
//! cylinder.

use std::f64::consts::PI;

use super::{SimplicialMesh, Tag};
use crate::{Error, Result};

/// Uniform mesh of `(0,1)²` with `n × n` squares, each cut into two right
/// triangles along the same diagonal. All boundary facets get tag 1.
pub fn generate_unit_square(n: usize) -> Result<SimplicialMesh> {
    if n == 0 {
        return Err(Error::InvalidParameter("unit square needs n >= 1".into()));
    }
    let np = n + 1;
    let h = 1.0 / n as f64;
    let mut coords = Vec::with_capacity(2 * np * np);
    for j in 0..np {
        for i in 0..np {
            coords.push(i as f64 * h);
            coords.push(j as f64 * h);
        }
    }
    let id = |i: usize, j: usize| j * np + i;
    let mut cells = Vec::with_capacity(6 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v11, v01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            cells.extend_from_slice(&[v00, v10, v11, v00, v11, v01]);
        }
    }
    SimplicialMesh::with_boundary_tagger(2, coords, cells, |_| 1)
}

/// Uniform mesh of `(0,1)³` with `n³` subcubes, each split into the six
/// Kuhn tetrahedra around its main diagonal.
///
/// Boundary tags: 1 = {z=0}, 2 = {z=1}, 3 = {x=0}, 4 = {x=1}, 5 = {y=0},
/// 6 = {y=1}.
pub fn generate_unit_cube(n: usize) -> Result<SimplicialMesh> {
    if n == 0 {
        return Err(Error::InvalidParameter("unit cube needs n >= 1".into()));
    }
    let np = n + 1;
    let h = 1.0 / n as f64;
    let mut coords = Vec::with_capacity(3 * np * np * np);
    for k in 0..np {
        for j in 0..np {
            for i in 0..np {
                coords.extend_from_slice(&[i as f64 * h, j as f64 * h, k as f64 * h]);
            }
        }
    }
    let id = |p: [usize; 3]| (p[2] * np + p[1]) * np + p[0];
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut cells = Vec::with_capacity(24 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in PERMS {
                    let mut p = [i, j, k];
                    cells.push(id(p));
                    for axis in perm {
                        p[axis] += 1;
                        cells.push(id(p));
                    }
                }
            }
        }
    }
    SimplicialMesh::with_boundary_tagger(3, coords, cells, cube_face_tag)
}

fn cube_face_tag(pts: &[&[f64]]) -> Tag {
    // (axis, value, tag)
    const FACES: [(usize, f64, Tag); 6] = [
        (2, 0.0, 1),
        (2, 1.0, 2),
        (0, 0.0, 3),
        (0, 1.0, 4),
        (1, 0.0, 5),
        (1, 1.0, 6),
    ];
    FACES
        .iter()
        .find(|(axis, value, _)| pts.iter().all(|p| (p[*axis] - value).abs() < 1e-12))
        .map(|f| f.2)
        .unwrap_or(0)
}

/// Radius of the generated cylinder.
pub const CYLINDER_RADIUS: f64 = 0.5;

/// Cylinder of radius 0.5 around the axis `(0.5, 0.5, z)`, `0 < z < 1`.
///
/// The disk is triangulated with `n_r` rings of `n_theta` vertices each
/// around a center vertex, then extruded into `n_z` prism layers; each
/// prism is cut into three tetrahedra by the lowest-index rule, which makes
/// the diagonals of shared quadrilateral faces agree.
///
/// Boundary tags: 1 = lateral surface, 2 = bottom, 3 = top.
pub fn generate_cylinder(n_r: usize, n_theta: usize, n_z: usize) -> Result<SimplicialMesh> {
    if n_r == 0 || n_theta < 3 || n_z == 0 {
        return Err(Error::InvalidParameter(format!(
            "cylinder needs n_r >= 1, n_theta >= 3, n_z >= 1 (got {n_r}, {n_theta}, {n_z})"
        )));
    }
    let mut disk = vec![0.5, 0.5];
    for ring in 1..=n_r {
        let r = CYLINDER_RADIUS * ring as f64 / n_r as f64;
        for j in 0..n_theta {
            let theta = 2.0 * PI * j as f64 / n_theta as f64;
            disk.push(0.5 + r * theta.cos());
            disk.push(0.5 + r * theta.sin());
        }
    }
    let ring_id = |ring: usize, j: usize| 1 + (ring - 1) * n_theta + j % n_theta;
    let mut tris = Vec::new();
    for j in 0..n_theta {
        tris.push([0, ring_id(1, j), ring_id(1, j + 1)]);
    }
    for ring in 2..=n_r {
        for j in 0..n_theta {
            let (a, b) = (ring_id(ring - 1, j), ring_id(ring - 1, j + 1));
            let (c, d) = (ring_id(ring, j), ring_id(ring, j + 1));
            tris.push([a, c, d]);
            tris.push([a, d, b]);
        }
    }

    let nd = disk.len() / 2;
    let mut coords = Vec::with_capacity(3 * nd * (n_z + 1));
    for layer in 0..=n_z {
        let z = layer as f64 / n_z as f64;
        for p in disk.chunks(2) {
            coords.extend_from_slice(&[p[0], p[1], z]);
        }
    }
    let mut cells = Vec::with_capacity(12 * tris.len() * n_z);
    for layer in 0..n_z {
        let off = layer * nd;
        for tri in &tris {
            let mut t = *tri;
            t.sort_unstable();
            let [a, b, c] = t.map(|v| v + off);
            let (at, bt, ct) = (a + nd, b + nd, c + nd);
            cells.extend_from_slice(&[a, b, c, ct, a, b, bt, ct, a, at, bt, ct]);
        }
    }
    SimplicialMesh::with_boundary_tagger(3, coords, cells, |pts| {
        if pts.iter().all(|p| p[2] == 0.0) {
            2
        } else if pts.iter().all(|p| p[2] == 1.0) {
            3
        } else {
            1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn facet_counts(m: &SimplicialMesh) -> HashMap<Vec<usize>, usize> {
        let mut census = HashMap::new();
        for cell in m.cells() {
            for omit in 0..cell.len() {
                let mut f: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != omit)
                    .map(|(_, &v)| v)
                    .collect();
                f.sort_unstable();
                *census.entry(f).or_insert(0) += 1;
            }
        }
        census
    }

    #[test]
    fn square_counts() {
        let m = generate_unit_square(32).unwrap();
        assert_eq!(m.num_cells(), 2048);
        assert!((m.h_max() - 2f64.sqrt() / 32.0).abs() < 1e-15);
        let m = generate_unit_square(1).unwrap();
        assert_eq!((m.num_cells(), m.num_vertices()), (2, 4));
        let m = generate_unit_square(4).unwrap();
        assert_eq!(m.num_cells(), 32);
        assert!((m.total_volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_sizes_rejected() {
        assert!(generate_unit_square(0).is_err());
        assert!(generate_unit_cube(0).is_err());
        assert!(generate_cylinder(0, 8, 1).is_err());
        assert!(generate_cylinder(1, 2, 1).is_err());
        assert!(generate_cylinder(1, 8, 0).is_err());
    }

    #[test]
    fn cube_counts_and_diameter() {
        let m = generate_unit_cube(1).unwrap();
        assert_eq!(m.num_cells(), 6);
        assert!((m.total_volume() - 1.0).abs() < 1e-12);
        let m = generate_unit_cube(20).unwrap();
        assert!((m.h_max() - 3f64.sqrt() * 0.05).abs() < 1e-14);
    }

    #[test]
    fn cube_n3_census() {
        let m = generate_unit_cube(3).unwrap();
        assert_eq!(m.num_cells(), 162);
        let census = facet_counts(&m);
        let boundary = census.values().filter(|&&c| c == 1).count();
        assert!(census.values().all(|&c| c == 1 || c == 2));
        // 6 faces, 9 squares each, 2 triangles per square
        assert_eq!(boundary, 6 * 9 * 2);
        assert_eq!(m.num_boundary_facets(), boundary);
        assert!(m.tag_census().iter().all(|&(t, c)| (1..=6).contains(&t) && c == 18));
    }

    #[test]
    fn kuhn_cells_are_congruent() {
        let m = generate_unit_cube(1).unwrap();
        let q: Vec<f64> = (0..6).map(|k| m.cell_diameter(k) / m.inradius(k)).collect();
        assert!(q.iter().all(|x| (x - q[0]).abs() < 1e-12 && x.is_finite()));
        assert!((m.shape_regularity() - q[0]).abs() < 1e-12);
    }

    #[test]
    fn square_cells_are_congruent() {
        let m = generate_unit_square(4).unwrap();
        let q: Vec<f64> = (0..m.num_cells()).map(|k| m.cell_diameter(k) / m.inradius(k)).collect();
        assert!(q.iter().all(|x| (x - q[0]).abs() < 1e-12));
    }

    #[test]
    fn square_boundary_vertices() {
        let m = generate_unit_square(2).unwrap();
        assert_eq!(m.boundary_vertices(&[1]).unwrap().len(), 8);
        assert!(m.boundary_vertices(&[4]).is_err());
        assert!(m.boundary_vertices(&[]).is_err());
    }

    #[test]
    fn cube_z_faces() {
        let m = generate_unit_cube(1).unwrap();
        let v = m.boundary_vertices(&[1, 2]).unwrap();
        assert_eq!(v.len(), 8);
    }

    #[test]
    fn smallest_cylinder() {
        let m = generate_cylinder(1, 3, 1).unwrap();
        assert_eq!(m.num_cells(), 9);
        assert!((0..9).all(|k| m.cell_volume(k) > 0.0));
        let census = facet_counts(&m);
        assert!(census.values().all(|&c| c == 1 || c == 2));
    }

    #[test]
    fn cylinder_volume_increases_with_sectors() {
        let mut last = 0.0;
        for n_theta in [4, 8, 16, 32, 64, 128] {
            let v = generate_cylinder(3, n_theta, 2).unwrap().total_volume();
            let polygon = 0.5 * n_theta as f64 * 0.25 * (2.0 * PI / n_theta as f64).sin();
            assert!((v - polygon).abs() < 1e-12);
            assert!(v > last && v < PI * 0.25);
            last = v;
        }
        assert!((last - PI * 0.25).abs() < 1e-3);
    }

    #[test]
    fn cylinder_lateral_audit() {
        let m = generate_cylinder(8, 32, 10).unwrap();
        let census = facet_counts(&m);
        assert!(census.values().all(|&c| c == 1 || c == 2));
        let h = m.h_max();
        let mut lateral = 0;
        for (facet, tag) in m.boundary_facets() {
            let r: Vec<f64> = facet
                .iter()
                .map(|&v| {
                    let p = m.vertex(v);
                    ((p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2)).sqrt()
                })
                .collect();
            let on_side = facet.iter().any(|&v| {
                let z = m.vertex(v)[2];
                z > 0.0 && z < 1.0
            });
            if tag == 1 {
                lateral += 1;
                assert!(r.iter().all(|&r| (r - 0.5).abs() <= h));
            } else {
                assert!(!on_side);
            }
        }
        assert_eq!(lateral, 32 * 10 * 2);
    }
}
