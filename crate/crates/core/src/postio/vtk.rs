//! Legacy ASCII VTK output of nodal fields.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::fem::{ScalarField, VectorField};
use crate::mesh::SimplicialMesh;
use crate::{Error, Result};

/// Named nodal field for [`write_vtk`].
#[derive(Debug, Clone, Copy)]
pub enum NamedField<'a> {
    Scalar(&'a str, &'a ScalarField),
    Vector(&'a str, &'a VectorField),
}

/// Writes an unstructured grid with point data; 2D data are padded with zero
/// third components.
pub fn write_vtk(path: impl AsRef<Path>, mesh: &SimplicialMesh, fields: &[NamedField]) -> Result<()> {
    let path = path.as_ref();
    let text = vtk_string(mesh, fields)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn vtk_string(mesh: &SimplicialMesh, fields: &[NamedField]) -> Result<String> {
    for f in fields {
        match f {
            NamedField::Scalar(_, s) => s.check(mesh)?,
            NamedField::Vector(_, v) => v.check(mesh)?,
        }
    }
    let d = mesh.dim();
    let nv = mesh.num_vertices();
    let nc = mesh.num_cells();
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\nericksen\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(out, "POINTS {nv} double");
    for z in 0..nv {
        let x = mesh.vertex(z);
        let _ = writeln!(
            out,
            "{} {} {}",
            fmt(x[0]),
            fmt(x[1]),
            fmt(if d == 3 { x[2] } else { 0.0 })
        );
    }
    let _ = writeln!(out, "CELLS {nc} {}", nc * (d + 2));
    for cell in mesh.cells() {
        let _ = write!(out, "{}", d + 1);
        for v in cell {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "CELL_TYPES {nc}");
    let kind = if d == 3 { 10 } else { 5 };
    for _ in 0..nc {
        let _ = writeln!(out, "{kind}");
    }
    if !fields.is_empty() {
        let _ = writeln!(out, "POINT_DATA {nv}");
    }
    for f in fields {
        match f {
            NamedField::Scalar(name, s) => {
                let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
                for v in s.values() {
                    let _ = writeln!(out, "{}", fmt(*v));
                }
            }
            NamedField::Vector(name, v) => {
                let _ = writeln!(out, "VECTORS {name} double");
                for z in 0..nv {
                    let a = v.at(z);
                    let _ = writeln!(
                        out,
                        "{} {} {}",
                        fmt(a[0]),
                        fmt(a[1]),
                        fmt(if d == 3 { a[2] } else { 0.0 })
                    );
                }
            }
        }
    }
    Ok(out)
}

fn fmt(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.12e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle() {
        let m =
            SimplicialMesh::with_boundary_tagger(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0], vec![0, 1, 2], |_| 1).unwrap();
        let s = ScalarField::constant(3, 1.0);
        let n = VectorField::from_vec(2, vec![1.0, 0.0, 0.0, 1.0, 0.6, 0.8]);
        let text = vtk_string(&m, &[NamedField::Scalar("s", &s), NamedField::Vector("n", &n)]).unwrap();
        assert!(text.contains("POINT_DATA 3\n"));
        assert!(text.contains("LOOKUP_TABLE default\n1\n1\n1\n"));
        assert!(text.contains("CELL_TYPES 1\n5\n"));
        for line in text.lines().skip_while(|l| !l.starts_with("POINTS")).skip(1).take(3) {
            assert!(line.ends_with(" 0"));
        }
        for line in text.lines().skip_while(|l| !l.starts_with("VECTORS")).skip(1) {
            assert!(line.ends_with(" 0"));
        }
    }

    #[test]
    fn mismatched_field_rejected() {
        let m = crate::mesh::generate_unit_square(1).unwrap();
        let s = ScalarField::constant(3, 1.0);
        assert!(vtk_string(&m, &[NamedField::Scalar("s", &s)]).is_err());
    }
}
