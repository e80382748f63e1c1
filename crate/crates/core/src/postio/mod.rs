//! Mesh import, visualization output and run logs.

mod gmsh;
mod runlog;
mod vtk;

pub use gmsh::{gmsh_string, parse_gmsh, read_gmsh, write_gmsh};
pub use runlog::{runlog_string, write_runlog_csv, RUNLOG_HEADER};
pub use vtk::{vtk_string, write_vtk, NamedField};
