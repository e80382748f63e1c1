//! Structured generators, mesh statistics and an MSH 2.2 round trip.
//!
//! ```bash
//! cargo run --release --example mesh_tools [-- PATH.msh]
//! ```
//!
//! With a path argument the given mesh is imported and summarized instead.

use ericksen::cli::mesh_info;
use ericksen::mesh::{generate_cylinder, generate_unit_cube, generate_unit_square};
use ericksen::postio::{read_gmsh, write_gmsh};

fn main() -> ericksen::Result<()> {
    if let Some(path) = std::env::args().nth(1) {
        print!("{}", mesh_info(&read_gmsh(path)?));
        return Ok(());
    }

    for (label, mesh) in [
        ("unit square, n = 32", generate_unit_square(32)?),
        ("unit cube, n = 20", generate_unit_cube(20)?),
        (
            "cylinder, 10 rings, 40 sectors, 20 layers",
            generate_cylinder(10, 40, 20)?,
        ),
    ] {
        println!("== {label}");
        print!("{}", mesh_info(&mesh));
        println!();
    }

    let cube = generate_unit_cube(3)?;
    let path = std::env::temp_dir().join("ericksen_cube3.msh");
    write_gmsh(&path, &cube)?;
    let back = read_gmsh(&path)?;
    println!(
        "round trip through {}: {} vertices, {} cells, volume {:.12}, tags {:?}",
        path.display(),
        back.num_vertices(),
        back.num_cells(),
        back.total_volume(),
        back.tag_census()
    );
    Ok(())
}
