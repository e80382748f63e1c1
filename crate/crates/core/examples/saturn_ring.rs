//! Colloidal particle in a nematic: an ellipsoid is carved out of a cube
//! mesh, exported to MSH 2.2 and read back, and the flow is run with
//! homeotropic anchoring on the particle.
//!
//! The defect set depends on how well the particle is resolved. A carved
//! structured cube is coarse near the particle, and the low-`s` region
//! concentrates at the particle tips. Resolving a Saturn ring needs a mesh
//! graded around the particle, which can be imported with `mesh.path`.
//!
//! ```bash
//! cargo run --release --example saturn_ring [-- N [STEPS]]
//! ```

use std::fs;
use std::path::PathBuf;

use ericksen::cli::{execute, mesh_info};
use ericksen::flow::stability_bounds;
use ericksen::mesh::{generate_unit_cube, Tag};
use ericksen::model::preset::{preset, saturn_particles};
use ericksen::postio::write_gmsh;

const PARTICLE_TAG: Tag = 7;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(24);
    let steps: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);

    let particles = saturn_particles("saturn-ellipsoid").expect("known preset");
    let cube = generate_unit_cube(n)?;
    let mesh = cube.retain_cells(
        |k| {
            let c = cube.cell_centroid(k);
            particles.iter().all(|p| p.level(&c) > 1.0)
        },
        PARTICLE_TAG,
    )?;
    let out = PathBuf::from("ericksen-out/saturn_ring");
    fs::create_dir_all(&out)?;
    let mesh_path = out.join("carved_cube.msh");
    write_gmsh(&mesh_path, &mesh)?;
    print!("{}", mesh_info(&mesh));

    let mut config = preset("saturn-ellipsoid")?;
    config.mesh.path = Some(mesh_path);
    config.flow.max_outer = steps;
    config.output.dir = Some(out.clone());
    config.output.vtk_every = 25;
    let summary = execute(&config, false)?;
    let result = &summary.result;
    println!("{}", summary.line());
    let back = ericksen::postio::read_gmsh(config.mesh.path.as_ref().expect("mesh path"))?;
    let s = result.state.s.values();
    let (z, _) = s
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    println!("min s at {:?}", back.vertex(z));

    let e0 = result.initial_energy.total();
    let monotone = result.records.windows(2).all(|w| w[1].energy <= w[0].energy);
    let bounds = stability_bounds(&result.records, e0, config.flow.tau_n);
    println!("energy non-increasing: {monotone}");
    println!("max err_n / (tau_n E0) = {:.4}", bounds.fitted_constant);
    println!("snapshots in {}", out.display());
    Ok(())
}
