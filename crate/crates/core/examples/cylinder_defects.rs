//! Radial anchoring on the lateral surface of a cylinder. A small `kappa`
//! yields a line defect along the axis; a large `kappa` lets the director
//! escape into the axial direction and keeps `s` away from zero.
//!
//! ```bash
//! cargo run --release --example cylinder_defects [-- OUT_DIR]
//! ```

use std::path::PathBuf;

use ericksen::cli::execute;
use ericksen::model::preset::{build_mesh, preset};

fn main() -> ericksen::Result<()> {
    let root = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "ericksen-out/cylinder_defects".into()),
    );

    let mut line_defect = preset("cylinder")?;
    line_defect.output.dir = Some(root.join("kappa_0.2"));

    let mut escape = preset("cylinder")?;
    escape.model.kappa = 2.0;
    escape.model.defect_center = vec![0.24, 0.24, 0.25];
    escape.flow.tau_n = 0.01;
    escape.flow.tau_s = 0.01;
    escape.output.dir = Some(root.join("kappa_2"));

    for config in [line_defect, escape] {
        let summary = execute(&config, false)?;
        let mesh = build_mesh(&config.mesh)?;
        let state = &summary.result.state;
        let axis: Vec<usize> = (0..mesh.num_vertices())
            .filter(|&z| {
                let x = mesh.vertex(z);
                (x[0] - 0.5).hypot(x[1] - 0.5) < 1e-9
            })
            .collect();
        let mean_s = axis.iter().map(|&z| state.s.values()[z]).sum::<f64>() / axis.len() as f64;
        let mean_nz = axis.iter().map(|&z| state.n.at(z)[2].abs()).sum::<f64>() / axis.len() as f64;
        println!("kappa = {}: {}", config.model.kappa, summary.line());
        println!("  on the axis: mean s = {mean_s:.4}, mean |n_z| = {mean_nz:.4}");
    }
    Ok(())
}
