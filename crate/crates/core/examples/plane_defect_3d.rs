//! Plane defect in the unit cube: the director is anchored to `(1,0,0)` on
//! the bottom face and to `(0,1,0)` on the top face, and `s` drops to zero
//! in a thin layer around `z = 1/2`.
//!
//! ```bash
//! cargo run --release --example plane_defect_3d [-- OUT_DIR]
//! ```

use ericksen::cli::execute;
use ericksen::model::preset::{build_mesh, preset};

fn main() -> ericksen::Result<()> {
    let mut config = preset("plane3d")?;
    config.output.dir = Some(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "ericksen-out/plane_defect_3d".into())
            .into(),
    );
    let summary = execute(&config, false)?;
    println!("{}", summary.line());

    let mesh = build_mesh(&config.mesh)?;
    let state = &summary.result.state;
    let mut line: Vec<usize> = (0..mesh.num_vertices())
        .filter(|&z| {
            let x = mesh.vertex(z);
            (x[0] - 0.5).abs() < 1e-9 && (x[1] - 0.5).abs() < 1e-9
        })
        .collect();
    line.sort_by(|a, b| mesh.vertex(*a)[2].total_cmp(&mesh.vertex(*b)[2]));
    println!("\nprofile along (0.5, 0.5, z)");
    println!("{:>6} {:>9} {:>9} {:>9} {:>9}", "z", "s", "n_x", "n_y", "n_z");
    for z in line {
        let n = state.n.at(z);
        println!(
            "{:>6.3} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            mesh.vertex(z)[2],
            state.s.values()[z],
            n[0],
            n[1],
            n[2]
        );
    }
    Ok(())
}
