//! Point defect in the unit square: the defect placed off-center by the
//! initial director relaxes to the center of the domain.
//!
//! ```bash
//! cargo run --release --example point_defect_2d [-- OUT_DIR]
//! ```

use ericksen::cli::execute;
use ericksen::model::preset::preset;

fn main() -> ericksen::Result<()> {
    let mut config = preset("point2d")?;
    config.output.dir = Some(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "ericksen-out/point_defect_2d".into())
            .into(),
    );
    config.output.vtk_every = 10;
    let summary = execute(&config, false)?;
    let result = &summary.result;

    let mesh = ericksen::model::preset::build_mesh(&config.mesh)?;
    let s = result.state.s.values();
    let (z, _) = s.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let x = mesh.vertex(z);

    println!("{}", summary.line());
    println!("initial energy {:.6}", result.initial_energy.total());
    println!("defect (argmin s) at ({:.4}, {:.4})", x[0], x[1]);
    println!("snapshots and run log in {}", summary.out_dir.display());
    Ok(())
}
