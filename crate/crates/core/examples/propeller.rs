//! Radial anchoring on the vertical faces of the unit cube with free top
//! and bottom. Pass `propeller` to use the small-`kappa` variant, which
//! develops a propeller-shaped defect set.
//!
//! ```bash
//! cargo run --release --example propeller [-- propeller]
//! ```

use ericksen::cli::execute;
use ericksen::model::preset::preset;

fn main() -> ericksen::Result<()> {
    let mut config = preset("propeller")?;
    let variant = std::env::args().nth(1).is_some_and(|a| a == "propeller");
    if variant {
        config.model.kappa = 0.1;
        config.flow.tau_s = 1e-4;
    }
    config.mesh.n = 12;
    config.output.dir = Some(
        if variant {
            "ericksen-out/propeller_small_kappa"
        } else {
            "ericksen-out/propeller"
        }
        .into(),
    );
    config.output.vtk_every = 50;
    let summary = execute(&config, false)?;
    println!("{}", summary.line());
    let low = summary.result.state.s.values().iter().filter(|&&s| s < 0.1).count();
    println!(
        "{low} vertices with s < 0.1; snapshots in {}",
        summary.out_dir.display()
    );
    Ok(())
}
