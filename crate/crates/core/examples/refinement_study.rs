//! Mesh refinement of the point-defect problem with `tau_n` scaled like `h²`.
//!
//! ```bash
//! cargo run --release --example refinement_study [-- MAX_N]
//! ```
//!
//! `MAX_N` defaults to 64; 128 takes considerably longer.

use ericksen::model::preset::{preset, Experiment};
use ericksen::{FlowConfig, GradientFlow};

fn main() -> ericksen::Result<()> {
    let max_n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(64);
    println!(
        "{:>5} {:>11} {:>11} {:>5} {:>10} {:>11} {:>11}",
        "n", "h", "tau_n", "N", "E", "min s", "err_n"
    );
    let mut n = 32;
    let mut tau_n = 0.1;
    while n <= max_n {
        let mut config = preset("point2d")?;
        config.mesh.n = n;
        config.flow.tau_n = tau_n;
        let exp = Experiment::build(&config)?;
        let flow_config = FlowConfig::from_section(&config.flow, exp.kappa)?;
        let flow = GradientFlow::new(&exp.mesh, flow_config, exp.double_well, &exp.dirichlet)?;
        let result = flow.run(&exp.initial)?;
        let last = result.records.last().expect("at least one step");
        println!(
            "{n:>5} {:>11.4e} {tau_n:>11.4e} {:>5} {:>10.5} {:>11.4e} {:>11.4e}",
            exp.mesh.h_max(),
            result.iterations(),
            last.energy,
            last.s_min,
            last.err_n
        );
        n *= 2;
        tau_n /= 4.0;
    }
    Ok(())
}
