//! Violation of the unit-length constraint as a function of the director
//! step size on a fixed mesh; halving `tau_n` roughly halves the error.
//!
//! ```bash
//! cargo run --release --example tau_sweep
//! ```

use ericksen::flow::stability_bounds;
use ericksen::model::preset::{preset, Experiment};
use ericksen::{FlowConfig, GradientFlow};

fn main() -> ericksen::Result<()> {
    println!(
        "{:>11} {:>5} {:>11} {:>8} {:>14}",
        "tau_n", "N", "err_n", "ratio", "err/(tau E0)"
    );
    let mut previous: Option<f64> = None;
    for k in 5..=7 {
        let mut config = preset("point2d")?;
        config.flow.tau_n = 0.1 / f64::from(1 << k);
        config.flow.tol_per_tau = Some(1e-5);
        let exp = Experiment::build(&config)?;
        let flow_config = FlowConfig::from_section(&config.flow, exp.kappa)?;
        let tau_n = flow_config.tau_n;
        let flow = GradientFlow::new(&exp.mesh, flow_config, exp.double_well, &exp.dirichlet)?;
        let result = flow.run(&exp.initial)?;
        let err = result.records.last().expect("at least one step").err_n;
        let bounds = stability_bounds(&result.records, result.initial_energy.total(), tau_n);
        let ratio = previous.map_or(String::from("-"), |p| format!("{:.3}", p / err));
        println!(
            "{tau_n:>11.4e} {:>5} {err:>11.4e} {ratio:>8} {:>14.4}",
            result.iterations(),
            bounds.fitted_constant
        );
        previous = Some(err);
    }
    Ok(())
}
