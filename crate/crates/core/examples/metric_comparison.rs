//! Final energies and iteration counts of the point-defect problem for the
//! L² metric and weighted H¹ metrics `(h_K^α ∇·, ∇·)`.
//!
//! ```bash
//! cargo run --release --example metric_comparison
//! ```

use ericksen::model::preset::{preset, Experiment};
use ericksen::{FlowConfig, GradientFlow};

fn main() -> ericksen::Result<()> {
    println!(
        "{:<10} {:>5} {:>10} {:>11} {:>11}",
        "metric", "N", "E", "min s", "err_n"
    );
    for alpha in [None, Some(2.0), Some(1.9), Some(1.8), Some(1.7)] {
        let mut config = preset("point2d")?;
        if let Some(a) = alpha {
            config.flow.metric = "h1".into();
            config.flow.alpha = a;
        }
        let exp = Experiment::build(&config)?;
        let flow_config = FlowConfig::from_section(&config.flow, exp.kappa)?;
        let flow = GradientFlow::new(&exp.mesh, flow_config, exp.double_well, &exp.dirichlet)?;
        let result = flow.run(&exp.initial)?;
        let last = result.records.last().expect("at least one step");
        let label = alpha.map_or("L2".to_string(), |a| format!("H1 a={a}"));
        println!(
            "{label:<10} {:>5} {:>10.5} {:>11.4e} {:>11.4e}",
            result.iterations(),
            last.energy,
            last.s_min,
            last.err_n
        );
    }
    Ok(())
}
