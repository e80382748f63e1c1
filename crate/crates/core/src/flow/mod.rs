//! Alternating direction discrete gradient flow with tangential director
//! updates and a convex-splitting step for the degree of orientation.

mod config;
mod diagnostics;
mod gradient_flow;

pub use config::{FlowConfig, Metric};
pub use diagnostics::{cfl_check, stability_bounds, CflReport, StabilityReport};
pub use gradient_flow::{
    metric_matrix, DirectorOperators, Energies, FlowResult, GradientFlow, InnerOutcome, InnerStep, StepRecord,
};
