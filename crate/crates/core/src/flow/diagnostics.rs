//! Advisory step-size check and constraint-violation monitors.

use super::config::{FlowConfig, Metric};
use super::gradient_flow::StepRecord;
use crate::mesh::SimplicialMesh;

/// Value of the CFL-type quantity for a configuration and mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflReport {
    pub metric: Metric,
    pub h_min: f64,
    pub dim: usize,
    /// `τ_n h_min^{−d}` (L²) or `τ_n h_min^{2−d−α} |log h_min|²` (weighted H¹).
    pub value: f64,
}

pub fn cfl_check(config: &FlowConfig, mesh: &SimplicialMesh) -> CflReport {
    let h = mesh.h_min();
    let d = mesh.dim() as f64;
    let value = match config.metric {
        Metric::L2 => config.tau_n * h.powf(-d),
        Metric::H1Weighted { alpha } => config.tau_n * h.powf(2.0 - d - alpha) * h.ln().powi(2),
    };
    CflReport {
        metric: config.metric,
        h_min: h,
        dim: mesh.dim(),
        value,
    }
}

/// Constraint-violation history normalized by `τ_n E⁰`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// `err_n(j) / (τ_n E⁰)` per recorded step.
    pub scaled_errors: Vec<f64>,
    /// `max_z |n^j(z)| − 1` per recorded step.
    pub length_excess: Vec<f64>,
    /// Smallest constant `C₁` with `err_n(j) ≤ C₁ τ_n E⁰` for all `j`.
    pub fitted_constant: f64,
    /// `err_n` is non-decreasing in `j`.
    pub errors_monotone: bool,
    /// `max_z |n^j(z)| ≥ 1` for all `j`.
    pub lengths_at_least_one: bool,
}

pub fn stability_bounds(records: &[StepRecord], initial_energy: f64, tau_n: f64) -> StabilityReport {
    let scale = tau_n * initial_energy;
    let scaled_errors: Vec<f64> = records.iter().map(|r| r.err_n / scale).collect();
    let length_excess: Vec<f64> = records.iter().map(|r| r.n_max - 1.0).collect();
    let fitted_constant = scaled_errors.iter().copied().fold(0.0, f64::max);
    let errors_monotone = records.windows(2).all(|w| w[1].err_n >= w[0].err_n * (1.0 - 1e-12));
    let lengths_at_least_one = records.iter().all(|r| r.n_max >= 1.0 - 1e-12);
    StabilityReport {
        scaled_errors,
        length_excess,
        fitted_constant,
        errors_monotone,
        lengths_at_least_one,
    }
}
