use std::fmt;

use crate::model::preset::FlowSection;
use crate::{Error, Result};

/// Inner product used for the director update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    /// `(φ, ψ)`.
    L2,
    /// `(h^α ∇φ, ∇ψ)` with the cellwise diameter `h_K`.
    H1Weighted { alpha: f64 },
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::L2 => write!(f, "L2"),
            Metric::H1Weighted { alpha } => write!(f, "weighted H1 (alpha = {alpha})"),
        }
    }
}

/// Parameters of the alternating gradient flow.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub kappa: f64,
    pub tau_n: f64,
    pub tau_s: f64,
    pub metric: Metric,
    /// Threshold on `|ΔE₁|` between inner steps.
    pub tol_inner: f64,
    /// Threshold on `|ΔE|` between outer steps.
    pub tol_outer: f64,
    /// Admissibility bound on `‖I_h[|n|²] − 1‖_{L¹}` used in reports.
    pub eps_admissible: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub cg_tol: f64,
    /// `None` selects ten times the number of unknowns.
    pub cg_maxit: Option<usize>,
}

impl FlowConfig {
    /// Defaults: L² metric, tolerances `1e-6`, CG tolerance `1e-10`.
    pub fn new(kappa: f64, tau_n: f64, tau_s: f64) -> Self {
        Self {
            kappa,
            tau_n,
            tau_s,
            metric: Metric::L2,
            tol_inner: 1e-6,
            tol_outer: 1e-6,
            eps_admissible: 0.1,
            max_outer: 1000,
            max_inner: 1000,
            cg_tol: 1e-10,
            cg_maxit: None,
        }
    }

    pub fn from_section(section: &FlowSection, kappa: f64) -> Result<Self> {
        let metric = match section.metric.to_ascii_lowercase().as_str() {
            "l2" => Metric::L2,
            "h1" | "h1-weighted" | "h1weighted" => Metric::H1Weighted { alpha: section.alpha },
            other => {
                return Err(Error::Config(format!(
                    "flow.metric must be 'l2' or 'h1', got '{other}'"
                )))
            }
        };
        let (tol_inner, tol_outer) = match section.tol_per_tau {
            Some(c) => (c * section.tau_n, c * section.tau_n),
            None => (section.tol_inner, section.tol_outer),
        };
        let config = Self {
            kappa,
            tau_n: section.tau_n,
            tau_s: section.tau_s,
            metric,
            tol_inner,
            tol_outer,
            eps_admissible: section.eps,
            max_outer: section.max_outer,
            max_inner: section.max_inner,
            cg_tol: section.cg_tol,
            cg_maxit: section.cg_maxit,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("kappa", self.kappa),
            ("tau_n", self.tau_n),
            ("tau_s", self.tau_s),
            ("tol_inner", self.tol_inner),
            ("tol_outer", self.tol_outer),
            ("eps", self.eps_admissible),
            ("cg_tol", self.cg_tol),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {value}")));
            }
        }
        if let Metric::H1Weighted { alpha } = self.metric {
            if !(alpha > 0.0 && alpha <= 2.0) {
                return Err(Error::InvalidParameter(format!(
                    "alpha must lie in (0, 2], got {alpha}"
                )));
            }
        }
        if self.max_outer == 0 || self.max_inner == 0 || self.cg_maxit == Some(0) {
            return Err(Error::InvalidParameter("iteration limits must be at least 1".into()));
        }
        Ok(())
    }
}
