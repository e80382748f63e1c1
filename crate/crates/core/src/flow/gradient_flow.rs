//! The alternating direction gradient flow.
//!
//! Each outer step runs an inner loop of tangential director updates
//! `n ← n + τ_n t` with `s` frozen, then one implicit step for `s` with
//! `n` frozen. The director is never projected back to the unit sphere;
//! nodal lengths grow by `τ_n² |t(z)|²` per update.

use std::time::Instant;

use super::config::{FlowConfig, Metric};
use crate::fem::{
    assemble_gradnsq_mass, assemble_gradsq_mass, assemble_mass, assemble_nsq_stiffness, assemble_s2_stiffness,
    assemble_stiffness_weighted, concave_load, energy_elastic, energy_potential, l2_norm, unit_length_error, FeSpace,
    ScalarField, VectorField,
};
use crate::linalg::{cg_solve, dot, reduced_solve, CsrMatrix, TangentBasis};
use crate::mesh::SimplicialMesh;
use crate::model::{
    check_admissibility, AdmissibilityReport, DirichletData, DirichletNodes, DoubleWell, EricksenState,
};
use crate::{Error, Result};

/// Metric matrix of the director update, applied blockwise.
pub fn metric_matrix(space: &FeSpace, metric: Metric) -> Result<CsrMatrix> {
    match metric {
        Metric::L2 => Ok(assemble_mass(space)),
        Metric::H1Weighted { alpha } => {
            let mesh = space.mesh();
            let weights: Vec<f64> = (0..mesh.num_cells())
                .map(|k| mesh.cell_diameter(k).powf(alpha))
                .collect();
            assemble_stiffness_weighted(space, &weights)
        }
    }
}

/// Energy split `E = E₁ + E₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies {
    pub elastic: f64,
    pub potential: f64,
}

impl Energies {
    pub fn total(&self) -> f64 {
        self.elastic + self.potential
    }
}

/// Operators of the director update for a frozen `s`.
#[derive(Debug, Clone)]
pub struct DirectorOperators {
    /// `κW(s) + K(s)`; `E₁[s, n] = ½ nᵀ (elastic ⊗ I) n`.
    pub elastic: CsrMatrix,
    /// `M* + τ_n (κW(s) + K(s))`.
    pub system: CsrMatrix,
}

/// Result of one tangential update.
#[derive(Debug, Clone)]
pub struct InnerStep {
    pub t: VectorField,
    pub n_next: VectorField,
    /// `‖t‖*²`.
    pub t_metric_sq: f64,
    /// `E₁[s, t]`.
    pub t_elastic: f64,
    pub e1_before: f64,
    pub e1_after: f64,
}

/// Result of an inner loop.
#[derive(Debug, Clone)]
pub struct InnerOutcome {
    pub n: VectorField,
    /// Number of tangential updates, `ℓ_i + 1`.
    pub iterations: usize,
    pub converged: bool,
    /// `τ_n Σ ‖t‖*²`.
    pub metric_dissipation: f64,
    /// `τ_n² Σ E₁[s, t]`.
    pub numerical_dissipation: f64,
    /// `E₁[s, n^{i,ℓ}]` for `ℓ = 0, …, ℓ_i + 1`.
    pub elastic_history: Vec<f64>,
}

/// Record of one outer step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub i: usize,
    pub energy: f64,
    pub elastic: f64,
    pub potential: f64,
    pub inner_iters: usize,
    pub inner_converged: bool,
    /// `‖d_t s^{i}‖_{L²}`.
    pub dts_l2: f64,
    pub err_n: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub n_max: f64,
    /// `E^{i−1} − E^{i}`.
    pub energy_drop: f64,
    /// `τ_s‖d_t s‖² + τ_n Σ‖t‖*²`.
    pub gradient_dissipation: f64,
    /// `τ_s² E₁[d_t s, n] + τ_n² Σ E₁[s, t]`.
    pub numerical_dissipation: f64,
    pub wall_s: f64,
}

/// Outcome of a complete run.
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub state: EricksenState,
    pub initial_energy: Energies,
    pub records: Vec<StepRecord>,
    pub converged: bool,
    pub admissibility: AdmissibilityReport,
}

impl FlowResult {
    /// Number of outer steps performed.
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_energy(&self) -> f64 {
        self.records.last().map_or(self.initial_energy.total(), |r| r.energy)
    }
}

/// Solver for discrete local minimizers of the Ericksen energy.
pub struct GradientFlow<'m> {
    space: FeSpace<'m>,
    config: FlowConfig,
    double_well: DoubleWell,
    nodes: DirichletNodes,
    free: Vec<usize>,
    metric: CsrMatrix,
    mass: CsrMatrix,
}

impl<'m> GradientFlow<'m> {
    pub fn new(
        mesh: &'m SimplicialMesh,
        config: FlowConfig,
        double_well: DoubleWell,
        dirichlet: &DirichletData,
    ) -> Result<Self> {
        config.validate()?;
        let space = FeSpace::new(mesh);
        let nodes = dirichlet.nodal(mesh)?;
        let free = nodes.free_vertices(mesh.num_vertices());
        let metric = metric_matrix(&space, config.metric)?;
        let mass = assemble_mass(&space);
        Ok(Self {
            space,
            config,
            double_well,
            nodes,
            free,
            metric,
            mass,
        })
    }

    pub fn space(&self) -> &FeSpace<'m> {
        &self.space
    }

    pub fn config(&self) -> &FlowConfig {
        &self.config
    }

    pub fn double_well(&self) -> &DoubleWell {
        &self.double_well
    }

    pub fn dirichlet_nodes(&self) -> &DirichletNodes {
        &self.nodes
    }

    pub fn metric(&self) -> &CsrMatrix {
        &self.metric
    }

    pub fn energies(&self, state: &EricksenState) -> Result<Energies> {
        Ok(Energies {
            elastic: energy_elastic(&self.space, &state.s, &state.n, self.config.kappa)?,
            potential: energy_potential(&self.space, &state.s, &self.double_well)?,
        })
    }

    fn cg_maxit(&self, unknowns: usize) -> usize {
        self.config.cg_maxit.unwrap_or(10 * unknowns.max(1))
    }

    /// Assembles the director operators for a frozen `s`.
    pub fn director_operators(&self, s: &ScalarField) -> Result<DirectorOperators> {
        let w = assemble_gradsq_mass(&self.space, s)?;
        let k = assemble_s2_stiffness(&self.space, s)?;
        let elastic = CsrMatrix::linear_combination(&[(self.config.kappa, &w), (1.0, &k)])?;
        let system = CsrMatrix::linear_combination(&[(1.0, &self.metric), (self.config.tau_n, &elastic)])?;
        Ok(DirectorOperators { elastic, system })
    }

    /// One tangential update `n ← n + τ_n t`.
    pub fn inner_step(&self, ops: &DirectorOperators, n: &VectorField) -> Result<InnerStep> {
        let d = n.dim();
        let mut an = vec![0.0; n.values().len()];
        ops.elastic.mul_blocks(d, n.values(), &mut an);
        let e1_before = 0.5 * dot(&an, n.values());
        let rhs: Vec<f64> = an.iter().map(|v| -v).collect();
        let basis = TangentBasis::build(n, &self.free)?;
        let maxit = self.cg_maxit(basis.reduced_len());
        let t = reduced_solve(&ops.system, &basis, &rhs, self.config.cg_tol, maxit)?;
        let n_next = n.add_scaled(self.config.tau_n, &t);
        let t_metric_sq = self.metric.quadratic_form_blocks(d, t.values());
        let t_elastic = 0.5 * ops.elastic.quadratic_form_blocks(d, t.values());
        let e1_after = 0.5 * ops.elastic.quadratic_form_blocks(d, n_next.values());
        Ok(InnerStep {
            t,
            n_next,
            t_metric_sq,
            t_elastic,
            e1_before,
            e1_after,
        })
    }

    /// Tangential updates with `s` frozen until `|ΔE₁| < tol_inner`.
    pub fn inner_loop(&self, s: &ScalarField, n: &VectorField) -> Result<InnerOutcome> {
        let ops = self.director_operators(s)?;
        let tau = self.config.tau_n;
        let mut n = n.clone();
        let mut history = Vec::new();
        let mut metric_dissipation = 0.0;
        let mut numerical_dissipation = 0.0;
        for ell in 1..=self.config.max_inner {
            let step = self.inner_step(&ops, &n)?;
            if history.is_empty() {
                history.push(step.e1_before);
            }
            history.push(step.e1_after);
            metric_dissipation += tau * step.t_metric_sq;
            numerical_dissipation += tau * tau * step.t_elastic;
            let change = (step.e1_after - step.e1_before).abs();
            n = step.n_next;
            if change < self.config.tol_inner {
                return Ok(InnerOutcome {
                    n,
                    iterations: ell,
                    converged: true,
                    metric_dissipation,
                    numerical_dissipation,
                    elastic_history: history,
                });
            }
        }
        log::warn!("inner loop stopped after {} iterations", self.config.max_inner);
        Ok(InnerOutcome {
            n,
            iterations: self.config.max_inner,
            converged: false,
            metric_dissipation,
            numerical_dissipation,
            elastic_history: history,
        })
    }

    /// Implicit step for `s` with `n` frozen and `s = g` on `Γ_D`.
    pub fn s_step(&self, n: &VectorField, s_old: &ScalarField) -> Result<ScalarField> {
        let inv_tau = 1.0 / self.config.tau_s;
        let stiff = assemble_nsq_stiffness(&self.space, n)?;
        let gradn = assemble_gradnsq_mass(&self.space, n)?;
        let system = CsrMatrix::linear_combination(&[
            (inv_tau + self.double_well.implicit_slope(), &self.mass),
            (self.config.kappa, &stiff),
            (1.0, &gradn),
        ])?;
        let nv = self.space.num_vertices();
        let mut rhs = vec![0.0; nv];
        self.mass.mul_vec(s_old.values(), &mut rhs);
        let load = concave_load(&self.space, s_old, &self.double_well)?;
        for (r, l) in rhs.iter_mut().zip(&load) {
            *r = inv_tau * *r + l;
        }
        let mut s_new = vec![0.0; nv];
        for (i, &z) in self.nodes.vertices.iter().enumerate() {
            s_new[z] = self.nodes.g[i];
        }
        if self.free.is_empty() {
            return Ok(ScalarField::from_vec(s_new));
        }
        let mut lift = vec![0.0; nv];
        system.mul_vec(&s_new, &mut lift);
        let b: Vec<f64> = self.free.iter().map(|&z| rhs[z] - lift[z]).collect();
        let reduced = system.principal_submatrix(&self.free);
        let x = cg_solve(&reduced, &b, self.config.cg_tol, self.cg_maxit(self.free.len()))?;
        for (&z, v) in self.free.iter().zip(x) {
            s_new[z] = v;
        }
        Ok(ScalarField::from_vec(s_new))
    }

    fn check_initial(&self, state: &EricksenState) -> Result<()> {
        let mesh = self.space.mesh();
        state.s.check(mesh)?;
        state.n.check(mesh)?;
        let d = mesh.dim();
        for (z, norm_sq) in state.n.nodal_norms_sq().into_iter().enumerate() {
            if !(norm_sq >= 1.0 - 1e-10) {
                return Err(Error::InvalidParameter(format!(
                    "initial director has length {} < 1 at vertex {z}",
                    norm_sq.sqrt()
                )));
            }
        }
        for (i, &z) in self.nodes.vertices.iter().enumerate() {
            let s_ok = (state.s.values()[z] - self.nodes.g[i]).abs() <= 1e-12;
            let n_ok = state
                .n
                .at(z)
                .iter()
                .zip(&self.nodes.q[i * d..(i + 1) * d])
                .all(|(a, b)| (a - b).abs() <= 1e-12);
            if !(s_ok && n_ok) {
                return Err(Error::InvalidParameter(format!(
                    "initial state violates the Dirichlet data at vertex {z}"
                )));
            }
        }
        Ok(())
    }

    fn record(
        &self,
        i: usize,
        state: &EricksenState,
        energies: Energies,
        previous: f64,
        started: Instant,
    ) -> Result<StepRecord> {
        Ok(StepRecord {
            i,
            energy: energies.total(),
            elastic: energies.elastic,
            potential: energies.potential,
            inner_iters: 0,
            inner_converged: true,
            dts_l2: 0.0,
            err_n: unit_length_error(&self.space, &state.n)?,
            s_min: state.s.min(),
            s_max: state.s.max(),
            n_max: state.n.max_norm(),
            energy_drop: previous - energies.total(),
            gradient_dissipation: 0.0,
            numerical_dissipation: 0.0,
            wall_s: started.elapsed().as_secs_f64(),
        })
    }

    /// One outer step: inner loop, then the `s` update.
    pub fn outer_step(&self, state: &EricksenState) -> Result<(EricksenState, InnerOutcome, ScalarField)> {
        let inner = self.inner_loop(&state.s, &state.n)?;
        let s_new = self.s_step(&inner.n, &state.s)?;
        let dts = ScalarField::from_vec(
            s_new
                .values()
                .iter()
                .zip(state.s.values())
                .map(|(a, b)| (a - b) / self.config.tau_s)
                .collect(),
        );
        let next = EricksenState::new(s_new, inner.n.clone())?;
        Ok((next, inner, dts))
    }

    pub fn run(&self, initial: &EricksenState) -> Result<FlowResult> {
        self.run_with(initial, |_, _| Ok(()))
    }

    /// Runs until `|ΔE| < tol_outer` or `max_outer` steps, calling
    /// `observer` after every outer step.
    pub fn run_with<F>(&self, initial: &EricksenState, mut observer: F) -> Result<FlowResult>
    where
        F: FnMut(&StepRecord, &EricksenState) -> Result<()>,
    {
        self.check_initial(initial)?;
        let started = Instant::now();
        let initial_energy = self.energies(initial)?;
        let mut state = initial.clone();
        let mut energy = initial_energy.total();
        let mut records = Vec::new();
        let mut converged = false;
        let tau_s = self.config.tau_s;
        for i in 1..=self.config.max_outer {
            let (next, inner, dts) = self.outer_step(&state)?;
            let energies = self.energies(&next)?;
            let dts_l2 = l2_norm(&self.space, dts.values());
            let dts_elastic = energy_elastic(&self.space, &dts, &next.n, self.config.kappa)?;
            let mut rec = self.record(i, &next, energies, energy, started)?;
            rec.inner_iters = inner.iterations;
            rec.inner_converged = inner.converged;
            rec.dts_l2 = dts_l2;
            rec.gradient_dissipation = tau_s * dts_l2 * dts_l2 + inner.metric_dissipation;
            rec.numerical_dissipation = tau_s * tau_s * dts_elastic + inner.numerical_dissipation;
            if !rec.energy.is_finite() {
                return Err(Error::NonFinite);
            }
            log::debug!(
                "step {i}: E = {:.6}, inner = {}, min s = {:.4}",
                rec.energy,
                rec.inner_iters,
                rec.s_min
            );
            state = next;
            energy = rec.energy;
            let done = rec.energy_drop.abs() < self.config.tol_outer;
            observer(&rec, &state)?;
            records.push(rec);
            if done {
                converged = true;
                break;
            }
        }
        if !converged {
            log::warn!("outer loop stopped after {} iterations", self.config.max_outer);
        }
        let admissibility = check_admissibility(&self.space, &state, self.config.eps_admissible)?;
        Ok(FlowResult {
            state,
            initial_energy,
            records,
            converged,
            admissibility,
        })
    }
}
