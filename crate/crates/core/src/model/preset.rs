//! Experiment configurations and the named presets.
//!
//! An [`ExperimentConfig`] is plain data (deserializable from TOML) that
//! [`Experiment::build`] turns into a mesh, a double well, Dirichlet data
//! and an initial state.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::boundary::{compatible_defect_field, point_defect_field, radial_direction, saturn_ring_bc, DirichletData};
use super::double_well::{DoubleWell, HAT_S};
use super::state::EricksenState;
use crate::fem::{ScalarField, VectorField};
use crate::mesh::{generate_cylinder, generate_unit_cube, generate_unit_square, SimplicialMesh, Tag};
use crate::{postio, Error, Result};

pub const PRESET_NAMES: [&str; 7] = [
    "point2d",
    "plane3d",
    "cylinder",
    "propeller",
    "saturn-ellipsoid",
    "saturn-two",
    "saturn-six",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mesh: MeshSection,
    pub model: ModelSection,
    pub flow: FlowSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    /// One of `square`, `cube`, `cylinder`, `gmsh`.
    pub generator: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub n_r: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub n_theta: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub n_z: usize,
    /// MSH 2.2 file for the `gmsh` generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kappa: f64,
    pub c_dw: f64,
    /// Boundary tags of `Γ_D`; empty selects the whole boundary.
    pub dirichlet_tags: Vec<Tag>,
    /// Boundary director: `radial`, `plane`, `saturn-ellipsoid`,
    /// `saturn-two` or `saturn-six`.
    pub bc: String,
    /// Boundary value of `s`, also the initial value in the interior.
    #[serde(default = "default_g")]
    pub g: f64,
    /// Initial director: `compatible-defect`, `point-defect` or `split-z`.
    pub initial: String,
    #[serde(default)]
    pub defect_center: Vec<f64>,
}

fn default_g() -> f64 {
    HAT_S
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSection {
    pub tau_n: f64,
    pub tau_s: f64,
    /// `l2` or `h1` (weighted by `h_K^alpha`).
    #[serde(default = "default_metric")]
    pub metric: String,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_tol")]
    pub tol_inner: f64,
    #[serde(default = "default_tol")]
    pub tol_outer: f64,
    /// When set, both tolerances become `tol_per_tau · tau_n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_per_tau: Option<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_max_outer")]
    pub max_outer: usize,
    #[serde(default = "default_max_inner")]
    pub max_inner: usize,
    #[serde(default = "default_cg_tol")]
    pub cg_tol: f64,
    /// Defaults to ten times the number of unknowns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cg_maxit: Option<usize>,
}

fn default_metric() -> String {
    "l2".into()
}
fn default_alpha() -> f64 {
    2.0
}
fn default_tol() -> f64 {
    1e-6
}
fn default_eps() -> f64 {
    0.1
}
fn default_max_outer() -> usize {
    1000
}
fn default_max_inner() -> usize {
    1000
}
fn default_cg_tol() -> f64 {
    1e-10
}

impl FlowSection {
    pub fn with_steps(tau_n: f64, tau_s: f64) -> Self {
        Self {
            tau_n,
            tau_s,
            metric: default_metric(),
            alpha: default_alpha(),
            tol_inner: default_tol(),
            tol_outer: default_tol(),
            tol_per_tau: None,
            eps: default_eps(),
            max_outer: default_max_outer(),
            max_inner: default_max_inner(),
            cg_tol: default_cg_tol(),
            cg_maxit: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Write a VTK snapshot every this many outer steps; 0 writes the final state only.
    #[serde(default)]
    pub vtk_every: usize,
    /// Record elapsed seconds in the run log; off keeps logs byte-reproducible.
    #[serde(default)]
    pub wall_time: bool,
}

/// Configuration of a named experiment.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let c_dw_2d = 0.1 / (0.3 * 0.3);
    let square = |n| MeshSection {
        generator: "square".into(),
        n,
        n_r: 0,
        n_theta: 0,
        n_z: 0,
        path: None,
    };
    let cube = |n| MeshSection {
        generator: "cube".into(),
        ..square(n)
    };
    let imported = MeshSection {
        generator: "gmsh".into(),
        ..square(0)
    };
    let model = |kappa: f64, c_dw: f64, tags: Vec<Tag>, bc: &str, initial: &str, center: Vec<f64>| ModelSection {
        kappa,
        c_dw,
        dirichlet_tags: tags,
        bc: bc.into(),
        g: HAT_S,
        initial: initial.into(),
        defect_center: center,
    };
    let config = match name {
        "point2d" => ExperimentConfig {
            mesh: square(32),
            model: model(2.0, c_dw_2d, vec![1], "radial", "compatible-defect", vec![0.24, 0.24]),
            flow: FlowSection::with_steps(0.1, 0.1),
            output: OutputSection::default(),
        },
        "plane3d" => ExperimentConfig {
            mesh: cube(20),
            model: model(
                0.2,
                0.0,
                vec![1, 2],
                "plane",
                "compatible-defect",
                vec![0.24, 0.24, 0.5],
            ),
            flow: FlowSection::with_steps(0.01, 0.01),
            output: OutputSection::default(),
        },
        "cylinder" => ExperimentConfig {
            mesh: MeshSection {
                generator: "cylinder".into(),
                n_r: 10,
                n_theta: 40,
                n_z: 20,
                ..square(0)
            },
            model: model(0.2, 0.0, vec![1], "radial", "compatible-defect", vec![0.24, 0.24, 0.5]),
            flow: FlowSection::with_steps(0.1, 1e-3),
            output: OutputSection::default(),
        },
        "propeller" => ExperimentConfig {
            mesh: cube(20),
            model: model(
                2.0,
                0.0,
                vec![3, 4, 5, 6],
                "radial",
                "compatible-defect",
                vec![0.24, 0.24, 0.5],
            ),
            flow: FlowSection {
                max_outer: 5000,
                ..FlowSection::with_steps(0.02, 0.2)
            },
            output: OutputSection::default(),
        },
        "saturn-ellipsoid" | "saturn-two" | "saturn-six" => {
            let tau = match name {
                "saturn-ellipsoid" => 0.01,
                "saturn-two" => 0.0025,
                _ => 0.005,
            };
            ExperimentConfig {
                mesh: imported,
                model: model(1.0, 0.2, vec![], name, "split-z", vec![]),
                flow: FlowSection::with_steps(tau, tau),
                output: OutputSection::default(),
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown preset '{other}' (available: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(config)
}

/// One-line summary of a preset and its documented variants.
pub fn preset_description(name: &str) -> Option<&'static str> {
    Some(match name {
        "point2d" => {
            "unit square n=32, kappa=2, c_dw=0.1/0.3^2, radial anchoring, defect at (0.24,0.24); \
                      weighted H1 rows: --set flow.metric=h1 --set flow.alpha=1.7"
        }
        "plane3d" => "unit cube n=20, kappa=0.2, c_dw=0, q=(1,0,0) bottom and (0,1,0) top, tau=0.01",
        "cylinder" => {
            "cylinder, kappa=0.2, c_dw=0, lateral radial anchoring, tau_n=0.1, tau_s=1e-3; \
                       escape variant: --set model.kappa=2 --set flow.tau_n=0.01 --set flow.tau_s=0.01 \
                       --set model.defect_center=[0.24,0.24,0.25]"
        }
        "propeller" => {
            "unit cube, kappa=2, c_dw=0, radial anchoring on the vertical faces, tau_n=0.02, tau_s=0.2; \
                        propeller variant: --set model.kappa=0.1 --set flow.tau_s=1e-4"
        }
        "saturn-ellipsoid" => {
            "imported mesh, ellipsoid (0.3,0.075,0.075) at the cube center, kappa=1, c_dw=0.2, tau=0.01"
        }
        "saturn-two" => "imported mesh, spheres r=0.1 at (0.3|0.7,0.5,0.5), kappa=1, c_dw=0.2, tau=0.0025",
        "saturn-six" => "imported mesh in (-0.1,1.1)^3, six spheres r=0.1, kappa=1, c_dw=0.2, tau=0.005",
        _ => return None,
    })
}

/// Axis-aligned ellipsoidal particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub center: [f64; 3],
    pub semiaxes: [f64; 3],
}

impl Particle {
    pub fn sphere(center: [f64; 3], radius: f64) -> Self {
        Self {
            center,
            semiaxes: [radius; 3],
        }
    }

    /// `Σ ((x − c)/a)²`, equal to 1 on the surface.
    pub fn level(&self, x: &[f64]) -> f64 {
        (0..3)
            .map(|i| ((x[i] - self.center[i]) / self.semiaxes[i]).powi(2))
            .sum()
    }

    /// Outward unit normal of the level set through `x`.
    pub fn normal(&self, x: &[f64]) -> Vec<f64> {
        let g: Vec<f64> = (0..3)
            .map(|i| (x[i] - self.center[i]) / (self.semiaxes[i] * self.semiaxes[i]))
            .collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return vec![0.0, 0.0, 1.0];
        }
        g.into_iter().map(|v| v / norm).collect()
    }
}

/// Colloidal particles of the Saturn-ring experiments.
pub fn saturn_particles(name: &str) -> Option<Vec<Particle>> {
    Some(match name {
        "saturn-ellipsoid" => vec![Particle {
            center: [0.5, 0.5, 0.5],
            semiaxes: [0.3, 0.075, 0.075],
        }],
        "saturn-two" => vec![
            Particle::sphere([0.3, 0.5, 0.5], 0.1),
            Particle::sphere([0.7, 0.5, 0.5], 0.1),
        ],
        "saturn-six" => [
            [0.2, 0.5, 0.5],
            [0.8, 0.5, 0.5],
            [0.5, 0.2, 0.5],
            [0.5, 0.8, 0.5],
            [0.5, 0.5, 0.2],
            [0.5, 0.5, 0.8],
        ]
        .into_iter()
        .map(|c| Particle::sphere(c, 0.1))
        .collect(),
        _ => return None,
    })
}

/// Mesh, model data and initial state of an experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub mesh: SimplicialMesh,
    pub kappa: f64,
    pub double_well: DoubleWell,
    pub dirichlet: DirichletData,
    pub initial: EricksenState,
}

impl Experiment {
    pub fn build(config: &ExperimentConfig) -> Result<Self> {
        let mesh = build_mesh(&config.mesh)?;
        Self::on_mesh(mesh, &config.model)
    }

    /// Sets up the model of `config` on an existing mesh.
    pub fn on_mesh(mesh: SimplicialMesh, model: &ModelSection) -> Result<Self> {
        if !(model.kappa > 0.0) || !model.kappa.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive, got {}",
                model.kappa
            )));
        }
        let double_well = DoubleWell::new(model.c_dw)?;
        let dirichlet = boundary_data(&mesh, model)?;
        let initial = initial_state(&mesh, model, &dirichlet)?;
        Ok(Self {
            mesh,
            kappa: model.kappa,
            double_well,
            dirichlet,
            initial,
        })
    }
}

pub fn build_mesh(section: &MeshSection) -> Result<SimplicialMesh> {
    match section.generator.as_str() {
        "square" => generate_unit_square(section.n),
        "cube" => generate_unit_cube(section.n),
        "cylinder" => generate_cylinder(section.n_r, section.n_theta, section.n_z),
        "gmsh" => match &section.path {
            Some(path) => postio::read_gmsh(path),
            None => Err(Error::Config(
                "this experiment requires imported mesh: set mesh.path to an MSH 2.2 file".into(),
            )),
        },
        other => Err(Error::Config(format!(
            "unknown mesh generator '{other}' (square, cube, cylinder, gmsh)"
        ))),
    }
}

fn bounding_box(mesh: &SimplicialMesh) -> (Vec<f64>, Vec<f64>) {
    let d = mesh.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for z in 0..mesh.num_vertices() {
        for (i, x) in mesh.vertex(z).iter().enumerate() {
            lo[i] = lo[i].min(*x);
            hi[i] = hi[i].max(*x);
        }
    }
    (lo, hi)
}

fn boundary_data(mesh: &SimplicialMesh, model: &ModelSection) -> Result<DirichletData> {
    let d = mesh.dim();
    let g = model.g;
    let tags = model.dirichlet_tags.clone();
    let data = match model.bc.as_str() {
        "radial" => DirichletData::new(tags, move |_| g, |x| radial_direction(x, &[0.5, 0.5])),
        "plane" => {
            if d != 3 {
                return Err(Error::Config("bc 'plane' needs a 3D mesh".into()));
            }
            DirichletData::new(
                tags,
                move |_| g,
                |x| {
                    if x[2] < 0.5 {
                        vec![1.0, 0.0, 0.0]
                    } else {
                        vec![0.0, 1.0, 0.0]
                    }
                },
            )
        }
        name => {
            let particles =
                saturn_particles(name).ok_or_else(|| Error::Config(format!("unknown boundary condition '{name}'")))?;
            if d != 3 {
                return Err(Error::Config(format!("bc '{name}' needs a 3D mesh")));
            }
            let (lo, hi) = bounding_box(mesh);
            let tol = 1e-8 * (hi[2] - lo[2]);
            DirichletData::new(
                tags,
                move |_| g,
                move |x| {
                    let on_box = (0..3).any(|i| (x[i] - lo[i]).abs() <= tol || (x[i] - hi[i]).abs() <= tol);
                    if on_box {
                        saturn_ring_bc((x[2] - lo[2]) / (hi[2] - lo[2])).to_vec()
                    } else {
                        let nearest = particles
                            .iter()
                            .min_by(|a, b| (a.level(x) - 1.0).abs().total_cmp(&(b.level(x) - 1.0).abs()))
                            .expect("at least one particle");
                        nearest.normal(x)
                    }
                },
            )
        }
    };
    Ok(data)
}

fn initial_state(mesh: &SimplicialMesh, model: &ModelSection, dirichlet: &DirichletData) -> Result<EricksenState> {
    let d = mesh.dim();
    let nodes = dirichlet.nodal(mesh)?;
    let mut n = match model.initial.as_str() {
        "point-defect" => point_defect_field(mesh, &model.defect_center)?,
        "compatible-defect" => compatible_defect_field(mesh, &model.defect_center, &nodes)?,
        "split-z" => {
            if d != 3 {
                return Err(Error::Config("initial 'split-z' needs a 3D mesh".into()));
            }
            let mut values = Vec::with_capacity(3 * mesh.num_vertices());
            for z in 0..mesh.num_vertices() {
                let up = if mesh.vertex(z)[2] >= 0.5 { 1.0 } else { -1.0 };
                values.extend([0.0, 0.0, up]);
            }
            VectorField::from_vec(3, values)
        }
        other => {
            return Err(Error::Config(format!(
                "unknown initial director '{other}' (compatible-defect, point-defect, split-z)"
            )))
        }
    };
    let mut s = ScalarField::constant(mesh.num_vertices(), model.g);
    for (i, &z) in nodes.vertices.iter().enumerate() {
        s.values_mut()[z] = nodes.g[i];
        n.at_mut(z).copy_from_slice(&nodes.q[i * d..(i + 1) * d]);
    }
    EricksenState::new(s, n)
}
