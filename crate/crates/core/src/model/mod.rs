//! The Ericksen model: double-well potential, anchoring data, states and
//! the experiment presets.

mod boundary;
mod double_well;
pub mod preset;
mod state;

pub use boundary::{
    compatible_defect_field, point_defect_field, radial_direction, saturn_ring_bc, DirichletData, DirichletNodes,
    ScalarFn, VectorFn,
};
pub use double_well::{DoubleWell, CONVEX_COEFF, HAT_S};
pub use preset::{preset, Experiment, ExperimentConfig, PRESET_NAMES};
pub use state::{check_admissibility, AdmissibilityReport, EricksenState};
