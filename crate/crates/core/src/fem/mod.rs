//! Continuous piecewise affine finite elements: nodal fields, quadrature,
//! assembly of the bilinear forms of the discrete energy, and energy
//! functionals.

mod assembly;
mod energy;
mod field;
mod quadrature;

pub use assembly::{
    assemble_gradnsq_mass, assemble_gradsq_mass, assemble_mass, assemble_nsq_stiffness, assemble_s2_stiffness,
    assemble_stiffness, assemble_stiffness_weighted, FeSpace,
};
pub use energy::{concave_load, energy_elastic, energy_potential, l2_norm, unit_length_error};
pub use field::{interpolate_scalar, interpolate_vector, ScalarField, VectorField};
pub use quadrature::{reference_measure, QuadratureRule};
