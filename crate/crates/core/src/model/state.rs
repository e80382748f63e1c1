use crate::fem::{unit_length_error, FeSpace, ScalarField, VectorField};
use crate::{Error, Result};

/// Nodal degree of orientation `s_h` and director `n_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct EricksenState {
    pub s: ScalarField,
    pub n: VectorField,
}

impl EricksenState {
    pub fn new(s: ScalarField, n: VectorField) -> Result<Self> {
        if s.len() != n.num_vertices() {
            return Err(Error::SizeMismatch(format!(
                "{} values of s for {} director values",
                s.len(),
                n.num_vertices()
            )));
        }
        Ok(Self { s, n })
    }

    /// `u_h = I_h[s_h n_h]`.
    pub fn u(&self) -> VectorField {
        let d = self.n.dim();
        let values = self
            .n
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| self.s.values()[i / d] * v)
            .collect();
        VectorField::from_vec(d, values)
    }
}

/// Diagnostics for membership in the discrete admissible class.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub unit_length_error: f64,
    pub eps: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub n_min: f64,
    /// `‖I_h[|n|²] − 1‖_{L¹} ≤ ε`.
    pub within_eps: bool,
    /// `−1/(d−1) < s(z) < 1` at every vertex.
    pub s_in_bounds: bool,
    /// `|n(z)| ≥ 1` at every vertex, up to roundoff.
    pub n_not_short: bool,
}

impl AdmissibilityReport {
    pub fn passes(&self) -> bool {
        self.within_eps && self.s_in_bounds && self.n_not_short
    }
}

pub fn check_admissibility(space: &FeSpace, state: &EricksenState, eps: f64) -> Result<AdmissibilityReport> {
    let err = unit_length_error(space, &state.n)?;
    state.s.check(space.mesh())?;
    let d = space.dim() as f64;
    let s_min = state.s.min();
    let s_max = state.s.max();
    let n_min = state.n.min_norm();
    Ok(AdmissibilityReport {
        unit_length_error: err,
        eps,
        s_min,
        s_max,
        n_min,
        within_eps: err <= eps,
        s_in_bounds: s_min > -1.0 / (d - 1.0) && s_max < 1.0,
        n_not_short: n_min >= 1.0 - 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::interpolate_vector;
    use crate::mesh::generate_unit_square;
    use crate::model::{point_defect_field, HAT_S};

    #[test]
    fn unit_state_passes() {
        let m = generate_unit_square(4).unwrap();
        let space = FeSpace::new(&m);
        let state = EricksenState::new(
            ScalarField::constant(m.num_vertices(), HAT_S),
            point_defect_field(&m, &[0.3, 0.3]).unwrap(),
        )
        .unwrap();
        let report = check_admissibility(&space, &state, 1e-8).unwrap();
        assert!(report.passes());
        assert_eq!(report.unit_length_error, 0.0);
    }

    #[test]
    fn scaled_director_fails() {
        let m = generate_unit_square(4).unwrap();
        let space = FeSpace::new(&m);
        let r2 = std::f64::consts::SQRT_2;
        let n = interpolate_vector(&m, |_| vec![r2, 0.0]).unwrap();
        let state = EricksenState::new(ScalarField::constant(m.num_vertices(), 0.5), n).unwrap();
        let report = check_admissibility(&space, &state, 0.1).unwrap();
        assert!((report.unit_length_error - 1.0).abs() < 1e-12);
        assert!(!report.within_eps);
        assert!(!report.passes());
    }

    #[test]
    fn u_is_nodal_product() {
        let s = ScalarField::from_vec(vec![2.0, -1.0]);
        let n = VectorField::from_vec(2, vec![1.0, 0.5, 0.0, 3.0]);
        let u = EricksenState::new(s, n).unwrap().u();
        assert_eq!(u.values(), &[2.0, 1.0, 0.0, -3.0]);
    }
}
