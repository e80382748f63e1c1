//! Discrete energies and nodal diagnostics.

use super::assembly::FeSpace;
use super::field::{ScalarField, VectorField};
use crate::model::DoubleWell;
use crate::Result;

/// Elastic energy `½∫ κ|n_h ⊗ ∇s_h|² + s_h²|∇n_h|²`, evaluated exactly.
pub fn energy_elastic(space: &FeSpace, s: &ScalarField, n: &VectorField, kappa: f64) -> Result<f64> {
    s.check(space.mesh())?;
    n.check(space.mesh())?;
    let sv = s.values();
    let mut total = 0.0;
    for k in 0..space.mesh().num_cells() {
        let grad_s = space.scalar_gradient_sq(k, sv);
        let grad_n = space.vector_gradient_sq(k, n);
        let mut cell = 0.0;
        if grad_s != 0.0 {
            cell += kappa * grad_s * space.cell_vector_square_integral(k, n);
        }
        if grad_n != 0.0 {
            cell += grad_n * space.cell_square_integral(k, |z| sv[z]);
        }
        total += cell;
    }
    Ok(0.5 * total)
}

/// Potential energy `∫ ψ(s_h)`, exact for the quartic double well.
pub fn energy_potential(space: &FeSpace, s: &ScalarField, dw: &DoubleWell) -> Result<f64> {
    s.check(space.mesh())?;
    if dw.c_dw() == 0.0 {
        return Ok(0.0);
    }
    let sv = s.values();
    let rule = space.rule4();
    let mut total = 0.0;
    for k in 0..space.mesh().num_cells() {
        let cell = space.mesh().cell(k);
        let vol = space.mesh().cell_volume(k);
        for q in 0..rule.len() {
            let value: f64 = rule.point(q).iter().zip(cell).map(|(l, &z)| l * sv[z]).sum();
            total += rule.scaled_weight(q, vol) * dw.value(value);
        }
    }
    Ok(total)
}

/// Load vector `∫ c_dw ψ_e'(s_h) φ_i`.
pub fn concave_load(space: &FeSpace, s: &ScalarField, dw: &DoubleWell) -> Result<Vec<f64>> {
    s.check(space.mesh())?;
    let sv = s.values();
    let rule = space.rule4();
    let mesh = space.mesh();
    Ok(space.assemble_vector(|k, buf| {
        let cell = mesh.cell(k);
        let vol = mesh.cell_volume(k);
        for q in 0..rule.len() {
            let lam = rule.point(q);
            let value: f64 = lam.iter().zip(cell).map(|(l, &z)| l * sv[z]).sum();
            let f = rule.scaled_weight(q, vol) * dw.eprime(value);
            for (b, l) in buf.iter_mut().zip(lam) {
                *b += f * l;
            }
        }
    }))
}

/// `‖I_h[|n_h|² − 1]‖_{L¹}` using the degree-2 rule on the absolute value
/// of the interpolant.
pub fn unit_length_error(space: &FeSpace, n: &VectorField) -> Result<f64> {
    n.check(space.mesh())?;
    // roundoff of a normalized vector counts as unit length
    let defect: Vec<f64> = n
        .nodal_norms_sq()
        .into_iter()
        .map(|v| {
            if (v - 1.0).abs() <= 4.0 * f64::EPSILON {
                0.0
            } else {
                v - 1.0
            }
        })
        .collect();
    Ok(l1_norm_of_interpolant(space, &defect))
}

fn l1_norm_of_interpolant(space: &FeSpace, nodal: &[f64]) -> f64 {
    let rule = space.rule2();
    let mesh = space.mesh();
    let mut total = 0.0;
    for k in 0..mesh.num_cells() {
        let cell = mesh.cell(k);
        let vol = mesh.cell_volume(k);
        for q in 0..rule.len() {
            let value: f64 = rule.point(q).iter().zip(cell).map(|(l, &z)| l * nodal[z]).sum();
            total += rule.scaled_weight(q, vol) * value.abs();
        }
    }
    total
}

/// `‖v_h‖_{L²}` for nodal values `v`.
pub fn l2_norm(space: &FeSpace, v: &[f64]) -> f64 {
    (0..space.mesh().num_cells())
        .map(|k| space.cell_square_integral(k, |z| v[z]))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble_gradnsq_mass, assemble_mass, interpolate_scalar, interpolate_vector};
    use crate::mesh::{generate_unit_cube, generate_unit_square};
    use crate::model::HAT_S;

    #[test]
    fn constants_have_no_elastic_energy() {
        let m = generate_unit_square(3).unwrap();
        let space = FeSpace::new(&m);
        let s = ScalarField::constant(m.num_vertices(), 0.4);
        let n = interpolate_vector(&m, |_| vec![0.6, 0.8]).unwrap();
        assert_eq!(energy_elastic(&space, &s, &n, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn constant_s_factorizes() {
        let m = generate_unit_cube(2).unwrap();
        let space = FeSpace::new(&m);
        let c = 0.7;
        let s = ScalarField::constant(m.num_vertices(), c);
        let n = interpolate_vector(&m, |x| vec![x[1], x[2] * x[0], 1.0]).unwrap();
        let g = assemble_gradnsq_mass(&space, &n).unwrap();
        let ones = vec![1.0; m.num_vertices()];
        let mut y = vec![0.0; ones.len()];
        g.mul_vec(&ones, &mut y);
        let grad_n_sq: f64 = y.iter().sum();
        let e = energy_elastic(&space, &s, &n, 5.0).unwrap();
        assert!((e - 0.5 * c * c * grad_n_sq).abs() < 1e-13);
    }

    #[test]
    fn potential_values() {
        let m = generate_unit_square(4).unwrap();
        let space = FeSpace::new(&m);
        let dw = DoubleWell::new(0.1 / 0.09).unwrap();
        let nv = m.num_vertices();
        let at_min = energy_potential(&space, &ScalarField::constant(nv, HAT_S), &dw).unwrap();
        assert!(at_min.abs() <= 1e-3 * dw.c_dw());
        let at_zero = energy_potential(&space, &ScalarField::constant(nv, 0.0), &dw).unwrap();
        assert!((at_zero - 0.5625 * dw.c_dw()).abs() < 1e-13);
        let off = DoubleWell::new(0.0).unwrap();
        let s = interpolate_scalar(&m, |x| x[0] - 0.3).unwrap();
        assert_eq!(energy_potential(&space, &s, &off).unwrap(), 0.0);
    }

    #[test]
    fn unit_length_error_values() {
        let m = generate_unit_square(3).unwrap();
        let space = FeSpace::new(&m);
        let unit = interpolate_vector(&m, |x| {
            let a = 3.0 * x[0] + x[1];
            vec![a.cos(), a.sin()]
        })
        .unwrap();
        assert_eq!(unit_length_error(&space, &unit).unwrap(), 0.0);
        let scaled = interpolate_vector(&m, |_| vec![1.0, 1.0]).unwrap();
        assert!((unit_length_error(&space, &scaled).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn l2_norm_matches_mass() {
        let m = generate_unit_square(3).unwrap();
        let space = FeSpace::new(&m);
        let s = interpolate_scalar(&m, |x| x[0] * x[0] - x[1]).unwrap();
        let mass = assemble_mass(&space);
        let mut y = vec![0.0; m.num_vertices()];
        mass.mul_vec(s.values(), &mut y);
        let quad: f64 = y.iter().zip(s.values()).map(|(a, b)| a * b).sum();
        assert!((l2_norm(&space, s.values()) - quad.sqrt()).abs() < 1e-14);
    }
}
