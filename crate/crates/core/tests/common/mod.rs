//! Independent oracles and invariant checks shared by the integration tests.
//!
//! Nothing here reuses the crate's quadrature, cell geometry or tangent
//! reduction: integrals use a collapsed Gauss–Legendre rule, gradients come
//! from a dense inverse of the cell Jacobian and constrained solves go
//! through a dense KKT system.

#![allow(dead_code)]

use ericksen::fem::{
    assemble_gradnsq_mass, assemble_gradsq_mass, assemble_mass, assemble_nsq_stiffness, assemble_s2_stiffness,
    assemble_stiffness_weighted, concave_load, energy_elastic, energy_potential, FeSpace,
};
use ericksen::flow::{FlowConfig, GradientFlow, Metric};
use ericksen::mesh::{generate_unit_cube, generate_unit_square, Tag};
use ericksen::model::radial_direction;
use ericksen::{CsrMatrix, DirichletData, DoubleWell, EricksenState, ScalarField, SimplicialMesh, VectorField};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;

// ---------------------------------------------------------------- quadrature

/// Gauss–Legendre nodes and weights on `[0, 1]` (Golub–Welsch).
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut jacobi = DMatrix::zeros(m, m);
    for k in 1..m {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            (0.5 * (x + 1.0), 0.5 * w)
        })
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Collapsed tensor rule on the reference simplex as `(barycentric, weight)`
/// with weights summing to `1/d!`. With `m` points per direction it is
/// exact for total degree `2m − 1 − (d − 1)`; `m = 6` gives degree ≥ 9.
pub fn collapsed_rule(dim: usize, m: usize) -> Vec<(Vec<f64>, f64)> {
    let gl = gauss_legendre(m);
    let mut out = Vec::new();
    match dim {
        2 => {
            for &(u, wu) in &gl {
                for &(v, wv) in &gl {
                    let (x, y) = (u, v * (1.0 - u));
                    out.push((vec![1.0 - x - y, x, y], wu * wv * (1.0 - u)));
                }
            }
        }
        3 => {
            for &(u, wu) in &gl {
                for &(v, wv) in &gl {
                    for &(w, ww) in &gl {
                        let x = u;
                        let y = v * (1.0 - u);
                        let z = w * (1.0 - u) * (1.0 - v);
                        out.push((
                            vec![1.0 - x - y - z, x, y, z],
                            wu * wv * ww * (1.0 - u).powi(2) * (1.0 - v),
                        ));
                    }
                }
            }
        }
        _ => panic!("dimension {dim}"),
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).product::<usize>() as f64
}

// ------------------------------------------------------------ cell geometry

pub struct CellGeometry {
    pub volume: f64,
    /// Gradient of each barycentric coordinate.
    pub grads: Vec<Vec<f64>>,
}

pub fn cell_geometry(mesh: &SimplicialMesh, k: usize) -> CellGeometry {
    let d = mesh.dim();
    let cell = mesh.cell(k);
    let x0 = mesh.vertex(cell[0]);
    let jac = DMatrix::from_fn(d, d, |r, c| mesh.vertex(cell[c + 1])[r] - x0[r]);
    let det = jac.determinant();
    let inv = jac.try_inverse().expect("degenerate cell");
    let mut grads = vec![vec![0.0; d]; d + 1];
    for i in 0..d {
        for r in 0..d {
            grads[i + 1][r] = inv[(i, r)];
            grads[0][r] -= inv[(i, r)];
        }
    }
    CellGeometry {
        volume: det.abs() / factorial(d),
        grads,
    }
}

/// Quadrature point data handed to oracle integrands.
pub struct Point<'a> {
    pub cell: &'a [usize],
    pub lambda: &'a [f64],
    pub grads: &'a [Vec<f64>],
}

impl Point<'_> {
    pub fn scalar(&self, values: &[f64]) -> f64 {
        self.cell.iter().zip(self.lambda).map(|(&z, l)| l * values[z]).sum()
    }

    pub fn scalar_grad(&self, values: &[f64]) -> Vec<f64> {
        let d = self.grads[0].len();
        let mut g = vec![0.0; d];
        for (i, &z) in self.cell.iter().enumerate() {
            for (gr, dr) in g.iter_mut().zip(&self.grads[i]) {
                *gr += values[z] * dr;
            }
        }
        g
    }

    pub fn vector(&self, n: &VectorField) -> Vec<f64> {
        let d = n.dim();
        let mut v = vec![0.0; d];
        for (&z, l) in self.cell.iter().zip(self.lambda) {
            for (vc, nc) in v.iter_mut().zip(n.at(z)) {
                *vc += l * nc;
            }
        }
        v
    }

    /// `|∇n|²` (Frobenius).
    pub fn vector_grad_sq(&self, n: &VectorField) -> f64 {
        (0..n.dim())
            .map(|c| {
                let comp: Vec<f64> = (0..n.num_vertices()).map(|z| n.at(z)[c]).collect();
                self.scalar_grad(&comp).iter().map(|g| g * g).sum::<f64>()
            })
            .sum()
    }
}

fn for_each_point<F: FnMut(usize, &Point, f64)>(mesh: &SimplicialMesh, mut f: F) {
    let rule = collapsed_rule(mesh.dim(), 6);
    let scale = factorial(mesh.dim());
    for k in 0..mesh.num_cells() {
        let geo = cell_geometry(mesh, k);
        for (lambda, w) in &rule {
            let p = Point {
                cell: mesh.cell(k),
                lambda,
                grads: &geo.grads,
            };
            f(k, &p, w * scale * geo.volume);
        }
    }
}

/// Dense matrix `∫ a φ_i φ_j + b ∇φ_i · ∇φ_j` with `(a, b) = coeffs(cell, point)`.
pub fn oracle_matrix<F: Fn(usize, &Point) -> (f64, f64)>(mesh: &SimplicialMesh, coeffs: F) -> DMatrix<f64> {
    let nv = mesh.num_vertices();
    let mut a = DMatrix::zeros(nv, nv);
    for_each_point(mesh, |k, p, w| {
        let (cm, cs) = coeffs(k, p);
        for (i, &zi) in p.cell.iter().enumerate() {
            for (j, &zj) in p.cell.iter().enumerate() {
                let dot: f64 = p.grads[i].iter().zip(&p.grads[j]).map(|(x, y)| x * y).sum();
                a[(zi, zj)] += w * (cm * p.lambda[i] * p.lambda[j] + cs * dot);
            }
        }
    });
    a
}

/// `∫ f φ_i`.
pub fn oracle_load<F: Fn(&Point) -> f64>(mesh: &SimplicialMesh, f: F) -> Vec<f64> {
    let mut b = vec![0.0; mesh.num_vertices()];
    for_each_point(mesh, |_, p, w| {
        let v = f(p);
        for (i, &z) in p.cell.iter().enumerate() {
            b[z] += w * v * p.lambda[i];
        }
    });
    b
}

pub fn oracle_integral<F: Fn(&Point) -> f64>(mesh: &SimplicialMesh, f: F) -> f64 {
    let mut total = 0.0;
    for_each_point(mesh, |_, p, w| total += w * f(p));
    total
}

pub fn dense(a: &CsrMatrix) -> DMatrix<f64> {
    let rows = a.to_dense();
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

// ---------------------------------------------------------------- KKT oracle

/// Solves `(A ⊗ I_d) t = rhs` subject to `n(z)·t(z) = 0` at free vertices and
/// `t(z) = 0` at `fixed` vertices through the dense saddle-point system.
pub fn kkt_tangent_solve(a: &CsrMatrix, n: &VectorField, fixed: &[usize], rhs: &[f64]) -> Vec<f64> {
    let d = n.dim();
    let nv = n.num_vertices();
    let ad = dense(a);
    let mut is_fixed = vec![false; nv];
    fixed.iter().for_each(|&z| is_fixed[z] = true);
    let n_cons = (0..nv).map(|z| if is_fixed[z] { d } else { 1 }).sum::<usize>();
    let size = d * nv + n_cons;
    let mut k = DMatrix::zeros(size, size);
    for i in 0..nv {
        for j in 0..nv {
            for c in 0..d {
                k[(i * d + c, j * d + c)] = ad[(i, j)];
            }
        }
    }
    let mut row = d * nv;
    for z in 0..nv {
        if is_fixed[z] {
            for c in 0..d {
                k[(row, z * d + c)] = 1.0;
                k[(z * d + c, row)] = 1.0;
                row += 1;
            }
        } else {
            for c in 0..d {
                k[(row, z * d + c)] = n.at(z)[c];
                k[(z * d + c, row)] = n.at(z)[c];
            }
            row += 1;
        }
    }
    let mut b = DVector::zeros(size);
    for (i, v) in rhs.iter().enumerate() {
        b[i] = *v;
    }
    let x = k.lu().solve(&b).expect("KKT system is singular");
    x.as_slice()[..d * nv].to_vec()
}

// ------------------------------------------------------------ random inputs

/// Side tags: 1 = {y=0}, 2 = {y=1}, 3 = {x=0}, 4 = {x=1}, 5 = {z=0}, 6 = {z=1}.
fn side_tag(points: &[&[f64]]) -> Tag {
    let d = points[0].len();
    let on = |axis: usize, value: f64| points.iter().all(|p| (p[axis] - value).abs() < 1e-12);
    if d == 3 {
        if on(2, 0.0) {
            return 5;
        }
        if on(2, 1.0) {
            return 6;
        }
    }
    if on(1, 0.0) {
        1
    } else if on(1, 1.0) {
        2
    } else if on(0, 0.0) {
        3
    } else {
        4
    }
}

/// Unit square or cube with `n` subdivisions per side and interior vertices
/// displaced by up to `amp · h` per coordinate.
pub fn jiggled_mesh(dim: usize, n: usize, amp: f64, rng: &mut StdRng) -> SimplicialMesh {
    let base = if dim == 2 {
        generate_unit_square(n).unwrap()
    } else {
        generate_unit_cube(n).unwrap()
    };
    let h = 1.0 / n as f64;
    let mut coords = base.coords().to_vec();
    for z in 0..base.num_vertices() {
        let x = base.vertex(z);
        if x.iter().all(|&c| c > 1e-12 && c < 1.0 - 1e-12) {
            for c in 0..dim {
                coords[z * dim + c] += amp * h * rng.random_range(-1.0..1.0);
            }
        }
    }
    let cells: Vec<usize> = base.cells().flatten().copied().collect();
    SimplicialMesh::with_boundary_tagger(dim, coords, cells, side_tag).unwrap()
}

pub fn random_unit_field(dim: usize, nv: usize, rng: &mut StdRng) -> VectorField {
    let mut values = Vec::with_capacity(dim * nv);
    for _ in 0..nv {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 0.1 && norm <= 1.0 {
                values.extend(v.iter().map(|a| a / norm));
                break;
            }
        }
    }
    VectorField::from_vec(dim, values)
}

/// A random small problem: mesh, anchoring on a random nonempty set of
/// sides and an admissible initial state.
pub struct Problem {
    pub mesh: SimplicialMesh,
    pub dirichlet: DirichletData,
    pub initial: EricksenState,
    pub kappa: f64,
    pub double_well: DoubleWell,
}

pub fn random_problem(seed: u64, dim: usize, n: usize) -> Problem {
    let mut rng = StdRng::seed_from_u64(seed);
    let mesh = jiggled_mesh(dim, n, if dim == 2 { 0.2 } else { 0.1 }, &mut rng);
    let sides = if dim == 2 { 4 } else { 6 };
    let mut tags: Vec<Tag> = (1..=sides).filter(|_| rng.random_bool(0.5)).collect();
    if tags.is_empty() {
        tags.push(1);
    }
    let g = rng.random_range(0.3..0.75);
    let center = vec![0.5; dim];
    let dirichlet = DirichletData::new(tags, move |_| g, move |x| radial_direction(x, &center));
    let nv = mesh.num_vertices();
    let mut s = ScalarField::from_vec((0..nv).map(|_| rng.random_range(0.1..0.8)).collect());
    let mut nf = random_unit_field(dim, nv, &mut rng);
    let nodes = dirichlet.nodal(&mesh).unwrap();
    for (i, &z) in nodes.vertices.iter().enumerate() {
        s.values_mut()[z] = nodes.g[i];
        nf.at_mut(z).copy_from_slice(&nodes.q[i * dim..(i + 1) * dim]);
    }
    let kappa = rng.random_range(0.2..2.0);
    let c_dw = if rng.random_bool(0.5) {
        0.0
    } else {
        rng.random_range(0.1..1.5)
    };
    Problem {
        mesh,
        dirichlet,
        initial: EricksenState::new(s, nf).unwrap(),
        kappa,
        double_well: DoubleWell::new(c_dw).unwrap(),
    }
}

fn metric_for(choice: u8) -> Metric {
    match choice % 3 {
        0 => Metric::L2,
        1 => Metric::H1Weighted { alpha: 2.0 },
        _ => Metric::H1Weighted { alpha: 1.7 },
    }
}

fn rel_close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.abs().max(f64::MIN_POSITIVE)
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> (f64, f64) {
    let diff = (a - b).abs().max();
    (diff, a.abs().max().max(b.abs().max()))
}

// ---------------------------------------------------------- invariant checks

/// Every assembled form, load and energy against the collapsed-rule oracle.
pub fn check_assembly(seed: u64, dim: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = if dim == 2 { rng.random_range(2..=5) } else { 2 };
    let mesh = jiggled_mesh(dim, n, if dim == 2 { 0.2 } else { 0.1 }, &mut rng);
    let space = FeSpace::new(&mesh);
    let nv = mesh.num_vertices();
    let s: Vec<f64> = (0..nv).map(|_| rng.random_range(-0.5..1.0)).collect();
    let nvec = VectorField::from_vec(dim, (0..dim * nv).map(|_| rng.random_range(-1.5..1.5)).collect());
    let weights: Vec<f64> = (0..mesh.num_cells()).map(|_| rng.random_range(0.01..2.0)).collect();
    let sf = ScalarField::from_vec(s.clone());
    let tol = 1e-12;

    let cases: Vec<(&str, CsrMatrix, DMatrix<f64>)> = vec![
        ("mass", assemble_mass(&space), oracle_matrix(&mesh, |_, _| (1.0, 0.0))),
        (
            "weighted stiffness",
            assemble_stiffness_weighted(&space, &weights).map_err(|e| e.to_string())?,
            oracle_matrix(&mesh, |k, _| (0.0, weights[k])),
        ),
        (
            "s² stiffness",
            assemble_s2_stiffness(&space, &sf).map_err(|e| e.to_string())?,
            oracle_matrix(&mesh, |_, p| (0.0, p.scalar(&s).powi(2))),
        ),
        (
            "|∇s|² mass",
            assemble_gradsq_mass(&space, &sf).map_err(|e| e.to_string())?,
            oracle_matrix(&mesh, |_, p| (p.scalar_grad(&s).iter().map(|g| g * g).sum(), 0.0)),
        ),
        (
            "|n|² stiffness",
            assemble_nsq_stiffness(&space, &nvec).map_err(|e| e.to_string())?,
            oracle_matrix(&mesh, |_, p| (0.0, p.vector(&nvec).iter().map(|v| v * v).sum())),
        ),
        (
            "|∇n|² mass",
            assemble_gradnsq_mass(&space, &nvec).map_err(|e| e.to_string())?,
            oracle_matrix(&mesh, |_, p| (p.vector_grad_sq(&nvec), 0.0)),
        ),
    ];
    for (name, got, want) in cases {
        let (diff, scale) = max_abs_diff(&dense(&got), &want);
        if diff > tol * scale {
            return Err(format!("{name}: max deviation {diff:.3e} (scale {scale:.3e})"));
        }
    }

    let dw = DoubleWell::new(rng.random_range(0.1..2.0)).unwrap();
    let load = concave_load(&space, &sf, &dw).map_err(|e| e.to_string())?;
    let want = oracle_load(&mesh, |p| dw.eprime(p.scalar(&s)));
    let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in load.iter().zip(&want) {
        if (a - b).abs() > tol * scale {
            return Err(format!("concave load: {a} vs {b}"));
        }
    }

    let kappa = rng.random_range(0.1..3.0);
    let e1 = energy_elastic(&space, &sf, &nvec, kappa).map_err(|e| e.to_string())?;
    let e1_oracle = oracle_integral(&mesh, |p| {
        let gs: f64 = p.scalar_grad(&s).iter().map(|g| g * g).sum();
        let nn: f64 = p.vector(&nvec).iter().map(|v| v * v).sum();
        0.5 * (kappa * nn * gs + p.scalar(&s).powi(2) * p.vector_grad_sq(&nvec))
    });
    if !rel_close(e1, e1_oracle, e1_oracle, tol) {
        return Err(format!("elastic energy {e1} vs {e1_oracle}"));
    }
    let e2 = energy_potential(&space, &sf, &dw).map_err(|e| e.to_string())?;
    let e2_oracle = oracle_integral(&mesh, |p| dw.value(p.scalar(&s)));
    if !rel_close(e2, e2_oracle, e2_oracle, tol) {
        return Err(format!("potential energy {e2} vs {e2_oracle}"));
    }
    Ok(())
}

fn flow_for(problem: &Problem, tau: f64, metric: Metric) -> Result<GradientFlow<'_>, String> {
    let mut config = FlowConfig::new(problem.kappa, tau, tau);
    config.metric = metric;
    config.cg_tol = 1e-14;
    GradientFlow::new(&problem.mesh, config, problem.double_well, &problem.dirichlet).map_err(|e| e.to_string())
}

/// One tangential update against the KKT oracle, the exact inner energy
/// identity and the nodal norm recursion.
pub fn check_inner_step(seed: u64, dim: usize, metric_choice: u8) -> Check {
    let n = if dim == 2 { 2 + (seed % 3) as usize } else { 2 };
    let problem = random_problem(seed, dim, n);
    let tau = 10f64.powf(-1.0 - (seed % 3) as f64);
    let flow = flow_for(&problem, tau, metric_for(metric_choice))?;
    let state = &problem.initial;
    let ops = flow.director_operators(&state.s).map_err(|e| e.to_string())?;
    let step = flow.inner_step(&ops, &state.n).map_err(|e| e.to_string())?;

    let mut an = vec![0.0; state.n.values().len()];
    ops.elastic.mul_blocks(dim, state.n.values(), &mut an);
    let rhs: Vec<f64> = an.iter().map(|v| -v).collect();
    let t_kkt = kkt_tangent_solve(&ops.system, &state.n, &flow.dirichlet_nodes().vertices, &rhs);
    let scale = t_kkt.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let diff = step
        .t
        .values()
        .iter()
        .zip(&t_kkt)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if diff > 1e-9 * scale {
        return Err(format!(
            "tangent update deviates from the KKT oracle by {diff:.3e} (scale {scale:.3e})"
        ));
    }

    let space = flow.space();
    let e1_before = energy_elastic(space, &state.s, &state.n, problem.kappa).map_err(|e| e.to_string())?;
    let e1_after = energy_elastic(space, &state.s, &step.n_next, problem.kappa).map_err(|e| e.to_string())?;
    let t_metric = flow.metric().quadratic_form_blocks(dim, step.t.values());
    let t_elastic = energy_elastic(space, &state.s, &step.t, problem.kappa).map_err(|e| e.to_string())?;
    let drop = e1_before - e1_after;
    let predicted = tau * t_metric + tau * tau * t_elastic;
    if !rel_close(drop, predicted, e1_before, 1e-9) {
        return Err(format!("inner identity: drop {drop:.15e} vs {predicted:.15e}"));
    }

    for z in 0..problem.mesh.num_vertices() {
        let before: f64 = state.n.at(z).iter().map(|v| v * v).sum();
        let after: f64 = step.n_next.at(z).iter().map(|v| v * v).sum();
        let t2: f64 = step.t.at(z).iter().map(|v| v * v).sum();
        if !rel_close(after - before, tau * tau * t2, after, 1e-12) {
            return Err(format!(
                "norm recursion at vertex {z}: {} vs {}",
                after - before,
                tau * tau * t2
            ));
        }
        if after < 1.0 - 1e-12 {
            return Err(format!("|n| < 1 at vertex {z}"));
        }
    }
    Ok(())
}

/// A few outer steps on a mesh with at most 200 vertices: energy
/// monotonicity, the dissipation lower bound and nodal lengths `≥ 1`,
/// non-decreasing in time.
pub fn check_outer_steps(seed: u64, dim: usize, metric_choice: u8) -> Check {
    let n = if dim == 2 {
        3 + (seed % 6) as usize
    } else {
        2 + (seed % 2) as usize
    };
    let problem = random_problem(seed, dim, n);
    if problem.mesh.num_vertices() > 200 {
        return Err("mesh too large".into());
    }
    let tau = [0.1, 0.01, 0.001][(seed % 3) as usize];
    let mut flow_config = FlowConfig::new(problem.kappa, tau, tau);
    flow_config.metric = metric_for(metric_choice);
    flow_config.cg_tol = 1e-13;
    flow_config.tol_inner = 1e-12;
    flow_config.tol_outer = 1e-300;
    flow_config.max_outer = 4;
    flow_config.max_inner = 50;
    let flow = GradientFlow::new(&problem.mesh, flow_config, problem.double_well, &problem.dirichlet)
        .map_err(|e| e.to_string())?;
    let e0 = flow.energies(&problem.initial).map_err(|e| e.to_string())?.total();
    let mut previous_norms = problem.initial.n.nodal_norms_sq();
    let mut failure: Option<String> = None;
    let result = flow
        .run_with(&problem.initial, |rec, state| {
            let norms = state.n.nodal_norms_sq();
            for (z, (a, b)) in norms.iter().zip(&previous_norms).enumerate() {
                if *a < 1.0 - 1e-12 || *a < b * (1.0 - 1e-14) {
                    failure.get_or_insert(format!("step {}: nodal length decreased at vertex {z}", rec.i));
                }
            }
            previous_norms = norms;
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    if let Some(f) = failure {
        return Err(f);
    }
    let mut energy = e0;
    for rec in &result.records {
        if rec.energy > energy + 1e-10 * e0 {
            return Err(format!("step {}: energy rose from {energy} to {}", rec.i, rec.energy));
        }
        if rec.energy_drop < rec.gradient_dissipation - 1e-9 * e0 {
            return Err(format!(
                "step {}: drop {:.6e} below dissipation {:.6e}",
                rec.i, rec.energy_drop, rec.gradient_dissipation
            ));
        }
        energy = rec.energy;
    }
    Ok(())
}

/// Values of the double well at its distinguished points.
pub fn check_double_well(c_dw: f64) -> Check {
    let dw = DoubleWell::new(c_dw).map_err(|e| e.to_string())?;
    if dw.derivative(0.0).abs() > 1e-15 {
        return Err(format!("ψ'(0) = {}", dw.derivative(0.0)));
    }
    if dw.value(ericksen::model::HAT_S).abs() > 1e-3 * c_dw {
        return Err(format!("ψ(ŝ) = {}", dw.value(ericksen::model::HAT_S)));
    }
    if (dw.value(0.0) - 0.5625 * c_dw).abs() > 1e-14 * c_dw.max(1.0) {
        return Err(format!("ψ(0) = {}", dw.value(0.0)));
    }
    Ok(())
}
