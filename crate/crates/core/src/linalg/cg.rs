use super::csr::{dot, CsrMatrix};
use crate::{Error, Result};

/// A symmetric linear operator usable by [`pcg`].
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// Diagonal used for Jacobi preconditioning.
    fn diagonal(&self) -> Vec<f64>;
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec(x, y)
    }

    fn diagonal(&self) -> Vec<f64> {
        CsrMatrix::diagonal(self)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CgSettings {
    /// Relative tolerance on `‖b - A x‖ / ‖b‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Record the quadratic functional `½ xᵀAx - bᵀx` after every iteration.
    pub record_functional: bool,
}

impl CgSettings {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        Self {
            tol,
            max_iter,
            record_functional: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
    /// Values of `½ xᵀAx - bᵀx`, starting with the initial guess.
    pub functional: Vec<f64>,
}

/// Jacobi-preconditioned conjugate gradients for `A x = b`, starting at zero.
pub fn pcg<A: LinearOperator + ?Sized>(a: &A, b: &[f64], settings: CgSettings) -> Result<CgOutcome> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::SizeMismatch(format!(
            "right-hand side of length {} for operator of size {n}",
            b.len()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    if inv_diag.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }

    let mut x = vec![0.0; n];
    let mut functional = Vec::new();
    if settings.record_functional {
        functional.push(0.0);
    }
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            x,
            iterations: 0,
            relative_residual: 0.0,
            functional,
        });
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut rel = 1.0;

    for it in 1..=settings.max_iter {
        a.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !pap.is_finite() {
            return Err(Error::NonFinite);
        }
        if pap <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!(
                "pᵀAp = {pap:.3e} at CG iteration {it}"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if settings.record_functional {
            // ½xᵀAx - bᵀx = -½ xᵀ(b + r)
            let f: f64 = -0.5
                * x.iter()
                    .zip(b.iter().zip(&r))
                    .map(|(x, (b, r))| x * (b + r))
                    .sum::<f64>();
            functional.push(f);
        }
        rel = dot(&r, &r).sqrt() / b_norm;
        if rel <= settings.tol {
            return Ok(CgOutcome {
                x,
                iterations: it,
                relative_residual: rel,
                functional,
            });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged {
        iterations: settings.max_iter,
        residual: rel,
    })
}

/// Solves `A x = b` for a sparse SPD matrix with Jacobi-preconditioned CG.
pub fn cg_solve(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    if a.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    pcg(a, b, CgSettings::new(tol, max_iter)).map(|o| o.x)
}
