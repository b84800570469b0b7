//! Conjugate gradients and MINRES with a fixed SPD preconditioner.

use super::csr::CsrMatrix;
use super::precond::{IdentityPrecond, Jacobi, Precond};
use super::vecops::{axpy, dot, norm2};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preconditioner {
    None,
    #[default]
    Jacobi,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Relative residual target.
    pub tol: f64,
    /// Defaults to `10 * n` when unset.
    pub max_iter: Option<usize>,
    pub preconditioner: Preconditioner,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: None,
            preconditioner: Preconditioner::Jacobi,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(10 * n.max(1))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Final relative residual. For MINRES with Jacobi this is measured in the
    /// norm induced by the inverse diagonal.
    pub residual: f64,
    pub converged: bool,
}

fn check_square(a: &CsrMatrix, b: &[f64], x0: Option<&[f64]>) -> Result<()> {
    if a.nrows() != a.ncols() || b.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "system {:?} with rhs of length {}",
            a.shape(),
            b.len()
        )));
    }
    if let Some(x) = x0 {
        if x.len() != b.len() {
            return Err(Error::DimensionMismatch("initial guess length".into()));
        }
    }
    Ok(())
}

fn precond_for(a: &CsrMatrix, kind: Preconditioner) -> Box<dyn Precond> {
    match kind {
        Preconditioner::None => Box::new(IdentityPrecond),
        Preconditioner::Jacobi => Box::new(Jacobi::new(a)),
    }
}

fn residual(a: &CsrMatrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; b.len()];
    a.spmv_into(x, &mut r);
    r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
    r
}

/// Preconditioned conjugate gradients for symmetric positive definite `a`.
///
/// Stops when `‖b − A x‖₂ ≤ tol ‖b‖₂`. Non-convergence within the iteration
/// cap is reported through [`SolveReport::converged`], not as an error.
pub fn cg_solve(
    a: &CsrMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    cg_solve_with(a, b, x0, opts, precond_for(a, opts.preconditioner).as_ref())
}

/// [`cg_solve`] with an explicit preconditioner; `opts.preconditioner` is
/// ignored.
pub fn cg_solve_with(
    a: &CsrMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &SolverOptions,
    pc: &dyn Precond,
) -> Result<(Vec<f64>, SolveReport)> {
    check_square(a, b, x0)?;
    let n = b.len();
    let bnorm = norm2(b);
    if !bnorm.is_finite() {
        return Err(Error::NonFinite("cg right-hand side"));
    }
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], SolveReport { iterations: 0, residual: 0.0, converged: true }));
    }
    let cap = opts.iteration_cap(n);
    let target = opts.tol * bnorm;

    let mut x = x0.map_or_else(|| vec![0.0; n], |v| v.to_vec());
    let mut r = residual(a, b, &x);
    let mut z = vec![0.0; n];
    let mut q = vec![0.0; n];
    let mut iterations = 0;

    // a couple of restarts guard against drift between recurrence and true residual
    for _restart in 0..3 {
        pc.apply(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut rnorm = norm2(&r);
        while rnorm > target && iterations < cap {
            a.spmv_into(&p, &mut q);
            let pq = dot(&p, &q);
            if !pq.is_finite() {
                return Err(Error::NonFinite("cg iteration"));
            }
            if pq <= 0.0 {
                break;
            }
            let alpha = rz / pq;
            axpy(alpha, &p, &mut x);
            axpy(-alpha, &q, &mut r);
            pc.apply(&r, &mut z);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for (pi, zi) in p.iter_mut().zip(&z) {
                *pi = zi + beta * *pi;
            }
            rnorm = norm2(&r);
            iterations += 1;
        }
        r = residual(a, b, &x);
        if norm2(&r) <= target || iterations >= cap {
            break;
        }
    }
    let res = norm2(&r) / bnorm;
    if !res.is_finite() {
        return Err(Error::NonFinite("cg solution"));
    }
    Ok((
        x,
        SolveReport {
            iterations,
            residual: res,
            converged: res <= opts.tol,
        },
    ))
}

/// Preconditioned MINRES for symmetric, possibly indefinite `a`.
///
/// The preconditioner must be positive definite; the Jacobi variant uses
/// `|diag(A)|`. Convergence is measured as `‖r‖_P / ‖b‖_P`, where `P` is the
/// preconditioner (an approximate inverse).
pub fn minres_solve(
    a: &CsrMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    minres_solve_with(a, b, x0, opts, precond_for(a, opts.preconditioner).as_ref())
}

/// [`minres_solve`] with an explicit SPD preconditioner; `opts.preconditioner`
/// is ignored.
pub fn minres_solve_with(
    a: &CsrMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &SolverOptions,
    pc: &dyn Precond,
) -> Result<(Vec<f64>, SolveReport)> {
    check_square(a, b, x0)?;
    let n = b.len();
    let mut scratch = vec![0.0; n];
    let mut pnorm = |r: &[f64]| -> f64 {
        pc.apply(r, &mut scratch);
        dot(r, &scratch).max(0.0).sqrt()
    };
    let bnorm = pnorm(b);
    if !bnorm.is_finite() {
        return Err(Error::NonFinite("minres right-hand side"));
    }
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], SolveReport { iterations: 0, residual: 0.0, converged: true }));
    }
    let cap = opts.iteration_cap(n);
    let target = opts.tol * bnorm;
    let mut x = x0.map_or_else(|| vec![0.0; n], |v| v.to_vec());
    let mut iterations = 0;

    for _restart in 0..4 {
        let r0 = residual(a, b, &x);
        let mut y = vec![0.0; n];
        pc.apply(&r0, &mut y);
        let beta1 = dot(&r0, &y).sqrt();
        if !beta1.is_finite() {
            return Err(Error::NonFinite("minres iteration"));
        }
        if beta1 <= target {
            break;
        }
        let mut r1 = r0.clone();
        let mut r2 = r0;
        let mut oldb = 0.0;
        let mut beta = beta1;
        let mut dbar = 0.0;
        let mut epsln = 0.0;
        let mut phibar = beta1;
        let mut cs = -1.0;
        let mut sn = 0.0;
        let mut w = vec![0.0; n];
        let mut w1 = vec![0.0; n];
        let mut w2 = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut local = 0usize;
        while iterations < cap {
            let s = 1.0 / beta;
            for (vi, yi) in v.iter_mut().zip(&y) {
                *vi = s * yi;
            }
            a.spmv_into(&v, &mut y);
            if local >= 1 {
                axpy(-beta / oldb, &r1, &mut y);
            }
            let alfa = dot(&v, &y);
            axpy(-alfa / beta, &r2, &mut y);
            std::mem::swap(&mut r1, &mut r2);
            r2.copy_from_slice(&y);
            pc.apply(&r2, &mut y);
            oldb = beta;
            beta = dot(&r2, &y);
            if !beta.is_finite() || !alfa.is_finite() {
                return Err(Error::NonFinite("minres iteration"));
            }
            beta = beta.max(0.0).sqrt();

            let oldeps = epsln;
            let delta = cs * dbar + sn * alfa;
            let gbar = sn * dbar - cs * alfa;
            epsln = sn * beta;
            dbar = -cs * beta;
            let gamma = gbar.hypot(beta).max(f64::EPSILON * beta1);
            cs = gbar / gamma;
            sn = beta / gamma;
            let phi = cs * phibar;
            phibar *= sn;

            let denom = 1.0 / gamma;
            std::mem::swap(&mut w1, &mut w2);
            std::mem::swap(&mut w2, &mut w);
            for i in 0..n {
                w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
            }
            axpy(phi, &w, &mut x);
            iterations += 1;
            local += 1;
            if phibar <= target || beta == 0.0 {
                break;
            }
        }
        let r = residual(a, b, &x);
        if pnorm(&r) <= target || iterations >= cap {
            break;
        }
    }
    let res = pnorm(&residual(a, b, &x)) / bnorm;
    if !res.is_finite() {
        return Err(Error::NonFinite("minres solution"));
    }
    Ok((
        x,
        SolveReport {
            iterations,
            residual: res,
            converged: res <= opts.tol,
        },
    ))
}
