//! The stability threshold of the splitting schemes.
//!
//! δ is the largest eigenvalue ν of `𝐆ᵀA⁻¹𝐆 q = ν 𝐂 q` on the pressure space,
//! and the splitting schemes are stable for `2θ ≥ 1 + δ`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fem::FieldVector;
use crate::linalg::{cg_solve, dense_generalized_symmetric_eig, vecops, SolverOptions};
use crate::system::SystemOperators;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralMethod {
    Power,
    Lanczos,
    Dense,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralResult {
    pub delta: f64,
    pub theta_min: f64,
    pub iterations: usize,
    /// Relative eigen-residual `‖B̃1 q − δ𝐂q‖_{𝐂⁻¹} / (δ‖q‖_𝐂)`.
    pub residual: f64,
    pub method: SpectralMethod,
    /// Rayleigh quotient (power) or largest Ritz value (Lanczos) per
    /// iteration.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub history: Vec<f64>,
}

/// `(1 + δ) / 2`.
pub fn theta_min(delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be >= 0, got {delta}")));
    }
    Ok(0.5 * (1.0 + delta))
}

#[derive(Debug, Clone, Copy)]
pub struct PowerOptions {
    /// Relative change of the Rayleigh quotient between iterations.
    pub tol: f64,
    /// Relative eigen-residual bound.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Tolerance of the inner elasticity and mass solves.
    pub inner_tol: f64,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { tol: 1e-8, residual_tol: 1e-4, max_iter: 2000, inner_tol: 1e-10, seed: 0 }
    }
}

fn c_dot(ops: &SystemOperators, a: &[FieldVector; 2], b: &[FieldVector; 2]) -> f64 {
    let ca = ops.apply_block_c(a);
    vecops::dot(&ca[0], &b[0]) + vecops::dot(&ca[1], &b[1])
}

/// Power iteration for `𝐂⁻¹𝐆ᵀA⁻¹𝐆` in the 𝐂 inner product. Each iteration
/// performs one elasticity solve and two mass solves, all warm-started.
///
/// Converges when the Rayleigh quotient changes by at most `tol` (relative)
/// over two consecutive iterations and the eigen-residual is at most
/// `residual_tol`. For a symmetric pencil the eigenvalue error is of the
/// order of the squared residual.
pub fn estimate_delta_power(ops: &SystemOperators, opts: &PowerOptions) -> Result<SpectralResult> {
    let np = ops.np();
    let inner = SolverOptions::with_tol(opts.inner_tol);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q: [FieldVector; 2] = [0, 1].map(|_| (0..np).map(|_| rng.gen_range(-1.0..1.0)).collect());
    ops.drain(&mut q);
    let norm = c_dot(ops, &q, &q).sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("pressure space has no free dofs".into()));
    }
    q.iter_mut().for_each(|x| x.iter_mut().for_each(|v| *v /= norm));

    let mut z = vec![0.0; ops.nu()];
    let mut history = Vec::new();
    let mut calm = 0;
    for it in 1..=opts.max_iter {
        let g = ops.apply_g(&q);
        if vecops::max_abs(&g) == 0.0 {
            return Ok(SpectralResult {
                delta: 0.0,
                theta_min: 0.5,
                iterations: it,
                residual: 0.0,
                method: SpectralMethod::Power,
                history: vec![0.0],
            });
        }
        let (zn, _) = ops.solve_a(&g, Some(&z), &inner)?;
        z = zn;
        let nu = vecops::dot(&z, &g);
        let y = ops.apply_gt(&z);
        let mut next: [FieldVector; 2] = Default::default();
        for l in 0..2 {
            let (x, rep) = cg_solve(&ops.c[l], &y[l], Some(&vecops::scaled(nu, &q[l])), &inner)?;
            if !rep.converged {
                return Err(Error::NotConverged { solver: "mass CG", iterations: rep.iterations, residual: rep.residual });
            }
            next[l] = x;
        }
        // ‖y − ν𝐂q‖²_{𝐂⁻¹} = ⟨y − ν𝐂q, 𝐂⁻¹y − νq⟩
        let cq = ops.apply_block_c(&q);
        let mut r2 = 0.0;
        for l in 0..2 {
            for i in 0..np {
                r2 += (y[l][i] - nu * cq[l][i]) * (next[l][i] - nu * q[l][i]);
            }
        }
        let residual = r2.max(0.0).sqrt() / nu;
        let change = history.last().map_or(f64::INFINITY, |&prev: &f64| (nu - prev).abs() / nu);
        history.push(nu);
        calm = if change <= opts.tol { calm + 1 } else { 0 };
        log::debug!("power iteration {it}: nu = {nu:.10}, residual = {residual:.3e}");
        if calm >= 2 && residual <= opts.residual_tol {
            return Ok(SpectralResult {
                delta: nu,
                theta_min: theta_min(nu)?,
                iterations: it,
                residual,
                method: SpectralMethod::Power,
                history,
            });
        }
        let norm = c_dot(ops, &next, &next).sqrt();
        q = next.map(|x| vecops::scaled(1.0 / norm, &x));
    }
    Err(Error::NotConverged {
        solver: "power iteration",
        iterations: opts.max_iter,
        residual: history.last().copied().unwrap_or(f64::NAN),
    })
}

/// Applies `y = 𝐆ᵀA⁻¹𝐆 q` and `x = 𝐂⁻¹y`, warm-starting the elasticity solve
/// from `z`.
fn apply_operator(
    ops: &SystemOperators,
    q: &[FieldVector; 2],
    z: &mut FieldVector,
    inner: &SolverOptions,
) -> Result<([FieldVector; 2], [FieldVector; 2])> {
    let g = ops.apply_g(q);
    if vecops::max_abs(&g) == 0.0 {
        let zero = [vec![0.0; ops.np()], vec![0.0; ops.np()]];
        return Ok((zero.clone(), zero));
    }
    let (zn, _) = ops.solve_a(&g, Some(z), inner)?;
    *z = zn;
    let y = ops.apply_gt(z);
    let mut x: [FieldVector; 2] = Default::default();
    for l in 0..2 {
        let (v, rep) = cg_solve(&ops.c[l], &y[l], None, inner)?;
        if !rep.converged {
            return Err(Error::NotConverged { solver: "mass CG", iterations: rep.iterations, residual: rep.residual });
        }
        x[l] = v;
    }
    Ok((y, x))
}

fn flat_dot(a: &[FieldVector; 2], b: &[FieldVector; 2]) -> f64 {
    vecops::dot(&a[0], &b[0]) + vecops::dot(&a[1], &b[1])
}

/// Lanczos for `𝐂⁻¹𝐆ᵀA⁻¹𝐆` in the 𝐂 inner product with full
/// reorthogonalization. Same stopping rule as [`estimate_delta_power`],
/// applied to the largest Ritz value; the eigen-residual of a Ritz pair is
/// `β_k |s_k|` with `s` its eigenvector of the tridiagonal matrix.
///
/// Each iteration costs the same solves as a power step, but the top of a
/// clustered spectrum converges in far fewer iterations.
pub fn estimate_delta_lanczos(ops: &SystemOperators, opts: &PowerOptions) -> Result<SpectralResult> {
    let np = ops.np();
    let inner = SolverOptions::with_tol(opts.inner_tol);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: [FieldVector; 2] = [0, 1].map(|_| (0..np).map(|_| rng.gen_range(-1.0..1.0)).collect());
    ops.drain(&mut v);
    let mut cv = ops.apply_block_c(&v);
    let norm = flat_dot(&cv, &v).sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("pressure space has no free dofs".into()));
    }
    let scale = |x: &mut [FieldVector; 2], s: f64| x.iter_mut().for_each(|c| c.iter_mut().for_each(|e| *e *= s));
    scale(&mut v, 1.0 / norm);
    scale(&mut cv, 1.0 / norm);

    let max_iter = opts.max_iter.min(2 * np);
    let mut basis: Vec<[FieldVector; 2]> = Vec::new();
    let mut cbasis: Vec<[FieldVector; 2]> = Vec::new();
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut z = vec![0.0; ops.nu()];
    let mut history = Vec::new();
    let mut calm = 0;
    for it in 1..=max_iter {
        let (y, mut w) = apply_operator(ops, &v, &mut z, &inner)?;
        let alpha = flat_dot(&y, &v);
        basis.push(v);
        cbasis.push(cv);
        // two passes of classical Gram-Schmidt in the 𝐂 inner product
        for _ in 0..2 {
            for (b, cb) in basis.iter().zip(&cbasis) {
                let h = flat_dot(cb, &w);
                for l in 0..2 {
                    vecops::axpy(-h, &b[l], &mut w[l]);
                }
            }
        }
        ops.drain(&mut w);
        let cw = ops.apply_block_c(&w);
        let beta = flat_dot(&cw, &w).max(0.0).sqrt();
        alphas.push(alpha);

        let k = alphas.len();
        let t = DMatrix::<f64>::from_fn(k, k, |i, j| {
            if i == j {
                alphas[i]
            } else if i.abs_diff(j) == 1 {
                betas[i.min(j)]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let top = eig.eigenvalues.imax();
        let ritz = eig.eigenvalues[top].max(0.0);
        if ritz == 0.0 {
            return Ok(SpectralResult {
                delta: 0.0,
                theta_min: 0.5,
                iterations: it,
                residual: 0.0,
                method: SpectralMethod::Lanczos,
                history: vec![0.0],
            });
        }
        let residual = beta * eig.eigenvectors[(k - 1, top)].abs() / ritz;
        let change = history.last().map_or(f64::INFINITY, |&prev: &f64| (ritz - prev).abs() / ritz);
        history.push(ritz);
        calm = if change <= opts.tol { calm + 1 } else { 0 };
        log::debug!("lanczos iteration {it}: ritz = {ritz:.10}, residual = {residual:.3e}");
        let exhausted = beta <= f64::EPSILON.sqrt() * ritz;
        if (calm >= 2 && residual <= opts.residual_tol) || exhausted {
            return Ok(SpectralResult {
                delta: ritz,
                theta_min: theta_min(ritz)?,
                iterations: it,
                residual,
                method: SpectralMethod::Lanczos,
                history,
            });
        }
        betas.push(beta);
        v = w;
        cv = cw;
        scale(&mut v, 1.0 / beta);
        scale(&mut cv, 1.0 / beta);
    }
    Err(Error::NotConverged {
        solver: "lanczos",
        iterations: max_iter,
        residual: history.last().copied().unwrap_or(f64::NAN),
    })
}

/// Largest total size handled by [`dense_delta`].
pub const DENSE_LIMIT: usize = 2000;

/// δ from the displacement-space pencil `Σ_l G_l C_l⁻¹ G_lᵀ u = ν A u`, whose
/// nonzero spectrum equals that of the pressure-space problem.
pub fn dense_delta(ops: &SystemOperators) -> Result<SpectralResult> {
    let total = ops.total_dofs();
    if total > DENSE_LIMIT {
        return Err(Error::SizeExceeded { size: total, limit: DENSE_LIMIT });
    }
    let nu = ops.nu();
    let mut s = DMatrix::<f64>::zeros(nu, nu);
    for l in 0..2 {
        let g = ops.g[l].to_dense();
        let c = ops.c[l].to_dense().lu();
        let cinv_gt = c.solve(&g.transpose()).ok_or(Error::Singular)?;
        s += &g * cinv_gt;
    }
    let s = 0.5 * (&s + s.transpose());
    let (values, vectors) = dense_generalized_symmetric_eig(&s, &ops.a.to_dense())?;
    let k = values.len() - 1;
    let delta = values[k].max(0.0);
    let residual = if delta > 0.0 {
        let v = vectors.column(k);
        let a = ops.a.to_dense();
        let r = &s * v - delta * (&a * v);
        r.norm() / (delta * (&a * v).norm())
    } else {
        0.0
    };
    Ok(SpectralResult {
        delta,
        theta_min: theta_min(delta)?,
        iterations: 1,
        residual,
        method: SpectralMethod::Dense,
        history: Vec::new(),
    })
}
