//! Dense oracles for small systems.

use crate::{Error, Result};

pub type DenseMatrix = nalgebra::DMatrix<f64>;

/// LU with partial pivoting.
pub fn dense_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "dense_solve: {}x{} matrix with rhs of length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let lu = a.clone().lu();
    let u = lu.u();
    let dmax = (0..n).map(|i| u[(i, i)].abs()).fold(0.0, f64::max);
    let dmin = (0..n).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if dmax == 0.0 || dmin <= dmax * f64::EPSILON * n as f64 {
        return Err(Error::Singular);
    }
    let rhs = nalgebra::DVector::from_column_slice(b);
    let x = lu.solve(&rhs).ok_or(Error::Singular)?;
    Ok(x.iter().copied().collect())
}

/// Eigenvalues (ascending) and `T`-orthonormal eigenvectors (columns) of the
/// pencil `S v = ν T v` with `S` symmetric and `T` symmetric positive definite.
pub fn dense_generalized_symmetric_eig(
    s: &DenseMatrix,
    t: &DenseMatrix,
) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = t.nrows();
    if t.ncols() != n || s.nrows() != n || s.ncols() != n {
        return Err(Error::DimensionMismatch("pencil matrices must be square and equal-sized".into()));
    }
    let tsym = (t + t.transpose()) * 0.5;
    let chol = tsym.cholesky().ok_or(Error::NotSpd)?;
    let l = chol.l();
    // W = L⁻¹ S L⁻ᵀ
    let linv_s = l
        .solve_lower_triangular(s)
        .ok_or(Error::NotSpd)?;
    let w = l
        .solve_lower_triangular(&linv_s.transpose())
        .ok_or(Error::NotSpd)?;
    let w = (&w + w.transpose()) * 0.5;
    let eig = w.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let lt = l.transpose();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let y = eig.eigenvectors.column(i).into_owned();
        let v = lt.solve_upper_triangular(&y).ok_or(Error::NotSpd)?;
        vectors.set_column(k, &v);
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solve() {
        let b = vec![1.0, 2.0, 3.0];
        assert_eq!(dense_solve(&DenseMatrix::identity(3, 3), &b).unwrap(), b);
    }

    #[test]
    fn permutation_solve() {
        // P e_i = e_{σ(i)} with σ = (1 2 0)
        let mut p = DenseMatrix::zeros(3, 3);
        p[(1, 0)] = 1.0;
        p[(2, 1)] = 1.0;
        p[(0, 2)] = 1.0;
        let x = dense_solve(&p, &[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(x, vec![20.0, 30.0, 10.0]);
    }

    #[test]
    fn hilbert_inverse_entries() {
        // exact inverse of the 4x4 Hilbert matrix
        let inv = [
            [16.0, -120.0, 240.0, -140.0],
            [-120.0, 1200.0, -2700.0, 1680.0],
            [240.0, -2700.0, 6480.0, -4200.0],
            [-140.0, 1680.0, -4200.0, 2800.0],
        ];
        let h = DenseMatrix::from_fn(4, 4, |i, j| 1.0 / (i + j + 1) as f64);
        for col in 0..4 {
            let mut e = vec![0.0; 4];
            e[col] = 1.0;
            let x = dense_solve(&h, &e).unwrap();
            for row in 0..4 {
                assert!((x[row] - inv[row][col]).abs() <= 1e-8 * inv[row][col].abs().max(1.0));
            }
        }
    }

    #[test]
    fn singular_detected() {
        let a = DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(dense_solve(&a, &[1.0, 1.0]), Err(Error::Singular)));
    }

    #[test]
    fn pencil_same_matrices_gives_ones() {
        let t = DenseMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0]);
        let (vals, _) = dense_generalized_symmetric_eig(&t, &t).unwrap();
        for v in vals {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pencil_zero_s() {
        let t = DenseMatrix::identity(4, 4) * 2.0;
        let (vals, _) = dense_generalized_symmetric_eig(&DenseMatrix::zeros(4, 4), &t).unwrap();
        assert!(vals.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn pencil_not_spd() {
        let t = DenseMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            dense_generalized_symmetric_eig(&DenseMatrix::identity(2, 2), &t),
            Err(Error::NotSpd)
        ));
    }

    /// Roots of det(S − νT) for a random 3x3 PSD/SPD pair by bisection on the
    /// characteristic cubic, compared with the pencil eigenvalues.
    #[test]
    fn pencil_matches_characteristic_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = DenseMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
        let q = DenseMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
        let s = &r * r.transpose();
        let t = &q * q.transpose() + DenseMatrix::identity(3, 3);
        let det = |nu: f64| (&s - &t * nu).determinant();
        let (vals, vecs) = dense_generalized_symmetric_eig(&s, &t).unwrap();
        // bracket all roots in [0, upper]
        let upper = s.norm() / 1.0 + 1.0;
        let mut grid: Vec<f64> = (0..=20000).map(|k| -1e-9 + upper * k as f64 / 20000.0).collect();
        grid.dedup();
        let mut roots = Vec::new();
        for w in grid.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            if det(a) == 0.0 {
                roots.push(a);
                continue;
            }
            if det(a).signum() != det(b).signum() {
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if det(a).signum() == det(m).signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        assert_eq!(roots.len(), 3, "roots: {roots:?}");
        for (r, v) in roots.iter().zip(&vals) {
            assert!((r - v).abs() <= 1e-8 * r.abs().max(1.0), "{r} vs {v}");
        }
        for k in 0..3 {
            let v = vecs.column(k);
            let res = (&s * v - &t * v * vals[k]).norm();
            assert!(res <= 1e-8);
        }
    }
}
