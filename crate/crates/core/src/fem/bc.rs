use crate::linalg::CsrMatrix;
use crate::{Error, Result};

/// Symmetric elimination of `dofs` with prescribed `value`: constrained rows
/// and columns are zeroed, the diagonal set to 1, and the right-hand side
/// corrected so the solution takes `value` there.
pub fn apply_dirichlet(a: &CsrMatrix, rhs: &[f64], dofs: &[usize], value: f64) -> Result<(CsrMatrix, Vec<f64>)> {
    let n = a.nrows();
    if a.ncols() != n || rhs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix {:?} with rhs of length {}",
            a.shape(),
            rhs.len()
        )));
    }
    let mut mask = vec![false; n];
    for &d in dofs {
        if d >= n {
            return Err(Error::OutOfRange { index: d, size: n });
        }
        mask[d] = true;
    }
    if dofs.is_empty() {
        return Ok((a.clone(), rhs.to_vec()));
    }
    let mut b = rhs.to_vec();
    if value != 0.0 {
        for (i, bi) in b.iter_mut().enumerate() {
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if mask[j] {
                    *bi -= v * value;
                }
            }
        }
    }
    for (bi, &m) in b.iter_mut().zip(&mask) {
        if m {
            *bi = value;
        }
    }
    Ok((a.constrain_symmetric(&mask, 1.0), b))
}
