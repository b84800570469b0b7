//! Fixed symmetric positive definite preconditioners.

use std::ops::Range;

use super::csr::CsrMatrix;
use crate::{Error, Result};

/// `z = P r` for a fixed SPD approximation `P` of `A⁻¹`.
pub trait Precond: Send + Sync {
    fn apply(&self, r: &[f64], z: &mut [f64]);
}

pub struct IdentityPrecond;

impl Precond for IdentityPrecond {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
}

/// Inverse of `|diag(A)|`; zero diagonal entries map to 1.
#[derive(Debug, Clone)]
pub struct Jacobi {
    dinv: Vec<f64>,
}

impl Jacobi {
    pub fn new(a: &CsrMatrix) -> Self {
        Self::from_diagonal(&a.diagonal())
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self { dinv: diag.iter().map(|&d| if d.abs() > 0.0 { 1.0 / d.abs() } else { 1.0 }).collect() }
    }
}

impl Precond for Jacobi {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        for ((zi, ri), di) in z.iter_mut().zip(r).zip(&self.dinv) {
            *zi = ri * di;
        }
    }
}

/// Reverse Cuthill–McKee ordering of the symmetric pattern of `a`:
/// `order[k]` is the original index placed at position `k`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).0.len()).collect();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut next_root = by_degree.into_iter();
    while order.len() < n {
        let Some(root) = next_root.find(|&i| !seen[i]) else { break };
        seen[root] = true;
        let mut head = order.len();
        order.push(root);
        while head < order.len() {
            let v = order[head];
            head += 1;
            let start = order.len();
            for &j in a.row(v).0 {
                if !seen[j] {
                    seen[j] = true;
                    order.push(j);
                }
            }
            order[start..].sort_by_key(|&j| (degree[j], j));
        }
    }
    order.reverse();
    order
}

/// Zero fill-in incomplete Cholesky `L Lᵀ ≈ A + s·diag(A)`, factored in
/// reverse Cuthill–McKee order.
///
/// The shift `s` starts at zero and grows until every pivot is positive, so
/// the factorization exists for any SPD matrix.
#[derive(Debug, Clone)]
pub struct IncompleteCholesky {
    n: usize,
    order: Vec<usize>,
    // strictly lower part of L by rows, diagonal kept separately
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    diag: Vec<f64>,
    shift: f64,
}

const SHIFTS: [f64; 9] = [0.0, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0];

impl IncompleteCholesky {
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        Self::with_fill(a, false)
    }

    /// With `level_one`, the pattern of `L` also admits fill of level one:
    /// `(i, j)` whenever some `k < j` couples to both in `A`.
    pub fn with_fill(a: &CsrMatrix, level_one: bool) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch(format!("incomplete Cholesky of {:?}", a.shape())));
        }
        let n = a.nrows();
        let order = reverse_cuthill_mckee(a);
        let mut position = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            position[i] = k;
        }
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut lower = Vec::new();
        let mut adiag = vec![0.0; n];
        let mut row: Vec<(usize, f64)> = Vec::new();
        indptr.push(0);
        for (k, &i) in order.iter().enumerate() {
            let (cols, vals) = a.row(i);
            row.clear();
            for (&j, &v) in cols.iter().zip(vals) {
                let m = position[j];
                if m < k {
                    row.push((m, v));
                } else if m == k {
                    adiag[k] = v;
                }
            }
            if level_one {
                let direct: Vec<usize> = row.iter().map(|e| e.0).collect();
                for &m in &direct {
                    for &j in a.row(order[m]).0 {
                        let q = position[j];
                        if q > m && q < k {
                            row.push((q, 0.0));
                        }
                    }
                }
                row.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(y.1.abs().total_cmp(&x.1.abs())));
                row.dedup_by_key(|e| e.0);
            } else {
                row.sort_unstable_by_key(|e| e.0);
            }
            indices.extend(row.iter().map(|e| e.0));
            lower.extend(row.iter().map(|e| e.1));
            indptr.push(indices.len());
        }
        if adiag.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::InvalidArgument("incomplete Cholesky needs a positive diagonal".into()));
        }
        for &shift in &SHIFTS {
            if let Some((values, diag)) = factor(n, &indptr, &indices, &lower, &adiag, shift) {
                if shift > 0.0 {
                    log::debug!("incomplete Cholesky needed diagonal shift {shift}");
                }
                return Ok(Self { n, order, indptr, indices, values, diag, shift });
            }
        }
        Err(Error::Singular)
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

fn factor(
    n: usize,
    indptr: &[usize],
    indices: &[usize],
    lower: &[f64],
    adiag: &[f64],
    shift: f64,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut values = lower.to_vec();
    let mut diag = vec![0.0; n];
    for i in 0..n {
        let (ri0, ri1) = (indptr[i], indptr[i + 1]);
        for p in ri0..ri1 {
            let j = indices[p];
            // Σ_{k<j} L_ik L_jk over the common pattern; both rows are sorted
            let (mut a, mut b) = (ri0, indptr[j]);
            let bend = indptr[j + 1];
            let mut s = 0.0;
            while a < p && b < bend {
                let (ka, kb) = (indices[a], indices[b]);
                if ka == kb {
                    s += values[a] * values[b];
                    a += 1;
                    b += 1;
                } else if ka < kb {
                    a += 1;
                } else {
                    b += 1;
                }
            }
            values[p] = (values[p] - s) / diag[j];
        }
        let s: f64 = values[ri0..ri1].iter().map(|v| v * v).sum();
        let d = adiag[i] * (1.0 + shift) - s;
        if !(d > f64::EPSILON * adiag[i]) {
            return None;
        }
        diag[i] = d.sqrt();
    }
    Some((values, diag))
}

impl Precond for IncompleteCholesky {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let mut y: Vec<f64> = self.order.iter().map(|&i| r[i]).collect();
        // L y = r
        for i in 0..self.n {
            let mut s = y[i];
            for p in self.indptr[i]..self.indptr[i + 1] {
                s -= self.values[p] * y[self.indices[p]];
            }
            y[i] = s / self.diag[i];
        }
        // Lᵀ z = y, column sweep over the rows of L
        for i in (0..self.n).rev() {
            y[i] /= self.diag[i];
            let yi = y[i];
            for p in self.indptr[i]..self.indptr[i + 1] {
                y[self.indices[p]] -= self.values[p] * yi;
            }
        }
        for (&i, v) in self.order.iter().zip(y) {
            z[i] = v;
        }
    }
}

/// Block diagonal preconditioner over consecutive index ranges.
pub struct BlockDiagonal<'a> {
    blocks: Vec<(Range<usize>, &'a dyn Precond)>,
}

impl<'a> BlockDiagonal<'a> {
    /// `blocks` must tile `0..n` in order.
    pub fn new(blocks: Vec<(Range<usize>, &'a dyn Precond)>) -> Result<Self> {
        let mut next = 0;
        for (r, _) in &blocks {
            if r.start != next || r.end < r.start {
                return Err(Error::InvalidArgument(format!("block range {r:?} does not continue at {next}")));
            }
            next = r.end;
        }
        Ok(Self { blocks })
    }
}

impl Precond for BlockDiagonal<'_> {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        for (range, p) in &self.blocks {
            p.apply(&r[range.clone()], &mut z[range.clone()]);
        }
    }
}
