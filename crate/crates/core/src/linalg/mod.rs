//! Sparse storage, Krylov solvers and the small dense routines used as
//! oracles.

mod csr;
mod dense;
mod krylov;
mod precond;
pub mod vecops;

pub use csr::{CsrMatrix, TripletBuilder};
pub use dense::{dense_generalized_symmetric_eig, dense_solve, DenseMatrix};
pub use krylov::{cg_solve, cg_solve_with, minres_solve, minres_solve_with, Preconditioner, SolveReport, SolverOptions};
pub use precond::{reverse_cuthill_mckee, BlockDiagonal, IdentityPrecond, IncompleteCholesky, Jacobi, Precond};

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(false);

/// Enables row-parallel sparse products. Off by default; products are
/// bitwise identical either way since every row is reduced sequentially.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    PARALLEL.load(Ordering::Relaxed)
}
