//! Solves the elasticity system with CG under Jacobi and incomplete Cholesky
//! preconditioning, then a coupled saddle-point system with MINRES.

use std::time::Instant;

use pspl::fem::MaterialParams;
use pspl::linalg::{cg_solve, cg_solve_with, minres_solve, CsrMatrix, IncompleteCholesky, SolverOptions};
use pspl::mesh::{generate_unit_square, MeshSpec};
use pspl::system::{build_system, BcLayout, ProblemData};

fn main() -> pspl::Result<()> {
    let mesh = generate_unit_square(&MeshSpec::new(16, 2.0))?;
    let ops = build_system(&mesh, &MaterialParams::parameter_set(1)?, BcLayout::default())?;
    let f = ops.load(&ProblemData { load_law: pspl::system::unit_law, ..ProblemData::default() }, 0.0);
    let opts = SolverOptions::default();

    let clock = Instant::now();
    let (_, jac) = cg_solve(&ops.a, &f, None, &opts)?;
    println!("CG + Jacobi: {} iterations, {:?}", jac.iterations, clock.elapsed());
    let clock = Instant::now();
    let ic = IncompleteCholesky::with_fill(&ops.a, true)?;
    let (u, rep) = cg_solve_with(&ops.a, &f, None, &opts, &ic)?;
    println!("CG + IC(1):  {} iterations, {:?}", rep.iterations, clock.elapsed());

    // [[A, G1], [G1ᵀ, −C1]] with the first pressure only
    let gt = ops.g[0].transpose();
    let neg_c = ops.c[0].scaled(-1.0);
    let k = CsrMatrix::block(&[vec![Some(&ops.a), Some(&ops.g[0])], vec![Some(&gt), Some(&neg_c)]])?;
    let mut rhs = f.clone();
    rhs.resize(ops.nu() + ops.np(), 0.0);
    let (x, rep) = minres_solve(&k, &rhs, None, &opts)?;
    let du: f64 = x[..ops.nu()].iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("MINRES: {} iterations, converged {}, max |u_coupled − u_drained| = {du:.3e}", rep.iterations, rep.converged);
    Ok(())
}
