//! Estimates δ and θ_min = (1 + δ)/2 for the three parameter sets, with
//! Lanczos and, on a small mesh, the dense oracle.

use pspl::fem::MaterialParams;
use pspl::mesh::{generate_unit_square, MeshSpec};
use pspl::spectral::{dense_delta, estimate_delta_lanczos, PowerOptions};
use pspl::system::{build_system, BcLayout};

fn main() -> pspl::Result<()> {
    let res: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let mesh = generate_unit_square(&MeshSpec::new(res, 2.0))?;
    let small = generate_unit_square(&MeshSpec::new(6, 2.0))?;
    for set in 1..=3 {
        let params = MaterialParams::parameter_set(set)?;
        let ops = build_system(&mesh, &params, BcLayout::default())?;
        let r = estimate_delta_lanczos(&ops, &PowerOptions::default())?;
        let dense = dense_delta(&build_system(&small, &params, BcLayout::default())?)?;
        println!(
            "set {set}: delta = {:.4} (theta_min {:.4}, {} iterations, {} pressure dofs); dense on res 6: {:.4}",
            r.delta,
            r.theta_min,
            r.iterations,
            ops.np(),
            dense.delta
        );
    }
    Ok(())
}
