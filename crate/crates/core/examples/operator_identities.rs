//! Assembles the discrete operators and checks their structural identities
//! for all three parameter sets.

use pspl::fem::MaterialParams;
use pspl::mesh::{generate_unit_square, MeshSpec};
use pspl::system::{build_system, check_operator_identities, BcLayout};

fn main() -> pspl::Result<()> {
    let mesh = generate_unit_square(&MeshSpec::new(8, 2.0))?;
    for set in 1..=3 {
        let ops = build_system(&mesh, &MaterialParams::parameter_set(set)?, BcLayout::default())?;
        let rep = check_operator_identities(&ops, 32, 1);
        let worst = rep.symmetry.iter().map(|s| s.value).fold(0.0, f64::max);
        println!(
            "set {set}: nu = {}, np = {}, max symmetry defect {worst:.1e}, G + Dᵀ = {:.1e}, passed = {}",
            ops.nu(),
            ops.np(),
            rep.adjointness_defect,
            rep.passed
        );
    }
    Ok(())
}
