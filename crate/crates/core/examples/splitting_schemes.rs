//! Incomplete and full splitting on the loaded-block experiment, below and
//! above the weight θ_min from the spectral estimate.

use pspl::fem::MaterialParams;
use pspl::mesh::{generate_unit_square, MeshSpec};
use pspl::schemes::{run, SchemeConfig, SchemeKind, TrajectoryRecorder};
use pspl::spectral::{estimate_delta_lanczos, PowerOptions};
use pspl::system::{build_system, BcLayout, ProblemData};

fn main() -> pspl::Result<()> {
    let mesh = generate_unit_square(&MeshSpec::new(12, 2.0))?;
    let ops = build_system(&mesh, &MaterialParams::parameter_set(1)?, BcLayout::default())?;
    let theta_min = estimate_delta_lanczos(&ops, &PowerOptions::default())?.theta_min;
    println!("theta_min = {theta_min:.3}");
    let data = ProblemData::default();
    for kind in [SchemeKind::Incomplete, SchemeKind::Full] {
        for theta in [0.5, 1.0, theta_min.ceil()] {
            let cfg = SchemeConfig::new(kind, theta, 0.005, 1.0);
            let s = run(&ops, &data, &cfg, &mut TrajectoryRecorder::default())?;
            let status = if s.diverged() { "diverged" } else { "completed" };
            println!(
                "{kind:>10} theta {theta:.2}: {status} after {} steps, max energy {:.3e}",
                s.steps_completed, s.max_energy
            );
        }
    }
    Ok(())
}
