//! Writes an etalon run and two coarser coupled runs to disk, then measures
//! their L2 errors; halving τ roughly halves the error.

use pspl::config::{ExperimentConfig, MeshSource};
use pspl::experiment::{cmd_compare, cmd_run};
use pspl::mesh::MeshSpec;
use pspl::schemes::{SchemeConfig, SchemeKind};

fn main() -> pspl::Result<()> {
    let root = std::env::temp_dir().join("pspl_etalon_example");
    let cfg = |tau: f64, name: &str| ExperimentConfig {
        mesh: MeshSource::Generate(MeshSpec::new(8, 2.0)),
        scheme: SchemeConfig { snapshot_every: 1, ..SchemeConfig::new(SchemeKind::Coupled, 1.0, tau, 0.5) },
        output: root.join(name),
        ..ExperimentConfig::default()
    };
    let etalon = cfg(0.00125, "etalon");
    cmd_run(&etalon)?;
    let mut last = None;
    for tau in [0.02, 0.01] {
        let c = cfg(tau, &format!("tau_{tau}"));
        cmd_run(&c)?;
        let errors = cmd_compare(&c.output, &etalon.output, false, None)?;
        let [_, e1, e2] = errors.at(0.5).expect("snapshot at t = 0.5");
        print!("tau {tau}: eps_p1 {e1:.4e}, eps_p2 {e2:.4e}");
        if let Some(prev) = last {
            print!(", ratio {:.2}", prev / e1);
        }
        println!();
        last = Some(e1);
    }
    println!("run directories (VTK snapshots included) under {}", root.display());
    Ok(())
}
