//! Reads an experiment config in table units and runs it.

use pspl::config::ExperimentConfig;
use pspl::experiment::cmd_run;

const CONFIG: &str = r#"
load_amplitude = 1.0
bc = "prose"

[mesh]
resolution = 6
grading = 2.0

[material]
set = 2
beta2 = 30.0   # GPa⁻¹

[scheme]
kind = "full"
theta = 1.2
tau = 0.01
t_end = 0.2
"#;

fn main() -> pspl::Result<()> {
    let mut cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    cfg.output = std::env::temp_dir().join("pspl_config_example");
    let p = cfg.material.params()?;
    println!("beta2 = {:e} 1/Pa, mu = {:e} Pa", p.beta2, p.mu);
    let rep = cmd_run(&cfg)?;
    println!("{} steps, final energy {:.4e}, output in {}", rep.result.steps_completed, rep.result.final_energy, cfg.output.display());
    Ok(())
}
