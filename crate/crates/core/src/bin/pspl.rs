use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pspl::config::{BcVariant, ExperimentConfig, Overrides};
use pspl::experiment::{cmd_check, cmd_compare, cmd_delta, cmd_mesh, cmd_run, configure_threads, EXIT_DIVERGED};
use pspl::mesh::MeshSpec;
use pspl::schemes::{RunStatus, SchemeKind};
use pspl::spectral::{PowerOptions, SpectralMethod};

#[derive(Parser)]
#[command(name = "pspl", version, about = "Double-porosity poroelasticity with splitting schemes")]
struct Cli {
    /// Force the sequential reference code paths.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graded unit-square mesh.
    Mesh {
        #[arg(long, default_value_t = 20)]
        res: usize,
        #[arg(long, default_value_t = 2.0)]
        grade: f64,
        /// Half-width of the loaded strip.
        #[arg(long, default_value_t = 0.1)]
        strip: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check operator identities; exit status 0 iff all pass.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 32)]
        probes: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Estimate δ and the weight θ_min = (1 + δ)/2.
    Delta {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Lanczos)]
        method: Method,
        /// Relative change of the eigenvalue estimate.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_iter: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Integrate in time and write a run directory.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        scheme: Option<Scheme>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        /// Relative tolerance of the linear solves.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        snapshot_every: Option<usize>,
        /// Record the three-level energy of splitting schemes.
        #[arg(long)]
        monitor_energy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L2 errors of a run against an etalon run, as CSV.
    Compare {
        run: PathBuf,
        etalon: PathBuf,
        /// Transfer run fields onto the etalon mesh (experimental).
        #[arg(long)]
        interpolate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML experiment config; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// MSH 2.2 mesh file instead of a generated mesh.
    #[arg(long)]
    mesh: Option<PathBuf>,
    #[arg(long)]
    res: Option<usize>,
    #[arg(long)]
    grade: Option<f64>,
    /// Parameter set 1, 2 or 3.
    #[arg(long)]
    set: Option<u8>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long, value_enum)]
    bc: Option<Bc>,
    /// Peak traction (Pa).
    #[arg(long)]
    load_amplitude: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lanczos,
    Power,
    Dense,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Coupled,
    Incomplete,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bc {
    Prose,
    EquationList,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            mesh_file: self.mesh.clone(),
            resolution: self.res,
            grading: self.grade,
            set: self.set,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            bc: self.bc.map(|b| match b {
                Bc::Prose => BcVariant::Prose,
                Bc::EquationList => BcVariant::EquationList,
            }),
            load_amplitude: self.load_amplitude,
            seed: self.seed,
            ..Overrides::default()
        }
    }
}

enum Failure {
    Usage(String),
    Other(String),
}

impl From<pspl::Error> for Failure {
    fn from(e: pspl::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn config(common: &Common, extra: impl FnOnce(&mut Overrides)) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let mut o = common.overrides();
    extra(&mut o);
    cfg.apply(&o);
    cfg.validate().map_err(|e| match e {
        pspl::Error::MissingFile(_) => Failure::Other(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    })?;
    Ok(cfg)
}

fn write_report(path: Option<&Path>, json: &impl serde::Serialize) -> Result<(), Failure> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(json).map_err(pspl::Error::from)?;
        pspl::io::write_atomic(p, text.as_bytes())?;
    }
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<ExitCode, Failure> {
    match cmd {
        Cmd::Mesh { res, grade, strip, out } => {
            let spec = MeshSpec { resolution: res, grading: grade, strip_half_width: strip };
            spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let mesh = cmd_mesh(&spec, &out)?;
            println!("{}: {} vertices, {} cells, hash {}", out.display(), mesh.num_vertices(), mesh.num_cells(), mesh.content_hash());
        }
        Cmd::Check { common, probes, report } => {
            let cfg = config(&common, |_| {})?;
            let rep = cmd_check(&cfg, probes, report.as_deref())?;
            for s in &rep.identities.symmetry {
                println!("symmetry {:<8} {:.3e}", s.name, s.value);
            }
            println!("adjointness defect {:.3e}", rep.identities.adjointness_defect);
            println!("duality defect {:.3e}", rep.identities.duality_defect);
            for s in &rep.identities.spd_probes {
                println!("min Rayleigh {:<10} {:.3e}", s.name, s.value);
            }
            println!("{}", if rep.identities.passed { "passed" } else { "FAILED" });
            if !rep.identities.passed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Cmd::Delta { common, method, tol, max_iter, report } => {
            let cfg = config(&common, |_| {})?;
            let method = match method {
                Method::Lanczos => SpectralMethod::Lanczos,
                Method::Power => SpectralMethod::Power,
                Method::Dense => SpectralMethod::Dense,
            };
            let opts = PowerOptions { tol, residual_tol: tol.sqrt(), max_iter, ..PowerOptions::default() };
            let rep = cmd_delta(&cfg, method, &opts)?;
            println!("delta     {:.6}", rep.result.delta);
            println!("theta_min {:.6}", rep.result.theta_min);
            println!("iterations {} (residual {:.2e}, {:.1} s, {} pressure dofs)", rep.result.iterations, rep.result.residual, rep.elapsed_s, rep.mesh.dofs_p);
            write_report(report.as_deref(), &rep)?;
        }
        Cmd::Run { common, scheme, theta, tau, t_end, tol, snapshot_every, monitor_energy, out } => {
            let cfg = config(&common, |o| {
                o.kind = scheme.map(|s| match s {
                    Scheme::Coupled => SchemeKind::Coupled,
                    Scheme::Incomplete => SchemeKind::Incomplete,
                    Scheme::Full => SchemeKind::Full,
                });
                o.theta = theta;
                o.tau = tau;
                o.t_end = t_end;
                o.tol = tol;
                o.snapshot_every = snapshot_every;
                o.monitor_energy = monitor_energy;
                o.output = out;
            })?;
            let rep = cmd_run(&cfg)?;
            let r = &rep.result;
            println!(
                "{} θ={} τ={}: {} of {} steps, t = {:.6}, {:.2} s stepping",
                r.kind, r.theta, r.tau, r.steps_completed, r.steps_requested, r.final_t, r.timings.stepping_s
            );
            if let RunStatus::Diverged { step, reason } = &r.status {
                println!("diverged at step {step}: {reason}");
                return Ok(ExitCode::from(EXIT_DIVERGED as u8));
            }
            println!("output in {}", cfg.output.display());
        }
        Cmd::Compare { run, etalon, interpolate, out } => {
            let series = cmd_compare(&run, &etalon, interpolate, out.as_deref())?;
            if out.is_none() {
                print!("{}", series.to_csv());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    configure_threads(cli.deterministic);
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
