//! The commands behind the `pspl` binary, usable as library calls.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{BcVariant, ExperimentConfig, MeshSource};
use crate::diagnostics::{compare_trajectories, layout, EnergyRecord, ErrorSeries};
use crate::fem::MaterialParams;
use crate::io::{write_atomic, write_sidecar, write_vtk};
use crate::linalg::set_parallel;
use crate::mesh::{generate_unit_square, read_msh2, write_msh2, Mesh, MeshSpec};
use crate::schemes::{run, RunSummary, SchemeConfig, Sink, State};
use crate::spectral::{dense_delta, estimate_delta_lanczos, estimate_delta_power, PowerOptions, SpectralMethod, SpectralResult};
use crate::system::{build_system, check_operator_identities, IdentityReport, ProblemData, SystemOperators};
use crate::{Error, Result};

/// Exit code of a run flagged as diverged.
pub const EXIT_DIVERGED: i32 = 3;

/// Sets up threading from `PSPL_THREADS` (default 1) unless
/// `deterministic`, which keeps every sequential reference path.
/// Returns the thread count in effect.
pub fn configure_threads(deterministic: bool) -> usize {
    let requested = std::env::var("PSPL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(1);
    let threads = if deterministic { 1 } else { requested.max(1) };
    if threads > 1 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::debug!("thread pool already configured: {e}");
        }
    }
    set_parallel(threads > 1);
    threads
}

/// Generates a mesh, writes it and checks that it reads back unchanged.
pub fn cmd_mesh(spec: &MeshSpec, out: &Path) -> Result<Mesh> {
    let mesh = generate_unit_square(spec)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_msh2(&mesh, out)?;
    let back = read_msh2(out)?;
    if back.vertices != mesh.vertices || back.cells != mesh.cells || back.boundary_edges != mesh.boundary_edges {
        return Err(Error::Format(format!("{} does not read back to the generated mesh", out.display())));
    }
    Ok(mesh)
}

/// Mesh, material and operators of a config.
pub struct Problem {
    pub mesh: Mesh,
    pub params: MaterialParams,
    pub ops: SystemOperators,
}

pub fn build_problem(cfg: &ExperimentConfig) -> Result<Problem> {
    let mesh = cfg.mesh.load()?;
    let params = cfg.material.params()?;
    let ops = build_system(&mesh, &params, cfg.bc.layout())?;
    Ok(Problem { mesh, params, ops })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshInfo {
    pub hash: String,
    pub vertices: usize,
    pub cells: usize,
    pub dofs_u: usize,
    pub dofs_p: usize,
    pub total_dofs: usize,
}

impl MeshInfo {
    fn new(mesh: &Mesh, ops: &SystemOperators) -> Self {
        Self {
            hash: mesh.content_hash(),
            vertices: mesh.num_vertices(),
            cells: mesh.num_cells(),
            dofs_u: ops.nu(),
            dofs_p: ops.np(),
            total_dofs: ops.total_dofs(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub mesh: MeshInfo,
    pub set: u8,
    pub custom_material: bool,
    pub seed: u64,
    #[serde(flatten)]
    pub identities: IdentityReport,
}

/// Operator identity checks; writes the JSON report when `report` is given.
pub fn cmd_check(cfg: &ExperimentConfig, probes: usize, report: Option<&Path>) -> Result<CheckReport> {
    let p = build_problem(cfg)?;
    let identities = check_operator_identities(&p.ops, probes, cfg.seed);
    let out = CheckReport {
        mesh: MeshInfo::new(&p.mesh, &p.ops),
        set: cfg.material.set,
        custom_material: cfg.material.is_custom(),
        seed: cfg.seed,
        identities,
    };
    if let Some(path) = report {
        write_atomic(path, serde_json::to_string_pretty(&out)?.as_bytes())?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaReport {
    pub mesh: MeshInfo,
    pub set: u8,
    pub custom_material: bool,
    pub seed: u64,
    pub elapsed_s: f64,
    #[serde(flatten)]
    pub result: SpectralResult,
}

pub fn cmd_delta(cfg: &ExperimentConfig, method: SpectralMethod, opts: &PowerOptions) -> Result<DeltaReport> {
    let p = build_problem(cfg)?;
    let clock = Instant::now();
    let opts = PowerOptions { seed: cfg.seed, ..*opts };
    let result = match method {
        SpectralMethod::Power => estimate_delta_power(&p.ops, &opts)?,
        SpectralMethod::Lanczos => estimate_delta_lanczos(&p.ops, &opts)?,
        SpectralMethod::Dense => dense_delta(&p.ops)?,
    };
    Ok(DeltaReport {
        mesh: MeshInfo::new(&p.mesh, &p.ops),
        set: cfg.material.set,
        custom_material: cfg.material.is_custom(),
        seed: cfg.seed,
        elapsed_s: clock.elapsed().as_secs_f64(),
        result,
    })
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub scheme: SchemeConfig,
    pub mesh_hash: String,
    pub mesh: MeshInfo,
    pub mesh_source: MeshSource,
    pub set: u8,
    pub custom_material: bool,
    pub material: MaterialParams,
    pub bc: BcVariant,
    pub load_amplitude: f64,
    pub build_s: f64,
    pub result: RunSummary,
}

impl RunReport {
    pub fn diverged(&self) -> bool {
        self.result.diverged()
    }
}

/// Writes snapshots into a run directory as the run proceeds.
struct DirSink<'m> {
    root: PathBuf,
    mesh: &'m Mesh,
    index: String,
    energy: String,
}

impl<'m> DirSink<'m> {
    fn new(root: &Path, mesh: &'m Mesh) -> Self {
        Self {
            root: root.to_path_buf(),
            mesh,
            index: "n,t,vtk,coeffs\n".into(),
            energy: "n,t,two_level,three_level,monotone\n".into(),
        }
    }

    fn finish(&self) -> Result<()> {
        write_atomic(&self.root.join(layout::SNAPSHOTS), self.index.as_bytes())?;
        write_atomic(&self.root.join(layout::ENERGY), self.energy.as_bytes())
    }
}

impl Sink for DirSink<'_> {
    fn snapshot(&mut self, _ops: &SystemOperators, state: &State) -> Result<()> {
        let (vtk, coeffs) = (layout::vtk_name(state.n), layout::coeff_name(state.n));
        let title = format!("n={} t={:e}", state.n, state.t);
        write_vtk(&self.root.join(&vtk), self.mesh, &title, &state.u, &state.p[0], &state.p[1])?;
        let mut all = Vec::with_capacity(state.u.len() + 2 * state.p[0].len());
        all.extend_from_slice(&state.u);
        all.extend_from_slice(&state.p[0]);
        all.extend_from_slice(&state.p[1]);
        write_sidecar(&self.root.join(&coeffs), &all)?;
        let _ = writeln!(self.index, "{},{:e},{vtk},{coeffs}", state.n, state.t);
        Ok(())
    }

    fn energy(&mut self, r: &EnergyRecord) -> Result<()> {
        let three = r.three_level.map(|e| format!("{e:e}")).unwrap_or_default();
        let _ = writeln!(self.energy, "{},{:e},{:e},{three},{}", r.n, r.t, r.two_level, r.monotone);
        Ok(())
    }
}

/// Runs a scheme and writes the run directory `cfg.output`. A diverged run
/// is a successful call; check [`RunReport::diverged`].
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let clock = Instant::now();
    let p = build_problem(cfg)?;
    let build_s = clock.elapsed().as_secs_f64();
    let root = &cfg.output;
    fs::create_dir_all(root)?;
    write_msh2(&p.mesh, root.join(layout::MESH))?;

    let data = ProblemData { load_amplitude: cfg.load_amplitude, ..ProblemData::default() };
    let mut sink = DirSink::new(root, &p.mesh);
    let summary = run(&p.ops, &data, &cfg.scheme, &mut sink);
    // keep whatever was written before a failure
    sink.finish()?;
    let result = summary?;
    let report = RunReport {
        scheme: cfg.scheme,
        mesh_hash: p.mesh.content_hash(),
        mesh: MeshInfo::new(&p.mesh, &p.ops),
        mesh_source: cfg.mesh.clone(),
        set: cfg.material.set,
        custom_material: cfg.material.is_custom(),
        material: p.params,
        bc: cfg.bc,
        load_amplitude: cfg.load_amplitude,
        build_s,
        result,
    };
    write_atomic(&root.join(layout::SUMMARY), serde_json::to_string_pretty(&report)?.as_bytes())?;
    Ok(report)
}

/// Errors of `run` against `etalon`; writes the CSV when `out` is given.
pub fn cmd_compare(run_dir: &Path, etalon: &Path, interpolate: bool, out: Option<&Path>) -> Result<ErrorSeries> {
    let series = compare_trajectories(run_dir, etalon, interpolate)?;
    if let Some(path) = out {
        write_atomic(path, series.to_csv().as_bytes())?;
    }
    Ok(series)
}
