//! Energy functionals and error measurement against reference trajectories.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::fem::{assemble_scaled_mass, eval_scalar, eval_vector, DofMap, FieldVector, SpaceKind};
use crate::io::read_sidecar;
use crate::linalg::{vecops, CsrMatrix, SolverOptions};
use crate::mesh::{read_msh2, Mesh, PointLocator};
use crate::schemes::{SchemeKind, State};
use crate::system::SystemOperators;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub n: usize,
    pub t: f64,
    /// `‖u‖²_A + ‖p1‖²_C1 + ‖p2‖²_C2`.
    pub two_level: f64,
    /// Three-level energy ℰⁿ of the splitting schemes.
    pub three_level: Option<f64>,
    /// Whether the monitored energy did not grow over the last step.
    pub monotone: bool,
}

pub fn energy_two_level(ops: &SystemOperators, state: &State) -> f64 {
    ops.a.quadratic_form(&state.u) + ops.c[0].quadratic_form(&state.p[0]) + ops.c[1].quadratic_form(&state.p[1])
}

fn pair_dot(a: &[FieldVector; 2], b: &[FieldVector; 2]) -> f64 {
    vecops::dot(&a[0], &b[0]) + vecops::dot(&a[1], &b[1])
}

/// ℰⁿ = ‖v‖²_Ã + ‖w‖²_{D̃ − τ²/4 Ã} with `v = (pⁿ + pⁿ⁻¹)/2`, `w = (pⁿ − pⁿ⁻¹)/τ`,
/// `Ã = 𝐁` and `D̃ = τ/2 ((2θ−1)𝐂 − 𝐆ᵀA⁻¹𝐆) + τ²/2 Ã'`. Here `Ã' = 𝐁` for
/// the incomplete scheme and `blockdiag(B_l + γM)` for the full one. The
/// `𝐆ᵀA⁻¹𝐆` term costs one elasticity solve.
///
/// When `2θ < 1 + δ` the second term need not be positive; the value is
/// returned as computed.
pub fn energy_three_level(
    ops: &SystemOperators,
    p: &[FieldVector; 2],
    p_prev: &[FieldVector; 2],
    tau: f64,
    theta: f64,
    kind: SchemeKind,
    opts: &SolverOptions,
) -> Result<f64> {
    let v: [FieldVector; 2] = [0, 1].map(|l| p[l].iter().zip(&p_prev[l]).map(|(a, b)| 0.5 * (a + b)).collect());
    let w: [FieldVector; 2] = [0, 1].map(|l| p[l].iter().zip(&p_prev[l]).map(|(a, b)| (a - b) / tau).collect());
    let bv = pair_dot(&ops.apply_block_b(&v), &v);
    let bw = pair_dot(&ops.apply_block_b(&w), &w);
    let cw = pair_dot(&ops.apply_block_c(&w), &w);
    let a_prime = match kind {
        SchemeKind::Full => pair_dot(&ops.apply_block_b_diag(&w), &w),
        SchemeKind::Coupled | SchemeKind::Incomplete => bw,
    };
    let gw = ops.apply_g(&w);
    let b1 = if vecops::max_abs(&gw) == 0.0 {
        0.0
    } else {
        let (z, _) = ops.solve_a(&gw, None, opts)?;
        vecops::dot(&z, &gw)
    };
    Ok(bv + 0.5 * tau * ((2.0 * theta - 1.0) * cw - b1) + 0.5 * tau * tau * a_prime - 0.25 * tau * tau * bw)
}

/// `√⟨M(a − b), a − b⟩`.
pub fn field_error(a: &[f64], b: &[f64], mass: &CsrMatrix) -> Result<f64> {
    if a.len() != b.len() || a.len() != mass.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "fields of length {} and {} with mass matrix {:?}",
            a.len(),
            b.len(),
            mass.shape()
        )));
    }
    let d = vecops::sub(a, b);
    Ok(mass.quadratic_form(&d).max(0.0).sqrt())
}

/// L2 errors of the three fields of `state` against `reference`.
pub fn state_errors(ops: &SystemOperators, state: &State, reference: &State) -> Result<[f64; 3]> {
    Ok([
        field_error(&state.u, &reference.u, &ops.mass_u)?,
        field_error(&state.p[0], &reference.p[0], &ops.mass)?,
        field_error(&state.p[1], &reference.p[1], &ops.mass)?,
    ])
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    pub t: Vec<f64>,
    pub eps_u: Vec<f64>,
    pub eps_p1: Vec<f64>,
    pub eps_p2: Vec<f64>,
}

impl ErrorSeries {
    pub fn push(&mut self, t: f64, e: [f64; 3]) {
        self.t.push(t);
        self.eps_u.push(e[0]);
        self.eps_p1.push(e[1]);
        self.eps_p2.push(e[2]);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Errors at the entry whose time is closest to `t`.
    pub fn at(&self, t: f64) -> Option<[f64; 3]> {
        let i = (0..self.len()).min_by(|&a, &b| (self.t[a] - t).abs().total_cmp(&(self.t[b] - t).abs()))?;
        Some([self.eps_u[i], self.eps_p1[i], self.eps_p2[i]])
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,eps_u,eps_p1,eps_p2\n");
        for i in 0..self.len() {
            s.push_str(&format!("{:e},{:e},{:e},{:e}\n", self.t[i], self.eps_u[i], self.eps_p1[i], self.eps_p2[i]));
        }
        s
    }
}

/// Moves fields from one mesh onto the nodes of another by evaluating the
/// source finite-element functions. Experimental: accurate only where the
/// target nodes lie inside the source mesh.
pub struct FieldTransfer {
    /// Source cell and barycentric coordinates for every target P2 node.
    u_points: Vec<(usize, [f64; 3])>,
    p_points: Vec<(usize, [f64; 3])>,
}

impl FieldTransfer {
    pub fn new(source: &Mesh, target_u: &DofMap, target_p: &DofMap) -> Result<Self> {
        let loc = PointLocator::new(source);
        let find = |pts: &[[f64; 2]]| -> Result<Vec<(usize, [f64; 3])>> {
            pts.iter()
                .map(|&x| {
                    loc.locate(x)
                        .ok_or_else(|| Error::Geometry(format!("point ({}, {}) lies outside the source mesh", x[0], x[1])))
                })
                .collect()
        };
        Ok(Self { u_points: find(target_u.node_coords())?, p_points: find(target_p.node_coords())? })
    }

    pub fn vector(&self, source_u: &DofMap, u: &[f64]) -> FieldVector {
        self.u_points.iter().flat_map(|&(c, l)| eval_vector(source_u, u, c, l)).collect()
    }

    pub fn scalar(&self, source_p: &DofMap, p: &[f64]) -> FieldVector {
        self.p_points.iter().map(|&(c, l)| eval_scalar(source_p, p, c, l)).collect()
    }
}

/// Files of a run directory written by the experiment driver.
pub mod layout {
    pub const SUMMARY: &str = "summary.json";
    pub const ENERGY: &str = "energy.csv";
    pub const SNAPSHOTS: &str = "snapshots.csv";
    pub const MESH: &str = "mesh.msh";

    pub fn vtk_name(n: usize) -> String {
        format!("snap_{n:06}.vtk")
    }

    pub fn coeff_name(n: usize) -> String {
        format!("snap_{n:06}.pspl")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotEntry {
    pub n: usize,
    pub t: f64,
    pub coeffs: PathBuf,
}

/// A run directory opened for comparison.
pub struct RunDir {
    pub root: PathBuf,
    pub mesh: Mesh,
    pub dofs_u: DofMap,
    pub dofs_p: DofMap,
    pub tau: f64,
    pub mesh_hash: String,
    pub snapshots: Vec<SnapshotEntry>,
}

fn missing(path: &Path) -> Error {
    Error::MissingFile(path.to_path_buf())
}

impl RunDir {
    pub fn open(root: &Path) -> Result<Self> {
        if !root.is_dir() {
            return Err(missing(root));
        }
        let summary_path = root.join(layout::SUMMARY);
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&summary_path).map_err(|_| missing(&summary_path))?)?;
        let tau = summary
            .pointer("/scheme/tau")
            .and_then(|v| v.as_f64())
            .ok_or_else(|| Error::Format(format!("{} lacks scheme.tau", summary_path.display())))?;
        let mesh_hash = summary.get("mesh_hash").and_then(|v| v.as_str()).unwrap_or_default().to_string();
        let mesh = read_msh2(root.join(layout::MESH))?;
        let index_path = root.join(layout::SNAPSHOTS);
        let index = std::fs::read_to_string(&index_path).map_err(|_| missing(&index_path))?;
        let mut snapshots = Vec::new();
        for (i, line) in index.lines().enumerate().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let bad = || Error::Format(format!("{}:{}: malformed row", index_path.display(), i + 1));
            if cols.len() < 4 {
                return Err(bad());
            }
            snapshots.push(SnapshotEntry {
                n: cols[0].trim().parse().map_err(|_| bad())?,
                t: cols[1].trim().parse().map_err(|_| bad())?,
                coeffs: root.join(cols[3].trim()),
            });
        }
        let dofs_u = DofMap::new(&mesh, SpaceKind::P2Vector);
        let dofs_p = DofMap::new(&mesh, SpaceKind::P1Scalar);
        Ok(Self { root: root.to_path_buf(), mesh, dofs_u, dofs_p, tau, mesh_hash, snapshots })
    }

    /// `(u, p1, p2)` of one snapshot.
    pub fn load(&self, entry: &SnapshotEntry) -> Result<(FieldVector, FieldVector, FieldVector)> {
        if !entry.coeffs.is_file() {
            return Err(missing(&entry.coeffs));
        }
        let mut v = read_sidecar(&entry.coeffs)?;
        let (nu, np) = (self.dofs_u.num_dofs(), self.dofs_p.num_dofs());
        if v.len() != nu + 2 * np {
            return Err(Error::Format(format!(
                "{} holds {} values, expected {}",
                entry.coeffs.display(),
                v.len(),
                nu + 2 * np
            )));
        }
        let p2 = v.split_off(nu + np);
        let p1 = v.split_off(nu);
        Ok((v, p1, p2))
    }
}

/// Errors of a run against an etalon at the run's snapshot times.
///
/// The etalon step must divide the run step. Without `interpolate` both runs
/// must share a mesh; with it, run fields are transferred onto the etalon
/// mesh first. Run snapshots with no etalon snapshot at the same time are
/// skipped; if none match the runs are incompatible.
pub fn compare_trajectories(run: &Path, etalon: &Path, interpolate: bool) -> Result<ErrorSeries> {
    let run = RunDir::open(run)?;
    let et = RunDir::open(etalon)?;
    let ratio = run.tau / et.tau;
    if !(ratio >= 1.0 - 1e-9) || (ratio - ratio.round()).abs() > 1e-6 * ratio {
        return Err(Error::Incompatible(format!(
            "etalon step {} does not divide run step {}",
            et.tau, run.tau
        )));
    }
    let same_mesh = run.mesh.vertices == et.mesh.vertices && run.mesh.cells == et.mesh.cells;
    let transfer = match (same_mesh, interpolate) {
        (true, _) => None,
        (false, true) => Some(FieldTransfer::new(&run.mesh, &et.dofs_u, &et.dofs_p)?),
        (false, false) => {
            return Err(Error::Incompatible(format!(
                "meshes differ ({} vs {}); pass interpolation to compare across meshes",
                run.mesh_hash, et.mesh_hash
            )))
        }
    };
    let mass_p = assemble_scaled_mass(&et.mesh, &et.dofs_p, 1.0)?;
    let mass_u = assemble_scaled_mass(&et.mesh, &et.dofs_u, 1.0)?;

    let mut series = ErrorSeries::default();
    for entry in &run.snapshots {
        let Some(e) = et.snapshots.iter().find(|e| (e.t - entry.t).abs() <= 1e-9 * entry.t.abs().max(1.0)) else {
            log::warn!("no etalon snapshot at t = {}", entry.t);
            continue;
        };
        let (mut u, mut p1, mut p2) = run.load(entry)?;
        if let Some(tr) = &transfer {
            u = tr.vector(&run.dofs_u, &u);
            p1 = tr.scalar(&run.dofs_p, &p1);
            p2 = tr.scalar(&run.dofs_p, &p2);
        }
        let (ue, p1e, p2e) = et.load(e)?;
        series.push(
            entry.t,
            [field_error(&u, &ue, &mass_u)?, field_error(&p1, &p1e, &mass_p)?, field_error(&p2, &p2e, &mass_p)?],
        );
    }
    if series.is_empty() {
        return Err(Error::Incompatible("no snapshot times in common".into()));
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::MaterialParams;
    use crate::mesh::{generate_unit_square, MeshSpec};
    use crate::system::{build_system, BcLayout};
    use proptest::prelude::*;

    fn ops() -> SystemOperators {
        let mesh = generate_unit_square(&MeshSpec::new(4, 1.5)).unwrap();
        build_system(&mesh, &MaterialParams::parameter_set(1).unwrap(), BcLayout::default()).unwrap()
    }

    fn state(ops: &SystemOperators, s: f64) -> State {
        State {
            n: 0,
            t: 0.0,
            u: ops.dofs_u.interpolate_vector(|p| [s * 1e-6 * p[0] * p[1], -s * 1e-6 * p[1]]),
            p: [
                ops.dofs_p.interpolate_scalar(|p| s * 1e3 * p[0]),
                ops.dofs_p.interpolate_scalar(|p| s * 2e3 * (1.0 - p[1])),
            ],
            p_prev: None,
            split_consistent: false,
        }
    }

    #[test]
    fn two_level_energy_is_quadratic() {
        let ops = ops();
        assert_eq!(energy_two_level(&ops, &state(&ops, 0.0)), 0.0);
        let e1 = energy_two_level(&ops, &state(&ops, 1.0));
        let e2 = energy_two_level(&ops, &state(&ops, 2.0));
        assert!(e1 > 0.0);
        assert!((e2 - 4.0 * e1).abs() <= 1e-12 * e2);
    }

    #[test]
    fn two_level_energy_matches_dense_oracle() {
        let ops = ops();
        let s = state(&ops, 1.0);
        let q = |m: &CsrMatrix, x: &[f64]| {
            let d = m.to_dense();
            let v = nalgebra::DVector::from_column_slice(x);
            (v.transpose() * d * &v)[(0, 0)]
        };
        let dense = q(&ops.a, &s.u) + q(&ops.c[0], &s.p[0]) + q(&ops.c[1], &s.p[1]);
        assert!((energy_two_level(&ops, &s) - dense).abs() <= 1e-12 * dense);
    }

    #[test]
    fn three_level_energy_degenerate_cases() {
        let ops = ops();
        let opts = SolverOptions::with_tol(1e-12);
        let zero = [vec![0.0; ops.np()], vec![0.0; ops.np()]];
        assert_eq!(energy_three_level(&ops, &zero, &zero, 0.01, 1.0, SchemeKind::Incomplete, &opts).unwrap(), 0.0);
        let p = state(&ops, 1.0).p;
        let e = energy_three_level(&ops, &p, &p, 0.01, 1.0, SchemeKind::Full, &opts).unwrap();
        let bp = pair_dot(&ops.apply_block_b(&p), &p);
        assert!((e - bp).abs() <= 1e-14 * bp);
    }

    #[test]
    fn constant_pressure_has_unit_l2_norm() {
        let ops = ops();
        let one = vec![1.0; ops.np()];
        let zero = vec![0.0; ops.np()];
        assert!((field_error(&one, &zero, &ops.mass).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(field_error(&one, &one, &ops.mass).unwrap(), 0.0);
        assert!(field_error(&one, &zero[1..], &ops.mass).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn field_error_is_a_metric(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let ops = ops();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut v = || (0..ops.np()).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
            let (a, b, c) = (v(), v(), v());
            let d = |x: &[f64], y: &[f64]| field_error(x, y, &ops.mass).unwrap();
            prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-12 * d(&a, &b));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        }
    }

    #[test]
    fn transfer_onto_refined_mesh_is_exact_for_element_fields() {
        let coarse = generate_unit_square(&MeshSpec::new(3, 1.0)).unwrap();
        let fine = generate_unit_square(&MeshSpec::new(7, 2.0)).unwrap();
        let (cu, cp) = (DofMap::new(&coarse, SpaceKind::P2Vector), DofMap::new(&coarse, SpaceKind::P1Scalar));
        let (fu, fp) = (DofMap::new(&fine, SpaceKind::P2Vector), DofMap::new(&fine, SpaceKind::P1Scalar));
        let tr = FieldTransfer::new(&coarse, &fu, &fp).unwrap();
        let u = tr.vector(&cu, &cu.interpolate_vector(|p| [p[0] * p[0], p[0] * p[1] - p[1]]));
        let expect = fu.interpolate_vector(|p| [p[0] * p[0], p[0] * p[1] - p[1]]);
        assert!(u.iter().zip(&expect).all(|(a, b)| (a - b).abs() < 1e-12));
        let p = tr.scalar(&cp, &cp.interpolate_scalar(|p| 3.0 * p[0] - p[1] + 1.0));
        let expect = fp.interpolate_scalar(|p| 3.0 * p[0] - p[1] + 1.0);
        assert!(p.iter().zip(&expect).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn missing_run_dir_is_reported() {
        let err = compare_trajectories(Path::new("/nonexistent/run"), Path::new("/nonexistent/etalon"), false);
        assert!(matches!(err, Err(Error::MissingFile(_))));
    }
}
