//! The assembled operator bundle with boundary conditions applied.
//!
//! Semi-discrete problem:
//!
//! ```text
//! A u + G1 p1 + G2 p2 = F(t)
//! C1 p1' + D1 u' + (B1 + γM) p1 − γM p2 = f1
//! C2 p2' + D2 u' + (B2 + γM) p2 − γM p1 = f2
//! ```
//!
//! with `D_l = α_l D0` and `G_l = −D_lᵀ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fem::{
    assemble_coupling, assemble_elasticity, assemble_pressure_stiffness, assemble_scaled_mass,
    assemble_traction_load, DofMap, FieldVector, MaterialParams, SpaceKind,
};
use crate::linalg::{cg_solve_with, vecops, CsrMatrix, IncompleteCholesky, SolveReport, SolverOptions};
use crate::mesh::{BoundaryTag, Mesh};
use crate::{Error, Result};

/// Assignment of boundary conditions to the four tagged segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcLayout {
    /// Carries the traction g(t); no-flux for both pressures.
    pub loaded: BoundaryTag,
    /// Traction-free and drained (p1 = p2 = 0).
    pub drained: BoundaryTag,
    /// u = 0, no-flux.
    pub clamped: BoundaryTag,
    /// Horizontal displacement fixed, no-flux.
    pub roller_x: BoundaryTag,
}

impl Default for BcLayout {
    /// Load on the top strip, drainage on the rest of the top side.
    fn default() -> Self {
        Self {
            loaded: BoundaryTag::G1,
            drained: BoundaryTag::G2,
            clamped: BoundaryTag::G4,
            roller_x: BoundaryTag::G3,
        }
    }
}

impl BcLayout {
    /// Variant with the roles of the strip and the rest of the top side swapped.
    pub fn equation_list() -> Self {
        Self {
            loaded: BoundaryTag::G2,
            drained: BoundaryTag::G1,
            ..Self::default()
        }
    }
}

/// Time law of the surface load: `g(t) = −amplitude · law(t) · n`.
pub type TimeLaw = fn(f64) -> f64;

pub fn sine_law(t: f64) -> f64 {
    (std::f64::consts::PI * t).sin()
}

pub fn unit_law(_t: f64) -> f64 {
    1.0
}

/// Forcing and initial data.
#[derive(Debug, Clone)]
pub struct ProblemData {
    /// Peak traction magnitude (Pa).
    pub load_amplitude: f64,
    pub load_law: TimeLaw,
    /// Discrete source vectors for the two pressure equations, scaled by
    /// `source_law(t)`. `None` means zero sources.
    pub sources: Option<[FieldVector; 2]>,
    pub source_law: TimeLaw,
    /// Initial pressures as P1 coefficients; `None` means zero.
    pub initial_pressures: Option<[FieldVector; 2]>,
}

impl Default for ProblemData {
    fn default() -> Self {
        Self {
            load_amplitude: 1.0,
            load_law: sine_law,
            sources: None,
            source_law: unit_law,
            initial_pressures: None,
        }
    }
}

impl ProblemData {
    /// No load, no sources, zero initial pressures.
    pub fn unforced() -> Self {
        Self {
            load_amplitude: 0.0,
            ..Self::default()
        }
    }

    pub fn with_initial_pressures(mut self, p1: FieldVector, p2: FieldVector) -> Self {
        self.initial_pressures = Some([p1, p2]);
        self
    }
}

#[derive(Debug, Clone)]
pub struct SystemOperators {
    pub params: MaterialParams,
    pub layout: BcLayout,
    pub dofs_u: DofMap,
    pub dofs_p: DofMap,
    /// Elasticity with u-constraints eliminated (unit diagonal).
    pub a: CsrMatrix,
    /// Incomplete Cholesky factor of `a`, the preconditioner of every
    /// elasticity solve.
    pub a_precond: IncompleteCholesky,
    /// Pressure stiffness with drained dofs eliminated (unit diagonal).
    pub b: [CsrMatrix; 2],
    /// β-scaled mass with drained dofs eliminated (unit diagonal).
    pub c: [CsrMatrix; 2],
    /// Unit P1 mass without constraints (for norms).
    pub mass: CsrMatrix,
    /// Unit vector P2 mass without constraints (for norms).
    pub mass_u: CsrMatrix,
    /// γ-scaled mass with drained rows and columns zeroed.
    pub exch: CsrMatrix,
    /// Divergence form, drained rows and constrained u-columns zeroed.
    pub d0: CsrMatrix,
    pub d: [CsrMatrix; 2],
    pub g: [CsrMatrix; 2],
    pub u_fixed: Vec<bool>,
    pub p_drained: Vec<bool>,
    /// Load vector of a unit downward traction on the loaded segment.
    pub load_unit: FieldVector,
}

fn mask(n: usize, dofs: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut m = vec![false; n];
    for d in dofs {
        m[d] = true;
    }
    m
}

pub fn build_system(mesh: &Mesh, params: &MaterialParams, layout: BcLayout) -> Result<SystemOperators> {
    params.validate()?;
    mesh.validate_topology()?;
    let dofs_u = DofMap::new(mesh, SpaceKind::P2Vector);
    let dofs_p = DofMap::new(mesh, SpaceKind::P1Scalar);
    let (nu, np) = (dofs_u.num_dofs(), dofs_p.num_dofs());

    let u_fixed = mask(
        nu,
        dofs_u
            .boundary_dofs(layout.clamped, None)
            .into_iter()
            .chain(dofs_u.boundary_dofs(layout.roller_x, Some(0))),
    );
    let p_drained = mask(np, dofs_p.boundary_dofs(layout.drained, None));
    if !p_drained.iter().any(|&x| x) {
        log::warn!("no drained pressure dofs; pressure stiffness is singular");
    }

    let a = assemble_elasticity(mesh, &dofs_u, params)?.constrain_symmetric(&u_fixed, 1.0);
    let b = [1, 2].map(|leg| assemble_pressure_stiffness(mesh, &dofs_p, params, leg));
    let [b1, b2] = b;
    let b = [b1?.constrain_symmetric(&p_drained, 1.0), b2?.constrain_symmetric(&p_drained, 1.0)];
    let mass = assemble_scaled_mass(mesh, &dofs_p, 1.0)?;
    let mass_u = assemble_scaled_mass(mesh, &dofs_u, 1.0)?;
    let c = params.beta().map(|beta| mass.scaled(beta).constrain_symmetric(&p_drained, 1.0));
    let exch = mass.scaled(params.gamma).constrain_symmetric(&p_drained, 0.0);
    let d0 = assemble_coupling(mesh, &dofs_u, &dofs_p)?.zero_rows_cols(Some(&p_drained), Some(&u_fixed));
    let d = params.alpha().map(|alpha| d0.scaled(alpha));
    let g = [d[0].transpose().scaled(-1.0), d[1].transpose().scaled(-1.0)];

    let mut load_unit = assemble_traction_load(mesh, &dofs_u, layout.loaded, [0.0, -1.0])?;
    for (f, &fixed) in load_unit.iter_mut().zip(&u_fixed) {
        if fixed {
            *f = 0.0;
        }
    }

    Ok(SystemOperators {
        params: *params,
        layout,
        dofs_u,
        dofs_p,
        a_precond: IncompleteCholesky::with_fill(&a, true)?,
        a,
        b,
        c,
        mass,
        mass_u,
        exch,
        d0,
        d,
        g,
        u_fixed,
        p_drained,
        load_unit,
    })
}

impl SystemOperators {
    pub fn nu(&self) -> usize {
        self.dofs_u.num_dofs()
    }

    pub fn np(&self) -> usize {
        self.dofs_p.num_dofs()
    }

    pub fn total_dofs(&self) -> usize {
        self.nu() + 2 * self.np()
    }

    /// `𝐆p = G1 p1 + G2 p2`.
    pub fn apply_g(&self, p: &[FieldVector; 2]) -> FieldVector {
        let mut out = vec![0.0; self.nu()];
        let mut tmp = vec![0.0; self.nu()];
        for l in 0..2 {
            self.g[l].spmv_into(&p[l], &mut tmp);
            vecops::axpy(1.0, &tmp, &mut out);
        }
        out
    }

    /// `𝐆ᵀu = (G1ᵀu, G2ᵀu) = −(D1 u, D2 u)`.
    pub fn apply_gt(&self, u: &[f64]) -> [FieldVector; 2] {
        [0, 1].map(|l| {
            let mut v = vec![0.0; self.np()];
            self.d[l].spmv_into(u, &mut v);
            v.iter_mut().for_each(|x| *x = -*x);
            v
        })
    }

    /// `𝐁 = [[B1 + γM, −γM], [−γM, B2 + γM]]`.
    pub fn block_b(&self) -> CsrMatrix {
        let b1 = self.b[0].add(&self.exch).expect("same shape");
        let b2 = self.b[1].add(&self.exch).expect("same shape");
        let e = self.exch.scaled(-1.0);
        CsrMatrix::block(&[vec![Some(&b1), Some(&e)], vec![Some(&e), Some(&b2)]]).expect("square blocks")
    }

    /// `(B_l + γM) p_l`, optionally minus `γM p_other` (the full `𝐁p`).
    fn apply_b_impl(&self, p: &[FieldVector; 2], with_exchange: bool) -> [FieldVector; 2] {
        [0, 1].map(|l| {
            let mut y = vec![0.0; self.np()];
            let mut tmp = vec![0.0; self.np()];
            self.b[l].spmv_into(&p[l], &mut y);
            self.exch.spmv_into(&p[l], &mut tmp);
            vecops::axpy(1.0, &tmp, &mut y);
            if with_exchange {
                self.exch.spmv_into(&p[1 - l], &mut tmp);
                vecops::axpy(-1.0, &tmp, &mut y);
            }
            y
        })
    }

    /// `𝐁p` without assembling the block.
    pub fn apply_block_b(&self, p: &[FieldVector; 2]) -> [FieldVector; 2] {
        self.apply_b_impl(p, true)
    }

    /// `Ã0 p = ((B1 + γM) p1, (B2 + γM) p2)`.
    pub fn apply_block_b_diag(&self, p: &[FieldVector; 2]) -> [FieldVector; 2] {
        self.apply_b_impl(p, false)
    }

    /// `𝐂p`.
    pub fn apply_block_c(&self, p: &[FieldVector; 2]) -> [FieldVector; 2] {
        [0, 1].map(|l| {
            let mut y = vec![0.0; self.np()];
            self.c[l].spmv_into(&p[l], &mut y);
            y
        })
    }

    /// `𝐂 = blockdiag(C1, C2)`.
    pub fn block_c(&self) -> CsrMatrix {
        CsrMatrix::block(&[vec![Some(&self.c[0]), None], vec![None, Some(&self.c[1])]]).expect("square blocks")
    }

    /// `Ã0 = blockdiag(B1 + γM, B2 + γM)`.
    pub fn block_b_diag(&self) -> CsrMatrix {
        let b1 = self.b[0].add(&self.exch).expect("same shape");
        let b2 = self.b[1].add(&self.exch).expect("same shape");
        CsrMatrix::block(&[vec![Some(&b1), None], vec![None, Some(&b2)]]).expect("square blocks")
    }

    /// Right-hand side of the mechanics equation at time `t`.
    pub fn load(&self, data: &ProblemData, t: f64) -> FieldVector {
        let s = data.load_amplitude * (data.load_law)(t);
        vecops::scaled(s, &self.load_unit)
    }

    /// Pressure sources at time `t`, zero on drained dofs.
    pub fn sources(&self, data: &ProblemData, t: f64) -> [FieldVector; 2] {
        match &data.sources {
            None => [vec![0.0; self.np()], vec![0.0; self.np()]],
            Some(f) => {
                let s = (data.source_law)(t);
                [0, 1].map(|l| {
                    f[l].iter()
                        .zip(&self.p_drained)
                        .map(|(v, &dr)| if dr { 0.0 } else { s * v })
                        .collect()
                })
            }
        }
    }

    /// Zeroes drained entries of a pressure pair.
    pub fn drain(&self, p: &mut [FieldVector; 2]) {
        for q in p.iter_mut() {
            for (v, &dr) in q.iter_mut().zip(&self.p_drained) {
                if dr {
                    *v = 0.0;
                }
            }
        }
    }

    /// Initial pressures from the problem data (drained entries zeroed).
    pub fn initial_pressures(&self, data: &ProblemData) -> Result<[FieldVector; 2]> {
        let mut p = match &data.initial_pressures {
            None => [vec![0.0; self.np()], vec![0.0; self.np()]],
            Some(s) => {
                if s[0].len() != self.np() || s[1].len() != self.np() {
                    return Err(Error::DimensionMismatch("initial pressures do not match the pressure space".into()));
                }
                s.clone()
            }
        };
        self.drain(&mut p);
        Ok(p)
    }

    /// Solves `A x = rhs` with preconditioned CG.
    pub fn solve_a(&self, rhs: &[f64], x0: Option<&[f64]>, opts: &SolverOptions) -> Result<(FieldVector, SolveReport)> {
        let (x, rep) = cg_solve_with(&self.a, rhs, x0, opts, &self.a_precond)?;
        if !rep.converged {
            return Err(Error::NotConverged {
                solver: "elasticity CG",
                iterations: rep.iterations,
                residual: rep.residual,
            });
        }
        Ok((x, rep))
    }
}

/// Solves `A u0 = F0 − G1 s1 − G2 s2`.
pub fn solve_initial_displacement(
    ops: &SystemOperators,
    s: &[FieldVector; 2],
    load: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<FieldVector> {
    let mut rhs = ops.apply_g(s);
    rhs.iter_mut().for_each(|x| *x = -*x);
    if let Some(f) = load {
        vecops::axpy(1.0, f, &mut rhs);
    }
    Ok(ops.solve_a(&rhs, None, opts)?.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    /// Relative symmetry defects.
    pub symmetry: Vec<NamedValue>,
    /// `max |G_l + D_lᵀ|` over both legs.
    pub adjointness_defect: f64,
    /// `|⟨𝐆p, u⟩ + ⟨p, 𝐃u⟩|` relative, on random vectors.
    pub duality_defect: f64,
    /// Smallest Rayleigh quotient over the probes, per operator.
    pub spd_probes: Vec<NamedValue>,
    pub probes_per_operator: usize,
    pub passed: bool,
}

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const DUALITY_TOL: f64 = 1e-13;

fn random_vec(rng: &mut ChaCha8Rng, n: usize, zero: Option<&[bool]>) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let v: f64 = rng.gen_range(-1.0..1.0);
            match zero {
                Some(z) if z[i] => 0.0,
                _ => v,
            }
        })
        .collect()
}

pub fn check_operator_identities(ops: &SystemOperators, probes: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let named = |name: &str, value: f64| NamedValue { name: name.into(), value };

    let symmetry = vec![
        named("A", ops.a.symmetry_defect()),
        named("B1", ops.b[0].symmetry_defect()),
        named("B2", ops.b[1].symmetry_defect()),
        named("C1", ops.c[0].symmetry_defect()),
        named("C2", ops.c[1].symmetry_defect()),
        named("M", ops.mass.symmetry_defect()),
        named("Exch", ops.exch.symmetry_defect()),
    ];

    let mut adjointness_defect: f64 = 0.0;
    for l in 0..2 {
        match ops.g[l].linear_combination(1.0, &ops.d[l].transpose(), 1.0) {
            Ok(s) => adjointness_defect = adjointness_defect.max(s.max_abs()),
            Err(_) => adjointness_defect = f64::INFINITY,
        }
    }

    let mut duality_defect: f64 = 0.0;
    for _ in 0..4 {
        let u = random_vec(&mut rng, ops.nu(), None);
        let p = [random_vec(&mut rng, ops.np(), None), random_vec(&mut rng, ops.np(), None)];
        let gp = ops.apply_g(&p);
        let lhs = vecops::dot(&gp, &u);
        // 𝐃u = −𝐆ᵀu
        let gtu = ops.apply_gt(&u);
        let rhs = -(vecops::dot(&p[0], &gtu[0]) + vecops::dot(&p[1], &gtu[1]));
        let scale = vecops::norm2(&gp) * vecops::norm2(&u);
        if scale > 0.0 {
            duality_defect = duality_defect.max((lhs + rhs).abs() / scale);
        }
    }

    let bb = ops.block_b();
    let a0 = ops.block_b_diag();
    // Ã0 − Ã1 = blockdiag(B_l + γM) + [[0, γM], [γM, 0]]
    let e = &ops.exch;
    let a0_minus_a1 = a0
        .add(&CsrMatrix::block(&[vec![None, Some(e)], vec![Some(e), None]]).expect("square"))
        .expect("same shape");
    let drained2: Vec<bool> = ops.p_drained.iter().chain(&ops.p_drained).copied().collect();
    let spd_targets: [(&str, &CsrMatrix, Option<&[bool]>, bool); 8] = [
        ("A", &ops.a, None, true),
        ("C1", &ops.c[0], None, true),
        ("C2", &ops.c[1], None, true),
        ("M", &ops.mass, None, true),
        ("B", &bb, None, true),
        ("B1+Exch", &a0, None, true),
        ("A0-A1", &a0_minus_a1, Some(&drained2), false),
        ("B1", &ops.b[0], None, true),
    ];
    let mut passed = true;
    let mut spd_probes = Vec::new();
    for (name, m, zero, strict) in spd_targets {
        let mut min = f64::INFINITY;
        for _ in 0..probes {
            let x = random_vec(&mut rng, m.nrows(), zero);
            let q = m.quadratic_form(&x) / vecops::dot(&x, &x);
            min = min.min(q);
        }
        let ok = if strict { min > 0.0 } else { min >= 0.0 };
        passed &= ok;
        spd_probes.push(named(name, min));
    }

    passed &= symmetry.iter().all(|s| s.value <= SYMMETRY_TOL);
    passed &= adjointness_defect == 0.0;
    passed &= duality_defect <= DUALITY_TOL;
    IdentityReport {
        symmetry,
        adjointness_defect,
        duality_defect,
        spd_probes,
        probes_per_operator: probes,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dense_solve, DenseMatrix};
    use crate::mesh::{generate_unit_square, MeshSpec};

    fn tiny(params: MaterialParams) -> SystemOperators {
        let mesh = generate_unit_square(&MeshSpec::new(4, 1.5)).unwrap();
        build_system(&mesh, &params, BcLayout::default()).unwrap()
    }

    fn set1() -> MaterialParams {
        MaterialParams::parameter_set(1).unwrap()
    }

    #[test]
    fn zero_gamma_gives_block_diagonal_b() {
        let ops = tiny(MaterialParams { gamma: 0.0, ..set1() });
        assert_eq!(ops.exch.max_abs(), 0.0);
        let b = ops.block_b().to_dense();
        let np = ops.np();
        assert_eq!(b.view((0, np), (np, np)).amax(), 0.0);
    }

    #[test]
    fn zero_alpha_decouples() {
        let ops = tiny(MaterialParams { alpha1: 0.0, alpha2: 0.0, ..set1() });
        for l in 0..2 {
            assert_eq!(ops.d[l].max_abs(), 0.0);
            assert_eq!(ops.g[l].max_abs(), 0.0);
        }
    }

    #[test]
    fn block_b_matches_dense_reassembly() {
        let p = set1();
        let ops = tiny(p);
        let mesh = generate_unit_square(&MeshSpec::new(4, 1.5)).unwrap();
        let dp = DofMap::new(&mesh, SpaceKind::P1Scalar);
        let np = dp.num_dofs();
        let raw_m = assemble_scaled_mass(&mesh, &dp, 1.0).unwrap().to_dense();
        let mut dense = DenseMatrix::zeros(2 * np, 2 * np);
        for l in 0..2 {
            let raw_b = assemble_pressure_stiffness(&mesh, &dp, &p, l + 1).unwrap().to_dense();
            for i in 0..np {
                for j in 0..np {
                    let (di, dj) = (ops.p_drained[i], ops.p_drained[j]);
                    let bij = if di || dj {
                        if i == j { 1.0 } else { 0.0 }
                    } else {
                        raw_b[(i, j)] + p.gamma * raw_m[(i, j)]
                    };
                    dense[(l * np + i, l * np + j)] = bij;
                    if !(di || dj) {
                        dense[(l * np + i, (1 - l) * np + j)] = -p.gamma * raw_m[(i, j)];
                    }
                }
            }
        }
        let diff = (ops.block_b().to_dense() - &dense).amax();
        assert!(diff <= 1e-15 * dense.amax(), "diff {diff}");
    }

    #[test]
    fn identities_hold_on_all_sets() {
        for set in 1..=3 {
            let ops = tiny(MaterialParams::parameter_set(set).unwrap());
            let r = check_operator_identities(&ops, 32, 7);
            assert!(r.passed, "{r:?}");
            assert_eq!(r.adjointness_defect, 0.0);
        }
    }

    #[test]
    fn nonsymmetric_perturbation_is_flagged() {
        let mut ops = tiny(set1());
        let mut t = crate::linalg::TripletBuilder::new(ops.np(), ops.np());
        t.push(3, 5, 1e-3 * ops.b[0].max_abs());
        ops.b[0] = ops.b[0].add(&t.build()).unwrap();
        let r = check_operator_identities(&ops, 32, 7);
        assert!(!r.passed);
        assert!(r.symmetry[1].value > SYMMETRY_TOL);
    }

    #[test]
    fn initial_displacement() {
        let ops = tiny(set1());
        let opts = SolverOptions::with_tol(1e-12);
        let zero = [vec![0.0; ops.np()], vec![0.0; ops.np()]];
        let f0 = ops.load(&ProblemData::default(), 0.0);
        let u = solve_initial_displacement(&ops, &zero, Some(&f0), &opts).unwrap();
        assert!(u.iter().all(|&x| x == 0.0));

        let mut s = [
            ops.dofs_p.interpolate_scalar(|p| 1e3 * (1.0 - p[1]) * p[0]),
            ops.dofs_p.interpolate_scalar(|p| -5e2 * p[1]),
        ];
        ops.drain(&mut s);
        let u1 = solve_initial_displacement(&ops, &s, None, &opts).unwrap();
        let s2 = [vecops::scaled(2.0, &s[0]), vecops::scaled(2.0, &s[1])];
        let u2 = solve_initial_displacement(&ops, &s2, None, &opts).unwrap();
        let scale = vecops::max_abs(&u1);
        assert!(scale > 0.0);
        assert!(u1.iter().zip(&u2).all(|(a, b)| (2.0 * a - b).abs() <= 1e-9 * scale));

        let mut rhs = ops.apply_g(&s);
        rhs.iter_mut().for_each(|x| *x = -*x);
        let dense = dense_solve(&ops.a.to_dense(), &rhs).unwrap();
        let err = vecops::norm2(&vecops::sub(&dense, &u1)) / vecops::norm2(&dense);
        assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn load_is_zero_at_t0_and_totals_strip_length() {
        let ops = tiny(set1());
        let data = ProblemData::default();
        assert!(ops.load(&data, 0.0).iter().all(|&x| x == 0.0));
        let fy: f64 = ops.load(&data, 0.5).iter().skip(1).step_by(2).sum();
        assert!((fy + 0.2).abs() < 1e-10);
    }
}
