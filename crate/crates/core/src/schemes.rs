//! Time integrators.
//!
//! * `Coupled`: two-level θ-scheme, all fields solved together each step.
//! * `Incomplete`: three-level scheme; mechanics uses the level-n pressures,
//!   then both pressures are solved together.
//! * `Full`: as `Incomplete`, but each pressure is solved separately with the
//!   exchange partner taken from level n.
//!
//! The splitting schemes start with one fully implicit coupled step.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{energy_three_level, energy_two_level, EnergyRecord};
use crate::fem::FieldVector;
use crate::linalg::{
    cg_solve, cg_solve_with, minres_solve_with, parallel_enabled, vecops, BlockDiagonal, CsrMatrix, Jacobi, Precond, SolveReport,
    SolverOptions,
};
use crate::system::{solve_initial_displacement, ProblemData, SystemOperators};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Coupled,
    Incomplete,
    Full,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [Self::Coupled, Self::Incomplete, Self::Full];

    pub fn is_split(self) -> bool {
        self != Self::Coupled
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Coupled => "coupled",
            Self::Incomplete => "incomplete",
            Self::Full => "full",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coupled" => Ok(Self::Coupled),
            "incomplete" => Ok(Self::Incomplete),
            "full" => Ok(Self::Full),
            _ => Err(Error::InvalidArgument(format!(
                "unknown scheme '{s}' (expected coupled, incomplete or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub theta: f64,
    pub tau: f64,
    pub t_end: f64,
    /// Relative tolerance of every linear solve.
    pub tol: f64,
    /// Evaluate the three-level energy each step (one extra elasticity solve).
    pub monitor_energy: bool,
    /// Snapshot every this many steps (plus the first and last level).
    pub snapshot_every: usize,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            kind: SchemeKind::Coupled,
            theta: 1.0,
            tau: 0.0025,
            t_end: 1.0,
            tol: 1e-10,
            monitor_energy: false,
            snapshot_every: 10,
        }
    }
}

impl SchemeConfig {
    pub fn new(kind: SchemeKind, theta: f64, tau: f64, t_end: f64) -> Self {
        Self { kind, theta, tau, t_end, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.t_end >= self.tau) {
            return Err(Error::InvalidArgument(format!(
                "t_end ({}) must be at least tau ({})",
                self.t_end, self.tau
            )));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidArgument(format!("theta must be >= 0, got {}", self.theta)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidArgument(format!("solver tolerance must lie in (0, 1), got {}", self.tol)));
        }
        Ok(())
    }

    /// `⌈t_end / τ⌉`, ignoring round-off just above an integer.
    pub fn num_steps(&self) -> usize {
        let r = self.t_end / self.tau;
        let n = r.round();
        if (r - n).abs() <= 1e-9 * r.max(1.0) {
            n as usize
        } else {
            r.ceil() as usize
        }
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions::with_tol(self.tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub n: usize,
    pub t: f64,
    pub u: FieldVector,
    pub p: [FieldVector; 2],
    /// Level n−1 pressures; present once a splitting scheme has taken a step.
    pub p_prev: Option<[FieldVector; 2]>,
    /// Whether `u` solves `A u = F(tⁿ) − 𝐆pⁿ⁻¹`, as the splitting recursion
    /// produces. After the bootstrap step it does not, and the next split
    /// step recomputes that displacement.
    pub split_consistent: bool,
}

impl State {
    pub fn is_finite(&self) -> bool {
        vecops::all_finite(&self.u)
            && self.p.iter().all(|p| vecops::all_finite(p))
            && self.p_prev.as_ref().is_none_or(|q| q.iter().all(|p| vecops::all_finite(p)))
    }
}

/// Level-0 state: `p⁰ = s` and `u⁰` from the mechanics equation at t = 0.
pub fn init_state(ops: &SystemOperators, data: &ProblemData, opts: &SolverOptions) -> Result<State> {
    let p = ops.initial_pressures(data)?;
    let f0 = ops.load(data, 0.0);
    let u = solve_initial_displacement(ops, &p, Some(&f0), opts)?;
    Ok(State { n: 0, t: 0.0, u, p, p_prev: None, split_consistent: false })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub elasticity_solves: usize,
    pub elasticity_iterations: usize,
    pub pressure_solves: usize,
    pub pressure_iterations: usize,
    pub coupled_solves: usize,
    pub coupled_iterations: usize,
    pub max_residual: f64,
}

impl SolverStats {
    fn record(&mut self, which: Solve, rep: &SolveReport) {
        let (solves, iters) = match which {
            Solve::Elasticity => (&mut self.elasticity_solves, &mut self.elasticity_iterations),
            Solve::Pressure => (&mut self.pressure_solves, &mut self.pressure_iterations),
            Solve::Coupled => (&mut self.coupled_solves, &mut self.coupled_iterations),
        };
        *solves += 1;
        *iters += rep.iterations;
        self.max_residual = self.max_residual.max(rep.residual);
    }
}

#[derive(Clone, Copy)]
enum Solve {
    Elasticity,
    Pressure,
    Coupled,
}

fn require(rep: SolveReport, solver: &'static str) -> Result<SolveReport> {
    if rep.converged {
        Ok(rep)
    } else {
        Err(Error::NotConverged { solver, iterations: rep.iterations, residual: rep.residual })
    }
}

fn concat(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

/// Steps a problem forward, caching the per-(θ, τ) system matrices.
pub struct Integrator<'a> {
    ops: &'a SystemOperators,
    data: &'a ProblemData,
    cfg: SchemeConfig,
    opts: SolverOptions,
    coupled: Option<(f64, CsrMatrix, Jacobi)>,
    pressure_block: Option<CsrMatrix>,
    legs: Option<[CsrMatrix; 2]>,
    pub stats: SolverStats,
}

impl<'a> Integrator<'a> {
    pub fn new(ops: &'a SystemOperators, data: &'a ProblemData, cfg: SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            ops,
            data,
            cfg,
            opts: cfg.solver_options(),
            coupled: None,
            pressure_block: None,
            legs: None,
            stats: SolverStats::default(),
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn init(&mut self) -> Result<State> {
        let s = init_state(self.ops, self.data, &self.opts)?;
        self.stats.elasticity_solves += 1;
        Ok(s)
    }

    /// Advances by one level with the configured scheme; splitting schemes
    /// bootstrap from level 0.
    pub fn step(&mut self, state: &State) -> Result<State> {
        match self.cfg.kind {
            SchemeKind::Coupled => self.step_coupled(state, self.cfg.theta),
            _ if state.p_prev.is_none() => self.bootstrap(state),
            SchemeKind::Incomplete => self.step_split(state, false),
            SchemeKind::Full => self.step_split(state, true),
        }
    }

    /// `[[A, G1, G2], [G1ᵀ, −(C1 + θτ(B1+γM)), θτγM], [G2ᵀ, θτγM, −(C2 + θτ(B2+γM))]]`
    fn coupled_matrix(&mut self, theta: f64) -> (&CsrMatrix, &Jacobi) {
        let stale = !matches!(&self.coupled, Some((th, ..)) if *th == theta);
        if stale {
            let ops = self.ops;
            let s = theta * self.cfg.tau;
            let diag = |l: usize| {
                ops.c[l]
                    .linear_combination(1.0, &ops.b[l].add(&ops.exch).expect("same shape"), s)
                    .expect("same shape")
                    .scaled(-1.0)
            };
            let (p11, p22) = (diag(0), diag(1));
            let off = ops.exch.scaled(s);
            let gt = [ops.g[0].transpose(), ops.g[1].transpose()];
            let k = CsrMatrix::block(&[
                vec![Some(&ops.a), Some(&ops.g[0]), Some(&ops.g[1])],
                vec![Some(&gt[0]), Some(&p11), Some(&off)],
                vec![Some(&gt[1]), Some(&off), Some(&p22)],
            ])
            .expect("consistent blocks");
            let jac = Jacobi::from_diagonal(&k.diagonal()[ops.nu()..]);
            self.coupled = Some((theta, k, jac));
        }
        let (_, k, jac) = self.coupled.as_ref().expect("just built");
        (k, jac)
    }

    pub fn step_coupled(&mut self, state: &State, theta: f64) -> Result<State> {
        let ops = self.ops;
        let (nu, np) = (ops.nu(), ops.np());
        let tau = self.cfg.tau;
        let t_next = state.t + tau;
        let f = ops.sources(self.data, state.t + theta * tau);
        let gtu = ops.apply_gt(&state.u);
        let bp = ops.apply_block_b(&state.p);
        let mut rhs = ops.load(self.data, t_next);
        rhs.reserve(2 * np);
        for l in 0..2 {
            let cp = ops.c[l].spmv(&state.p[l])?;
            for i in 0..np {
                let v = tau * f[l][i] + cp[i] - gtu[l][i] - (1.0 - theta) * tau * bp[l][i];
                rhs.push(-v);
            }
        }
        let mut x0 = state.u.clone();
        x0.extend_from_slice(&state.p[0]);
        x0.extend_from_slice(&state.p[1]);
        let opts = self.opts;
        let (k, jac) = self.coupled_matrix(theta);
        let pc = BlockDiagonal::new(vec![(0..nu, &ops.a_precond as &dyn Precond), (nu..nu + 2 * np, jac)])?;
        let (x, rep) = minres_solve_with(k, &rhs, Some(&x0), &opts, &pc)?;
        let rep = require(rep, "coupled MINRES")?;
        self.stats.record(Solve::Coupled, &rep);
        let mut p = [x[nu..nu + np].to_vec(), x[nu + np..].to_vec()];
        ops.drain(&mut p);
        Ok(State {
            n: state.n + 1,
            t: t_next,
            u: x[..nu].to_vec(),
            p,
            p_prev: state.p_prev.clone(),
            split_consistent: false,
        })
    }

    /// Fully implicit coupled step from level 0; fills in `p_prev`.
    pub fn bootstrap(&mut self, state0: &State) -> Result<State> {
        let mut s = self.step_coupled(state0, 1.0)?;
        s.p_prev = Some(state0.p.clone());
        s.split_consistent = false;
        Ok(s)
    }

    fn solve_elasticity(&mut self, rhs: &[f64], x0: &[f64]) -> Result<FieldVector> {
        let (x, rep) = cg_solve_with(&self.ops.a, rhs, Some(x0), &self.opts, &self.ops.a_precond)?;
        let rep = require(rep, "elasticity CG")?;
        self.stats.record(Solve::Elasticity, &rep);
        Ok(x)
    }

    /// `u = A⁻¹(F(t) − 𝐆p)`.
    fn mechanics(&mut self, p: &[FieldVector; 2], t: f64, x0: &[f64]) -> Result<FieldVector> {
        let mut rhs = self.ops.load(self.data, t);
        vecops::axpy(-1.0, &self.ops.apply_g(p), &mut rhs);
        self.solve_elasticity(&rhs, x0)
    }

    fn step_split(&mut self, state: &State, full: bool) -> Result<State> {
        let ops = self.ops;
        let prev = state
            .p_prev
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("splitting step needs level n-1 pressures".into()))?;
        let (theta, tau) = (self.cfg.theta, self.cfg.tau);
        let t_next = state.t + tau;
        let u_lag = if state.split_consistent {
            state.u.clone()
        } else {
            self.mechanics(prev, state.t, &state.u)?
        };
        let u = self.mechanics(&state.p, t_next, &state.u)?;
        let du = vecops::sub(&u, &u_lag);
        let gtdu = ops.apply_gt(&du);
        let f = ops.sources(self.data, t_next);
        // τf + θCpⁿ − (1−θ)C(pⁿ − pⁿ⁻¹) + Gᵀ(uⁿ⁺¹ − uⁿ)
        let mut rhs: [FieldVector; 2] = [0, 1].map(|l| {
            let cp = ops.c[l].spmv(&state.p[l]).expect("sizes");
            let cdp = ops.c[l].spmv(&vecops::sub(&state.p[l], &prev[l])).expect("sizes");
            (0..ops.np())
                .map(|i| tau * f[l][i] + theta * cp[i] - (1.0 - theta) * cdp[i] + gtdu[l][i])
                .collect()
        });
        let mut p = if full {
            for l in 0..2 {
                let ep = ops.exch.spmv(&state.p[1 - l])?;
                vecops::axpy(tau, &ep, &mut rhs[l]);
            }
            self.solve_legs(&rhs, &state.p)?
        } else {
            self.solve_pressure_block(&rhs, &state.p)?
        };
        ops.drain(&mut p);
        Ok(State {
            n: state.n + 1,
            t: t_next,
            u,
            p,
            p_prev: Some(state.p.clone()),
            split_consistent: true,
        })
    }

    /// `(θ𝐂 + τ𝐁) p = rhs`.
    fn solve_pressure_block(&mut self, rhs: &[FieldVector; 2], guess: &[FieldVector; 2]) -> Result<[FieldVector; 2]> {
        let np = self.ops.np();
        if self.pressure_block.is_none() {
            let m = self
                .ops
                .block_c()
                .linear_combination(self.cfg.theta, &self.ops.block_b(), self.cfg.tau)?;
            self.pressure_block = Some(m);
        }
        let m = self.pressure_block.as_ref().expect("just built");
        let (x, rep) = cg_solve(m, &concat(&rhs[0], &rhs[1]), Some(&concat(&guess[0], &guess[1])), &self.opts)?;
        let rep = require(rep, "pressure CG")?;
        self.stats.record(Solve::Pressure, &rep);
        Ok([x[..np].to_vec(), x[np..].to_vec()])
    }

    /// `(θC_l + τ(B_l + γM)) p_l = rhs_l`, the two legs independently.
    fn solve_legs(&mut self, rhs: &[FieldVector; 2], guess: &[FieldVector; 2]) -> Result<[FieldVector; 2]> {
        if self.legs.is_none() {
            let ops = self.ops;
            let leg = |l: usize| -> Result<CsrMatrix> {
                ops.c[l].linear_combination(self.cfg.theta, &ops.b[l].add(&ops.exch)?, self.cfg.tau)
            };
            self.legs = Some([leg(0)?, leg(1)?]);
        }
        let legs = self.legs.as_ref().expect("just built");
        let opts = self.opts;
        let solve = |l: usize| cg_solve(&legs[l], &rhs[l], Some(&guess[l]), &opts);
        let (r0, r1) = if parallel_enabled() {
            rayon::join(|| solve(0), || solve(1))
        } else {
            (solve(0), solve(1))
        };
        let mut out: [FieldVector; 2] = Default::default();
        for (l, r) in [r0, r1].into_iter().enumerate() {
            let (x, rep) = r?;
            let rep = require(rep, "pressure CG")?;
            self.stats.record(Solve::Pressure, &rep);
            out[l] = x;
        }
        Ok(out)
    }
}

/// One coupled θ-step.
pub fn step_coupled(ops: &SystemOperators, data: &ProblemData, cfg: &SchemeConfig, state: &State) -> Result<State> {
    Integrator::new(ops, data, *cfg)?.step_coupled(state, cfg.theta)
}

/// One incomplete-splitting step (needs `p_prev`).
pub fn step_incomplete(ops: &SystemOperators, data: &ProblemData, cfg: &SchemeConfig, state: &State) -> Result<State> {
    Integrator::new(ops, data, *cfg)?.step_split(state, false)
}

/// One full-splitting step (needs `p_prev`).
pub fn step_full(ops: &SystemOperators, data: &ProblemData, cfg: &SchemeConfig, state: &State) -> Result<State> {
    Integrator::new(ops, data, *cfg)?.step_split(state, true)
}

/// Level-1 state of the splitting schemes: the coupled step with θ = 1.
pub fn bootstrap_first_step(ops: &SystemOperators, data: &ProblemData, cfg: &SchemeConfig, state0: &State) -> Result<State> {
    Integrator::new(ops, data, *cfg)?.bootstrap(state0)
}

/// Receives snapshots and energy records during [`run`].
pub trait Sink {
    fn snapshot(&mut self, _ops: &SystemOperators, _state: &State) -> Result<()> {
        Ok(())
    }

    fn energy(&mut self, _record: &EnergyRecord) -> Result<()> {
        Ok(())
    }
}

/// Keeps every state in memory.
#[derive(Debug, Default)]
pub struct TrajectoryRecorder {
    pub states: Vec<State>,
    pub energies: Vec<EnergyRecord>,
}

impl Sink for TrajectoryRecorder {
    fn snapshot(&mut self, _ops: &SystemOperators, state: &State) -> Result<()> {
        self.states.push(state.clone());
        Ok(())
    }

    fn energy(&mut self, record: &EnergyRecord) -> Result<()> {
        self.energies.push(*record);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RunStatus {
    Completed,
    Diverged { step: usize, reason: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub init_s: f64,
    pub stepping_s: f64,
    pub diagnostics_s: f64,
    pub output_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub kind: SchemeKind,
    pub theta: f64,
    pub tau: f64,
    pub t_end: f64,
    pub steps_requested: usize,
    pub steps_completed: usize,
    pub final_t: f64,
    #[serde(flatten)]
    pub status: RunStatus,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub max_energy: f64,
    pub divergence_threshold: f64,
    pub final_norms: FinalNorms,
    pub solver: SolverStats,
    pub timings: PhaseTimes,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct FinalNorms {
    /// Mass-weighted L2 norms.
    pub u: f64,
    pub p1: f64,
    pub p2: f64,
}

impl RunSummary {
    pub fn diverged(&self) -> bool {
        matches!(self.status, RunStatus::Diverged { .. })
    }
}

/// Two-level energy growth factor above which a run is declared diverged.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// Relative slack of the per-step monotonicity flag.
pub fn monotone_slack(kind: SchemeKind) -> f64 {
    if kind.is_split() {
        1e-8
    } else {
        1e-10
    }
}

/// Energy scale of the peak load, `F̂ᵀA⁻¹F̂`.
fn forcing_energy(ops: &SystemOperators, data: &ProblemData, opts: &SolverOptions) -> Result<f64> {
    if data.load_amplitude == 0.0 {
        return Ok(0.0);
    }
    let f = vecops::scaled(data.load_amplitude, &ops.load_unit);
    let (x, _) = ops.solve_a(&f, None, opts)?;
    Ok(vecops::dot(&f, &x))
}

fn l2(m: &CsrMatrix, x: &[f64]) -> f64 {
    m.quadratic_form(x).max(0.0).sqrt()
}

/// Runs from level 0 to `t_end`, reporting to `sink`. Divergence (non-finite
/// fields or energy growth beyond [`DIVERGENCE_FACTOR`]) stops the run and is
/// recorded in the summary rather than returned as an error.
pub fn run(ops: &SystemOperators, data: &ProblemData, cfg: &SchemeConfig, sink: &mut dyn Sink) -> Result<RunSummary> {
    let mut integ = Integrator::new(ops, data, *cfg)?;
    let opts = cfg.solver_options();
    let steps = cfg.num_steps();
    let every = cfg.snapshot_every.max(1);

    let clock = Instant::now();
    let mut state = integ.init()?;
    let e0 = energy_two_level(ops, &state);
    let threshold = DIVERGENCE_FACTOR * (e0 + forcing_energy(ops, data, &opts)?);
    let mut times = PhaseTimes { init_s: clock.elapsed().as_secs_f64(), stepping_s: 0.0, diagnostics_s: 0.0, output_s: 0.0 };

    let clock = Instant::now();
    sink.snapshot(ops, &state)?;
    sink.energy(&EnergyRecord { n: 0, t: 0.0, two_level: e0, three_level: None, monotone: true })?;
    times.output_s += clock.elapsed().as_secs_f64();

    let slack = monotone_slack(cfg.kind);
    let mut status = RunStatus::Completed;
    let mut last = (e0, None::<f64>);
    let mut max_energy = e0;
    for _ in 0..steps {
        let clock = Instant::now();
        let next = match integ.step(&state) {
            Ok(s) => s,
            Err(Error::NonFinite(what)) => {
                status = RunStatus::Diverged { step: state.n + 1, reason: format!("non-finite values in {what}") };
                break;
            }
            Err(e) => return Err(e),
        };
        times.stepping_s += clock.elapsed().as_secs_f64();
        if !next.is_finite() {
            status = RunStatus::Diverged { step: next.n, reason: "non-finite field".into() };
            break;
        }

        let clock = Instant::now();
        let two = energy_two_level(ops, &next);
        let three = match (&next.p_prev, cfg.monitor_energy && cfg.kind.is_split()) {
            (Some(prev), true) => Some(energy_three_level(ops, &next.p, prev, cfg.tau, cfg.theta, cfg.kind, &opts)?),
            _ => None,
        };
        let monotone = match (three, last.1) {
            (Some(e), Some(prev)) => e <= prev + slack * prev.abs().max(f64::MIN_POSITIVE),
            (Some(_), None) => true,
            _ => two <= last.0 + slack * last.0.abs(),
        };
        let record = EnergyRecord { n: next.n, t: next.t, two_level: two, three_level: three, monotone };
        times.diagnostics_s += clock.elapsed().as_secs_f64();
        last = (two, three);
        max_energy = max_energy.max(two);
        state = next;

        let clock = Instant::now();
        sink.energy(&record)?;
        let final_level = state.n == steps;
        if state.n % every == 0 || final_level {
            sink.snapshot(ops, &state)?;
        }
        times.output_s += clock.elapsed().as_secs_f64();

        if !two.is_finite() || two > threshold {
            status = RunStatus::Diverged {
                step: state.n,
                reason: format!("two-level energy {two:.3e} exceeds {threshold:.3e}"),
            };
            break;
        }
    }

    Ok(RunSummary {
        kind: cfg.kind,
        theta: cfg.theta,
        tau: cfg.tau,
        t_end: cfg.t_end,
        steps_requested: steps,
        steps_completed: state.n,
        final_t: state.t,
        status,
        initial_energy: e0,
        final_energy: last.0,
        max_energy,
        divergence_threshold: threshold,
        final_norms: FinalNorms {
            u: l2(&ops.mass_u, &state.u),
            p1: l2(&ops.mass, &state.p[0]),
            p2: l2(&ops.mass, &state.p[1]),
        },
        solver: integ.stats,
        timings: times,
    })
}
