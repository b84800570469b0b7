//! Every scheme against direct dense solves of its defining equations.

mod common;

use common::{ops, random_pressures, rel_diff, DenseOracle, DenseState};
use pspl::schemes::{init_state, Integrator, SchemeConfig, SchemeKind, State};
use pspl::system::{ProblemData, SystemOperators};

fn data(ops: &SystemOperators) -> ProblemData {
    let [p1, p2] = random_pressures(ops.np(), 11, 1e3);
    let src = random_pressures(ops.np(), 12, 1e-9);
    ProblemData { sources: Some(src), ..ProblemData::default().with_initial_pressures(p1, p2) }
}

fn diff(s: &State, d: &DenseState) -> f64 {
    rel_diff(&s.u, &d.u).max(rel_diff(&s.p[0], &d.p[0])).max(rel_diff(&s.p[1], &d.p[1]))
}

fn cfg(kind: SchemeKind, theta: f64) -> SchemeConfig {
    SchemeConfig { tol: 1e-10, ..SchemeConfig::new(kind, theta, 0.01, 0.2) }
}

#[test]
fn mesh_is_small() {
    assert!(ops(4, 1).total_dofs() <= 300);
}

#[test]
fn one_step_each_scheme() {
    let ops = ops(4, 1);
    let data = data(&ops);
    let oracle = DenseOracle::new(&ops, &data);
    let d0 = oracle.initial();
    for kind in SchemeKind::ALL {
        let c = cfg(kind, 1.3);
        let mut integ = Integrator::new(&ops, &data, c).unwrap();
        let s0 = init_state(&ops, &data, &Default::default()).unwrap();
        assert!(diff(&s0, &d0) <= 1e-8);
        let s1 = integ.step(&s0).unwrap();
        let d1 = match kind {
            SchemeKind::Coupled => oracle.coupled(&d0, 1.3, c.tau),
            _ => oracle.bootstrap(&d0, c.tau),
        };
        assert!(diff(&s1, &d1) <= 1e-8, "{kind} first step: {:e}", diff(&s1, &d1));
        if kind.is_split() {
            let s2 = integ.step(&s1).unwrap();
            let d2 = oracle.split(&d1, kind, 1.3, c.tau);
            assert!(diff(&s2, &d2) <= 1e-8, "{kind} split step: {:e}", diff(&s2, &d2));
        }
    }
}

#[test]
fn twenty_step_trajectories() {
    for set in [1, 3] {
        let ops = ops(4, set);
        let data = data(&ops);
        let oracle = DenseOracle::new(&ops, &data);
        for (kind, theta) in [(SchemeKind::Coupled, 0.5), (SchemeKind::Coupled, 1.0), (SchemeKind::Incomplete, 1.9), (SchemeKind::Full, 1.9)] {
            let c = cfg(kind, theta);
            let mut integ = Integrator::new(&ops, &data, c).unwrap();
            let mut s = integ.init().unwrap();
            let mut d = oracle.initial();
            for n in 1..=20 {
                s = integ.step(&s).unwrap();
                d = match kind {
                    SchemeKind::Coupled => oracle.coupled(&d, theta, c.tau),
                    _ if n == 1 => oracle.bootstrap(&d, c.tau),
                    _ => oracle.split(&d, kind, theta, c.tau),
                };
                assert!((s.t - d.t).abs() < 1e-14);
                assert!(diff(&s, &d) <= 1e-7, "set {set} {kind} θ={theta} step {n}: {:e}", diff(&s, &d));
            }
        }
    }
}

#[test]
fn no_exchange_makes_splittings_agree() {
    // γ = 0 decouples the pressure block, so both splittings coincide
    let mesh = pspl::mesh::generate_unit_square(&pspl::mesh::MeshSpec::new(4, 2.0)).unwrap();
    let p = pspl::fem::MaterialParams { gamma: 0.0, ..pspl::fem::MaterialParams::parameter_set(1).unwrap() };
    let ops = pspl::system::build_system(&mesh, &p, Default::default()).unwrap();
    let data = data(&ops);
    let run = |kind| {
        let mut integ = Integrator::new(&ops, &data, cfg(kind, 1.9)).unwrap();
        let mut s = integ.init().unwrap();
        for _ in 0..5 {
            s = integ.step(&s).unwrap();
        }
        s
    };
    let (a, b) = (run(SchemeKind::Incomplete), run(SchemeKind::Full));
    let d = rel_diff(&a.p[0], &b.p[0]).max(rel_diff(&a.p[1], &b.p[1])).max(rel_diff(&a.u, &b.u));
    assert!(d <= 1e-9, "{d:e}");
}
