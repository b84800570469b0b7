#![allow(dead_code)]

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pspl::fem::{FieldVector, MaterialParams};
use pspl::linalg::{dense_solve, DenseMatrix};
use pspl::mesh::{generate_unit_square, MeshSpec};
use pspl::schemes::SchemeKind;
use pspl::system::{build_system, BcLayout, ProblemData, SystemOperators};

pub fn ops(res: usize, set: u8) -> SystemOperators {
    let mesh = generate_unit_square(&MeshSpec::new(res, 2.0)).unwrap();
    build_system(&mesh, &MaterialParams::parameter_set(set).unwrap(), BcLayout::default()).unwrap()
}

pub fn random_pressures(np: usize, seed: u64, scale: f64) -> [FieldVector; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [0, 1].map(|_| (0..np).map(|_| scale * rng.gen_range(-1.0..1.0)).collect())
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Everything in dense form, stepping by direct solves of the textbook
/// formulas.
pub struct DenseOracle<'a> {
    pub ops: &'a SystemOperators,
    pub data: &'a ProblemData,
    a: DenseMatrix,
    g: [DenseMatrix; 2],
    c: [DenseMatrix; 2],
    b: [DenseMatrix; 2],
    e: DenseMatrix,
}

#[derive(Debug, Clone)]
pub struct DenseState {
    pub t: f64,
    pub u: Vec<f64>,
    pub p: [Vec<f64>; 2],
    pub p_prev: Option<[Vec<f64>; 2]>,
}

/// Dense LU on the symmetrically equilibrated system `D K D y = D b`,
/// `D = |diag K|^{-1/2}`, so blocks of very different scale do not trip the
/// singularity check.
pub fn equilibrated_solve(k: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let d: Vec<f64> = (0..k.nrows()).map(|i| 1.0 / k[(i, i)].abs().sqrt()).collect();
    let ks = DenseMatrix::from_fn(k.nrows(), k.ncols(), |i, j| d[i] * k[(i, j)] * d[j]);
    let bs: Vec<f64> = b.iter().zip(&d).map(|(x, di)| x * di).collect();
    let y = dense_solve(&ks, &bs).unwrap();
    y.iter().zip(&d).map(|(x, di)| x * di).collect()
}

fn v(x: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(x)
}

impl<'a> DenseOracle<'a> {
    pub fn new(ops: &'a SystemOperators, data: &'a ProblemData) -> Self {
        Self {
            ops,
            data,
            a: ops.a.to_dense(),
            g: [ops.g[0].to_dense(), ops.g[1].to_dense()],
            c: [ops.c[0].to_dense(), ops.c[1].to_dense()],
            b: [ops.b[0].to_dense(), ops.b[1].to_dense()],
            e: ops.exch.to_dense(),
        }
    }

    fn drain(&self, p: &mut [Vec<f64>; 2]) {
        for q in p.iter_mut() {
            for (x, &d) in q.iter_mut().zip(&self.ops.p_drained) {
                if d {
                    *x = 0.0;
                }
            }
        }
    }

    /// u = A⁻¹(F(t) − G1 p1 − G2 p2)
    pub fn mechanics(&self, p: &[Vec<f64>; 2], t: f64) -> Vec<f64> {
        let rhs = v(&self.ops.load(self.data, t)) - &self.g[0] * v(&p[0]) - &self.g[1] * v(&p[1]);
        equilibrated_solve(&self.a, rhs.as_slice())
    }

    pub fn initial(&self) -> DenseState {
        let mut p = self.ops.initial_pressures(self.data).unwrap();
        self.drain(&mut p);
        DenseState { t: 0.0, u: self.mechanics(&p, 0.0), p, p_prev: None }
    }

    /// (𝐁p)_l
    fn bp(&self, p: &[Vec<f64>; 2]) -> [DVector<f64>; 2] {
        let (p1, p2) = (v(&p[0]), v(&p[1]));
        [
            &self.b[0] * &p1 + &self.e * (&p1 - &p2),
            &self.b[1] * &p2 + &self.e * (&p2 - &p1),
        ]
    }

    pub fn coupled(&self, s: &DenseState, theta: f64, tau: f64) -> DenseState {
        let (nu, np) = (self.ops.nu(), self.ops.np());
        let n = nu + 2 * np;
        let st = theta * tau;
        let mut k = DenseMatrix::zeros(n, n);
        k.view_mut((0, 0), (nu, nu)).copy_from(&self.a);
        for l in 0..2 {
            let off = nu + l * np;
            k.view_mut((0, off), (nu, np)).copy_from(&self.g[l]);
            k.view_mut((off, 0), (np, nu)).copy_from(&self.g[l].transpose());
            let diag = -(&self.c[l] + st * (&self.b[l] + &self.e));
            k.view_mut((off, off), (np, np)).copy_from(&diag);
            let other = nu + (1 - l) * np;
            k.view_mut((off, other), (np, np)).copy_from(&(st * &self.e));
        }
        let f = self.ops.sources(self.data, s.t + theta * tau);
        let bp = self.bp(&s.p);
        let mut rhs = self.ops.load(self.data, s.t + tau);
        let u = v(&s.u);
        for l in 0..2 {
            let r = tau * v(&f[l]) + &self.c[l] * v(&s.p[l]) - self.g[l].transpose() * &u - (1.0 - theta) * tau * &bp[l];
            rhs.extend(r.iter().map(|x| -x));
        }
        let x = equilibrated_solve(&k, &rhs);
        let mut p = [x[nu..nu + np].to_vec(), x[nu + np..].to_vec()];
        self.drain(&mut p);
        DenseState { t: s.t + tau, u: x[..nu].to_vec(), p, p_prev: s.p_prev.clone() }
    }

    pub fn split(&self, s: &DenseState, kind: SchemeKind, theta: f64, tau: f64) -> DenseState {
        let np = self.ops.np();
        let prev = s.p_prev.as_ref().expect("level n-1");
        let u_lag = self.mechanics(prev, s.t);
        let u = self.mechanics(&s.p, s.t + tau);
        let du = v(&u) - v(&u_lag);
        let f = self.ops.sources(self.data, s.t + tau);
        let rhs: Vec<DVector<f64>> = (0..2)
            .map(|l| {
                let (pn, pp) = (v(&s.p[l]), v(&prev[l]));
                tau * v(&f[l]) + theta * (&self.c[l] * &pn) - (1.0 - theta) * (&self.c[l] * (&pn - &pp))
                    + self.g[l].transpose() * &du
            })
            .collect();
        let mut p = match kind {
            SchemeKind::Incomplete => {
                let mut m = DenseMatrix::zeros(2 * np, 2 * np);
                for l in 0..2 {
                    let blk = theta * &self.c[l] + tau * (&self.b[l] + &self.e);
                    m.view_mut((l * np, l * np), (np, np)).copy_from(&blk);
                    m.view_mut((l * np, (1 - l) * np), (np, np)).copy_from(&(-tau * &self.e));
                }
                let mut r = rhs[0].as_slice().to_vec();
                r.extend_from_slice(rhs[1].as_slice());
                let x = equilibrated_solve(&m, &r);
                [x[..np].to_vec(), x[np..].to_vec()]
            }
            SchemeKind::Full => [0, 1].map(|l| {
                let m = theta * &self.c[l] + tau * (&self.b[l] + &self.e);
                let r = &rhs[l] + tau * (&self.e * v(&s.p[1 - l]));
                equilibrated_solve(&m, r.as_slice())
            }),
            SchemeKind::Coupled => unreachable!(),
        };
        self.drain(&mut p);
        DenseState { t: s.t + tau, u, p, p_prev: Some(s.p.clone()) }
    }

    /// Level 1 of the splitting schemes: a coupled step with θ = 1.
    pub fn bootstrap(&self, s0: &DenseState, tau: f64) -> DenseState {
        let mut s = self.coupled(s0, 1.0, tau);
        s.p_prev = Some(s0.p.clone());
        s
    }
}
