use rayon::prelude::*;

use super::element::{p2_edge_values, p2_gradients, p2_values, Affine};
use super::quadrature::{gauss3_unit, TriangleRule};
use super::{DofMap, FieldVector, MaterialParams, SpaceKind};
use crate::linalg::{parallel_enabled, CsrMatrix, TripletBuilder};
use crate::mesh::{BoundaryTag, Mesh};
use crate::{Error, Result};

/// Local rows, local columns, row-major values.
type Local = (Vec<usize>, Vec<usize>, Vec<f64>);

/// Element matrices are computed independently (optionally in parallel) and
/// scattered sequentially in cell order, so the result does not depend on the
/// thread count.
fn assemble_cells<F>(mesh: &Mesh, nrows: usize, ncols: usize, element: F) -> Result<CsrMatrix>
where
    F: Fn(usize) -> Result<Local> + Sync,
{
    let n = mesh.num_cells();
    let locals: Vec<Local> = if parallel_enabled() {
        (0..n).into_par_iter().map(&element).collect::<Result<_>>()?
    } else {
        (0..n).map(&element).collect::<Result<_>>()?
    };
    let cap = locals.iter().map(|l| l.2.len()).sum();
    let mut tb = TripletBuilder::with_capacity(nrows, ncols, cap);
    for (rows, cols, vals) in &locals {
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                tb.push(r, c, vals[i * cols.len() + j]);
            }
        }
    }
    Ok(tb.build())
}

fn expect_kind(dm: &DofMap, kind: SpaceKind, what: &str) -> Result<()> {
    if dm.kind() != kind {
        return Err(Error::InvalidArgument(format!("{what} needs a {kind:?} dof map")));
    }
    Ok(())
}

fn symmetrize(k: &mut [f64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (k[i * n + j] + k[j * n + i]);
            k[i * n + j] = s;
            k[j * n + i] = s;
        }
    }
}

/// 12×12 element matrix of ∫ 2μ ε(u):ε(v) + λ div u div v, dofs interleaved.
pub(crate) fn elasticity_element(x: [[f64; 2]; 3], mu: f64, lambda: f64, rule: &TriangleRule) -> Result<Vec<f64>> {
    let aff = Affine::new(x)?;
    let mut k = vec![0.0; 144];
    for (l, w) in rule.points.iter().zip(&rule.weights) {
        let g = p2_gradients(*l, &aff.grad_lambda);
        let wa = w * aff.area;
        for i in 0..6 {
            for j in 0..6 {
                let gg = g[i][0] * g[j][0] + g[i][1] * g[j][1];
                for a in 0..2 {
                    for b in 0..2 {
                        let delta = if a == b { gg } else { 0.0 };
                        let v = mu * (delta + g[i][b] * g[j][a]) + lambda * g[i][a] * g[j][b];
                        k[(2 * i + a) * 12 + 2 * j + b] += wa * v;
                    }
                }
            }
        }
    }
    symmetrize(&mut k, 12);
    Ok(k)
}

/// 3×12 element matrix of ∫ div u q.
pub(crate) fn coupling_element(x: [[f64; 2]; 3], rule: &TriangleRule) -> Result<Vec<f64>> {
    let aff = Affine::new(x)?;
    let mut k = vec![0.0; 36];
    for (l, w) in rule.points.iter().zip(&rule.weights) {
        let g = p2_gradients(*l, &aff.grad_lambda);
        let wa = w * aff.area;
        for i in 0..3 {
            for j in 0..6 {
                for a in 0..2 {
                    k[i * 12 + 2 * j + a] += wa * l[i] * g[j][a];
                }
            }
        }
    }
    Ok(k)
}

/// 12×12 vector P2 mass element.
pub(crate) fn p2_mass_element(x: [[f64; 2]; 3], coef: f64, rule: &TriangleRule) -> Result<Vec<f64>> {
    let aff = Affine::new(x)?;
    let mut k = vec![0.0; 144];
    for (l, w) in rule.points.iter().zip(&rule.weights) {
        let phi = p2_values(*l);
        let wa = coef * w * aff.area;
        for i in 0..6 {
            for j in 0..6 {
                let v = wa * phi[i] * phi[j];
                k[(2 * i) * 12 + 2 * j] += v;
                k[(2 * i + 1) * 12 + 2 * j + 1] += v;
            }
        }
    }
    symmetrize(&mut k, 12);
    Ok(k)
}

pub fn assemble_elasticity(mesh: &Mesh, dm: &DofMap, params: &MaterialParams) -> Result<CsrMatrix> {
    expect_kind(dm, SpaceKind::P2Vector, "elasticity")?;
    let rule = TriangleRule::degree4();
    let n = dm.num_dofs();
    assemble_cells(mesh, n, n, |c| {
        let k = elasticity_element(mesh.cell_coords(c), params.mu, params.lambda, &rule)?;
        let d = dm.cell_dofs(c);
        Ok((d.clone(), d, k))
    })
}

/// Stiffness of ∫ (k_l/η) ∇p·∇q for leg 1 or 2.
pub fn assemble_pressure_stiffness(mesh: &Mesh, dm: &DofMap, params: &MaterialParams, leg: usize) -> Result<CsrMatrix> {
    expect_kind(dm, SpaceKind::P1Scalar, "pressure stiffness")?;
    if !(1..=2).contains(&leg) {
        return Err(Error::InvalidArgument(format!("leg must be 1 or 2, got {leg}")));
    }
    let kappa = params.mobility()[leg - 1];
    let n = dm.num_dofs();
    assemble_cells(mesh, n, n, |c| {
        let aff = Affine::new(mesh.cell_coords(c))?;
        let g = aff.grad_lambda;
        let mut k = vec![0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                k[i * 3 + j] = kappa * aff.area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
            }
        }
        symmetrize(&mut k, 3);
        let d = dm.cell_dofs(c);
        Ok((d.clone(), d, k))
    })
}

/// Mass matrix scaled by `coef`, in either space.
pub fn assemble_scaled_mass(mesh: &Mesh, dm: &DofMap, coef: f64) -> Result<CsrMatrix> {
    if !(coef >= 0.0) {
        return Err(Error::InvalidArgument(format!("mass coefficient must be >= 0, got {coef}")));
    }
    let n = dm.num_dofs();
    let rule = TriangleRule::degree4();
    assemble_cells(mesh, n, n, |c| {
        let x = mesh.cell_coords(c);
        let k = match dm.kind() {
            SpaceKind::P1Scalar => {
                let area = Affine::new(x)?.area;
                (0..9)
                    .map(|ij| coef * area / 12.0 * if ij % 4 == 0 { 2.0 } else { 1.0 })
                    .collect()
            }
            SpaceKind::P2Vector => p2_mass_element(x, coef, &rule)?,
        };
        let d = dm.cell_dofs(c);
        Ok((d.clone(), d, k))
    })
}

/// D0 with rows over pressure dofs and columns over displacement dofs.
pub fn assemble_coupling(mesh: &Mesh, dm_u: &DofMap, dm_p: &DofMap) -> Result<CsrMatrix> {
    expect_kind(dm_u, SpaceKind::P2Vector, "coupling")?;
    expect_kind(dm_p, SpaceKind::P1Scalar, "coupling")?;
    let rule = TriangleRule::degree4();
    assemble_cells(mesh, dm_p.num_dofs(), dm_u.num_dofs(), |c| {
        let k = coupling_element(mesh.cell_coords(c), &rule)?;
        Ok((dm_p.cell_dofs(c), dm_u.cell_dofs(c), k))
    })
}

/// Load vector of a constant traction on the edges carrying `tag`.
pub fn assemble_traction_load(mesh: &Mesh, dm: &DofMap, tag: BoundaryTag, traction: [f64; 2]) -> Result<FieldVector> {
    expect_kind(dm, SpaceKind::P2Vector, "traction load")?;
    let mut f = vec![0.0; dm.num_dofs()];
    let mut any = false;
    for e in mesh.edges_with_tag(tag) {
        any = true;
        let [a, b] = e.vertices;
        let m = dm
            .edge_node(a, b)
            .ok_or_else(|| Error::Tagging(format!("boundary edge ({a}, {b}) is not a cell edge")))?;
        let len = mesh.edge_length(e);
        for (s, w) in gauss3_unit() {
            let n = p2_edge_values(s);
            for (node, phi) in [a, m, b].into_iter().zip(n) {
                for k in 0..2 {
                    f[2 * node + k] += w * len * phi * traction[k];
                }
            }
        }
    }
    if !any {
        log::warn!("boundary {tag} has no edges; traction load is empty");
    }
    Ok(f)
}

/// Value of a P1 field inside a cell at barycentric coordinates `l`.
pub fn eval_scalar(dm: &DofMap, p: &[f64], cell: usize, l: [f64; 3]) -> f64 {
    let nodes = dm.cell_nodes(cell);
    (0..3).map(|i| p[nodes[i]] * l[i]).sum()
}

/// Value of an interleaved P2 vector field inside a cell.
pub fn eval_vector(dm: &DofMap, u: &[f64], cell: usize, l: [f64; 3]) -> [f64; 2] {
    let phi = p2_values(l);
    let mut out = [0.0; 2];
    for (i, &n) in dm.cell_nodes(cell).iter().enumerate() {
        out[0] += u[2 * n] * phi[i];
        out[1] += u[2 * n + 1] * phi[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::tests::one_cell;
    use crate::linalg::vecops::{max_abs, sum_of};
    use crate::mesh::{generate_unit_square, MeshSpec};

    // Monomial oracle on the reference triangle (0,0),(1,0),(0,1).
    // A polynomial is a coefficient list over [1, x, y, x², xy, y²].
    type Poly = [f64; 6];

    const P2_REF: [Poly; 6] = [
        // λ0 = 1-x-y: λ0(2λ0-1) = 1 - 3x - 3y + 2x² + 4xy + 2y²
        [1.0, -3.0, -3.0, 2.0, 4.0, 2.0],
        [0.0, -1.0, 0.0, 2.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0, 0.0, 2.0],
        // 4xλ0 = 4x - 4x² - 4xy
        [0.0, 4.0, 0.0, -4.0, -4.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 4.0, 0.0],
        [0.0, 0.0, 4.0, 0.0, -4.0, -4.0],
    ];

    // ∂x, ∂y of a quadratic as linear [c, cx, cy]
    fn dx(p: &Poly) -> [f64; 3] {
        [p[1], 2.0 * p[3], p[4]]
    }
    fn dy(p: &Poly) -> [f64; 3] {
        [p[2], p[4], 2.0 * p[5]]
    }

    fn fact(n: u32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }
    fn mono(a: u32, b: u32) -> f64 {
        fact(a) * fact(b) / fact(a + b + 2)
    }
    fn int_lin_lin(p: [f64; 3], q: [f64; 3]) -> f64 {
        let e = [(0, 0), (1, 0), (0, 1)];
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += p[i] * q[j] * mono(e[i].0 + e[j].0, e[i].1 + e[j].1);
            }
        }
        s
    }

    fn grad(i: usize, a: usize) -> [f64; 3] {
        if a == 0 {
            dx(&P2_REF[i])
        } else {
            dy(&P2_REF[i])
        }
    }

    #[test]
    fn elasticity_element_matches_monomial_oracle() {
        let m = one_cell();
        let dm = DofMap::new(&m, SpaceKind::P2Vector);
        let params = MaterialParams { mu: 1.0, lambda: 0.0, ..MaterialParams::parameter_set(1).unwrap() };
        let a = assemble_elasticity(&m, &dm, &params).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                for ca in 0..2 {
                    for cb in 0..2 {
                        // 2ε(φi e_a):ε(φj e_b) = δab ∇φi·∇φj + ∂bφi ∂aφj
                        let mut v = int_lin_lin(grad(i, cb), grad(j, ca));
                        if ca == cb {
                            v += int_lin_lin(grad(i, 0), grad(j, 0)) + int_lin_lin(grad(i, 1), grad(j, 1));
                        }
                        let got = a.get(2 * i + ca, 2 * j + cb);
                        assert!((got - v).abs() < 1e-13, "({i},{ca})x({j},{cb}): {got} vs {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn coupling_element_matches_monomial_oracle() {
        let m = one_cell();
        let du = DofMap::new(&m, SpaceKind::P2Vector);
        let dp = DofMap::new(&m, SpaceKind::P1Scalar);
        let d = assemble_coupling(&m, &du, &dp).unwrap();
        let lam = [[1.0, -1.0, -1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..6 {
                for a in 0..2 {
                    let v = int_lin_lin(lam[i], grad(j, a));
                    assert!((d.get(i, 2 * j + a) - v).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn p1_reference_element_oracles() {
        let m = one_cell();
        let dm = DofMap::new(&m, SpaceKind::P1Scalar);
        let params = MaterialParams { k1: 1.0, eta: 1.0, ..MaterialParams::parameter_set(1).unwrap() };
        let b = assemble_pressure_stiffness(&m, &dm, &params, 1).unwrap().to_dense();
        let expect_b = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        let mass = assemble_scaled_mass(&m, &dm, 1.0).unwrap().to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert!((b[(i, j)] - expect_b[i][j]).abs() < 1e-15);
                let em = if i == j { 2.0 } else { 1.0 } / 24.0;
                assert!((mass[(i, j)] - em).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degree4_matches_degree5_quadrature() {
        let x = [[0.13, 0.07], [0.91, 0.22], [0.37, 0.83]];
        let lo = TriangleRule::degree4();
        let hi = TriangleRule::degree5();
        let pairs = [
            (elasticity_element(x, 2.0, 3.0, &lo).unwrap(), elasticity_element(x, 2.0, 3.0, &hi).unwrap()),
            (coupling_element(x, &lo).unwrap(), coupling_element(x, &hi).unwrap()),
            (p2_mass_element(x, 1.0, &lo).unwrap(), p2_mass_element(x, 1.0, &hi).unwrap()),
        ];
        for (a, b) in pairs {
            let scale = max_abs(&b);
            for (p, q) in a.iter().zip(&b) {
                assert!((p - q).abs() <= 1e-12 * scale);
            }
        }
    }

    fn square() -> (Mesh, DofMap, DofMap) {
        let m = generate_unit_square(&MeshSpec::new(6, 2.0)).unwrap();
        let du = DofMap::new(&m, SpaceKind::P2Vector);
        let dp = DofMap::new(&m, SpaceKind::P1Scalar);
        (m, du, dp)
    }

    #[test]
    fn elasticity_kernel_has_rigid_modes() {
        let (m, du, _) = square();
        let a = assemble_elasticity(&m, &du, &MaterialParams::parameter_set(1).unwrap()).unwrap();
        let scale = a.max_abs();
        assert!(a.symmetry_defect() <= 1e-12 * scale);
        for (f, tol) in [
            (Box::new(|_: [f64; 2]| [1.0, 0.0]) as Box<dyn Fn([f64; 2]) -> [f64; 2]>, 1e-10),
            (Box::new(|_| [0.0, 1.0]), 1e-10),
            (Box::new(|p: [f64; 2]| [-p[1], p[0]]), 1e-9),
        ] {
            let r = a.spmv(&du.interpolate_vector(f)).unwrap();
            assert!(max_abs(&r) <= tol * scale);
        }
        // a non-rigid field is not in the kernel
        let r = a.spmv(&du.interpolate_vector(|p| [p[0], 0.0])).unwrap();
        assert!(max_abs(&r) > 1e-3 * scale);
    }

    #[test]
    fn pressure_stiffness_properties() {
        let (m, _, dp) = square();
        let p = MaterialParams::parameter_set(1).unwrap();
        let b = assemble_pressure_stiffness(&m, &dp, &p, 1).unwrap();
        assert!(max_abs(&b.spmv(&vec![1.0; dp.num_dofs()]).unwrap()) <= 1e-12 * b.max_abs());
        assert!(b.symmetry_defect() <= 1e-12 * b.max_abs());
        let b2 = assemble_pressure_stiffness(&m, &dp, &MaterialParams { k1: 2.0 * p.k1, ..p }, 1).unwrap();
        for (x, y) in b.values().iter().zip(b2.values()) {
            assert!((2.0 * x - y).abs() <= 1e-15 * y.abs().max(1e-300));
        }
        assert!(assemble_pressure_stiffness(&m, &dp, &p, 3).is_err());
    }

    #[test]
    fn mass_sums_to_area() {
        let (m, du, dp) = square();
        assert!((sum_of(assemble_scaled_mass(&m, &dp, 1.0).unwrap().values()) - 1.0).abs() < 1e-12);
        assert!((sum_of(assemble_scaled_mass(&m, &dp, 3.5).unwrap().values()) - 3.5).abs() < 1e-12);
        assert_eq!(assemble_scaled_mass(&m, &dp, 0.0).unwrap().max_abs(), 0.0);
        // vector mass: each component integrates to |Ω|
        assert!((sum_of(assemble_scaled_mass(&m, &du, 1.0).unwrap().values()) - 2.0).abs() < 1e-12);
        assert!(assemble_scaled_mass(&m, &dp, -1.0).is_err());
    }

    #[test]
    fn coupling_divergence_identities() {
        let (m, du, dp) = square();
        let d = assemble_coupling(&m, &du, &dp).unwrap();
        let r = d.spmv(&du.interpolate_vector(|_| [0.3, -0.7])).unwrap();
        assert!(max_abs(&r) < 1e-12);
        let r = d.spmv(&du.interpolate_vector(|p| [p[0], 0.0])).unwrap();
        assert!((sum_of(&r) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn traction_load_totals() {
        let (m, du, _) = square();
        let f = assemble_traction_load(&m, &du, BoundaryTag::G1, [0.0, -1.0]).unwrap();
        let fy: f64 = f.iter().skip(1).step_by(2).sum();
        let fx: f64 = f.iter().step_by(2).sum();
        assert!((fy + 0.2).abs() < 1e-10);
        assert!(fx.abs() < 1e-15);
        let f2 = assemble_traction_load(&m, &du, BoundaryTag::G1, [0.0, -2.0]).unwrap();
        assert!(f.iter().zip(&f2).all(|(a, b)| (2.0 * a - b).abs() < 1e-15));
        let zero = assemble_traction_load(&m, &du, BoundaryTag::G1, [0.0, 0.0]).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
        let support = du.boundary_dofs(BoundaryTag::G1, None);
        for (i, v) in f.iter().enumerate() {
            if *v != 0.0 {
                assert!(support.binary_search(&i).is_ok());
            }
        }
    }

    #[test]
    fn evaluation_reproduces_quadratics() {
        let (m, du, dp) = square();
        let u = du.interpolate_vector(|p| [p[0] * p[1], p[1] * p[1] - p[0]]);
        let p = dp.interpolate_scalar(|p| 2.0 * p[0] - p[1]);
        let l = [0.2, 0.3, 0.5];
        for c in [0, 7, 40] {
            let x = m.cell_coords(c);
            let q = [
                l[0] * x[0][0] + l[1] * x[1][0] + l[2] * x[2][0],
                l[0] * x[0][1] + l[1] * x[1][1] + l[2] * x[2][1],
            ];
            let v = eval_vector(&du, &u, c, l);
            assert!((v[0] - q[0] * q[1]).abs() < 1e-14);
            assert!((v[1] - (q[1] * q[1] - q[0])).abs() < 1e-14);
            assert!((eval_scalar(&dp, &p, c, l) - (2.0 * q[0] - q[1])).abs() < 1e-14);
        }
    }
}
