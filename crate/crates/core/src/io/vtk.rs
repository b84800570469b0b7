//! VTK legacy ASCII (2.0) unstructured grid with pressures and displacement
//! sampled at the mesh vertices.

use std::fmt::Write as _;
use std::path::Path;

use crate::mesh::Mesh;
use crate::{Error, Result};

const VTK_TRIANGLE: u8 = 5;

/// `u` holds interleaved P2 displacement coefficients whose first nodes are
/// the mesh vertices; `p1`, `p2` are P1 vertex values.
pub fn vtk_string(mesh: &Mesh, title: &str, u: &[f64], p1: &[f64], p2: &[f64]) -> Result<String> {
    let nv = mesh.num_vertices();
    if p1.len() != nv || p2.len() != nv || u.len() < 2 * nv {
        return Err(Error::DimensionMismatch("snapshot fields do not match the mesh".into()));
    }
    let nc = mesh.num_cells();
    let mut s = String::with_capacity(96 * nv);
    s.push_str("# vtk DataFile Version 2.0\n");
    s.push_str(title.lines().next().unwrap_or(""));
    s.push_str("\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {nv} double");
    for v in &mesh.vertices {
        let _ = writeln!(s, "{:e} {:e} 0", v[0], v[1]);
    }
    let _ = writeln!(s, "CELLS {nc} {}", 4 * nc);
    for c in &mesh.cells {
        let _ = writeln!(s, "3 {} {} {}", c[0], c[1], c[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {nc}");
    for _ in 0..nc {
        let _ = writeln!(s, "{VTK_TRIANGLE}");
    }
    let _ = writeln!(s, "POINT_DATA {nv}");
    for (name, field) in [("p1", p1), ("p2", p2)] {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for x in field {
            let _ = writeln!(s, "{x:e}");
        }
    }
    s.push_str("VECTORS u double\n");
    for v in 0..nv {
        let _ = writeln!(s, "{:e} {:e} 0", u[2 * v], u[2 * v + 1]);
    }
    Ok(s)
}

pub fn write_vtk(path: &Path, mesh: &Mesh, title: &str, u: &[f64], p1: &[f64], p2: &[f64]) -> Result<()> {
    super::write_atomic(path, vtk_string(mesh, title, u, p1, p2)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_unit_square, MeshSpec};

    #[test]
    fn sections_and_counts() {
        let m = generate_unit_square(&MeshSpec::new(2, 1.0)).unwrap();
        let nv = m.num_vertices();
        let u = vec![0.0; 2 * 25];
        let p: Vec<f64> = (0..nv).map(|i| i as f64).collect();
        let s = vtk_string(&m, "t=0", &u, &p, &p).unwrap();
        assert!(s.starts_with("# vtk DataFile Version 2.0\nt=0\nASCII\nDATASET UNSTRUCTURED_GRID\n"));
        assert!(s.contains("POINTS 9 double"));
        assert!(s.contains("CELLS 8 32"));
        assert!(s.contains("CELL_TYPES 8"));
        assert!(s.contains("POINT_DATA 9"));
        assert!(s.contains("SCALARS p1 double 1"));
        assert!(s.contains("VECTORS u double"));
        assert_eq!(s.lines().filter(|l| *l == "5").count(), 8);
    }

    #[test]
    fn wrong_sizes_rejected() {
        let m = generate_unit_square(&MeshSpec::new(2, 1.0)).unwrap();
        assert!(vtk_string(&m, "", &[0.0; 4], &[0.0; 9], &[0.0; 9]).is_err());
    }
}
