//! Triangulations of the unit square with tagged boundary segments.
//!
//! ```text
//!        G2        G1        G2
//!   +---------[=========]---------+  y = 1
//!   |                             |
//!  G3                             G3
//!   |                             |
//!   +-----------------------------+  y = 0
//!                 G4
//! ```
//!
//! The load strip `G1` is centred on the top side.

mod locate;
mod msh;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use locate::PointLocator;
pub use msh::{parse_msh2, read_msh2, write_msh2, msh2_string};

use crate::{Error, Result};

const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryTag {
    G1,
    G2,
    G3,
    G4,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] = [Self::G1, Self::G2, Self::G3, Self::G4];

    /// Physical group number used in mesh files.
    pub fn physical(self) -> u32 {
        match self {
            Self::G1 => 1,
            Self::G2 => 2,
            Self::G3 => 3,
            Self::G4 => 4,
        }
    }

    pub fn from_physical(tag: u32) -> Option<Self> {
        match tag {
            1 => Some(Self::G1),
            2 => Some(Self::G2),
            3 => Some(Self::G3),
            4 => Some(Self::G4),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self.physical() as usize - 1
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.physical())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counterclockwise vertex triples.
    pub cells: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshSpec {
    /// Cells per side.
    pub resolution: usize,
    /// Ratio between the coarsest and finest spacing; 1 gives a uniform grid.
    pub grading: f64,
    /// Half-width of the load strip centred at x = 0.5.
    pub strip_half_width: f64,
}

impl Default for MeshSpec {
    fn default() -> Self {
        Self {
            resolution: 20,
            grading: 2.0,
            strip_half_width: 0.1,
        }
    }
}

impl MeshSpec {
    pub fn new(resolution: usize, grading: f64) -> Self {
        Self {
            resolution,
            grading,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::InvalidSpec(format!(
                "resolution must be at least 2, got {}",
                self.resolution
            )));
        }
        if !(self.grading >= 1.0) || !self.grading.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "grading factor must be >= 1, got {}",
                self.grading
            )));
        }
        if !(self.strip_half_width > 0.0 && self.strip_half_width < 0.5) {
            return Err(Error::InvalidSpec(format!(
                "strip half-width must lie in (0, 0.5), got {}",
                self.strip_half_width
            )));
        }
        Ok(())
    }

    pub fn strip(&self) -> (f64, f64) {
        (0.5 - self.strip_half_width, 0.5 + self.strip_half_width)
    }
}

/// Node positions `d_k`, k = 0..=m, spanning `[0, length]` with spacing that
/// grows geometrically by `grading` from `d = 0` to `d = length`.
fn graded_offsets(m: usize, length: f64, grading: f64) -> Vec<f64> {
    (0..=m)
        .map(|k| {
            let s = k as f64 / m as f64;
            if grading == 1.0 {
                length * s
            } else {
                length * (grading.powf(s) - 1.0) / (grading - 1.0)
            }
        })
        .collect()
}

/// Top-row x coordinates, with nodes on both strip ends when n >= 3.
fn top_row(n: usize, grading: f64, strip: (f64, f64)) -> Vec<f64> {
    if n < 3 {
        return (0..=n).map(|i| i as f64 / n as f64).collect();
    }
    let (a, b) = strip;
    let side_weight = |len: f64| {
        if grading == 1.0 {
            len
        } else {
            len * grading.ln() / (grading - 1.0)
        }
    };
    let (wl, wr) = (side_weight(a), side_weight(1.0 - b));
    let total = (b - a) + wl + wr;
    let m_mid = ((n as f64 * (b - a) / total).round() as usize).clamp(1, n - 2);
    let rest = n - m_mid;
    let m_left = ((rest as f64 * wl / (wl + wr)).round() as usize).clamp(1, rest - 1);
    let m_right = rest - m_left;

    let mut xs = Vec::with_capacity(n + 1);
    let left = graded_offsets(m_left, a, grading);
    xs.extend(left.iter().rev().map(|d| a - d));
    xs[0] = 0.0;
    for k in 1..m_mid {
        xs.push(a + (b - a) * k as f64 / m_mid as f64);
    }
    let right = graded_offsets(m_right, 1.0 - b, grading);
    xs.extend(right.iter().map(|d| b + d));
    *xs.last_mut().unwrap() = 1.0;
    xs
}

/// Structured triangulation of the unit square, refined toward the load strip
/// on the top side. The top row is fitted to the strip ends and graded in x;
/// the grading in x fades out linearly toward the bottom, and rows are graded
/// in y toward the top.
pub fn generate_unit_square(spec: &MeshSpec) -> Result<Mesh> {
    spec.validate()?;
    let n = spec.resolution;
    let g = spec.grading;
    let strip = spec.strip();
    let top = top_row(n, g, strip);
    let from_top = graded_offsets(n, 1.0, g);
    let ys: Vec<f64> = (0..=n).map(|j| 1.0 - from_top[n - j]).collect();

    let vid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for (j, &y) in ys.iter().enumerate() {
        let w = j as f64 / n as f64;
        for (i, &xt) in top.iter().enumerate() {
            let x = (1.0 - w) * (i as f64 / n as f64) + w * xt;
            vertices.push([x, y]);
        }
    }

    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v11, v01) = (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
            if 2 * i < n {
                cells.push([v00, v10, v11]);
                cells.push([v00, v11, v01]);
            } else {
                cells.push([v00, v10, v01]);
                cells.push([v10, v11, v01]);
            }
        }
    }

    let (a, b) = strip;
    let mut boundary_edges = Vec::with_capacity(4 * n);
    for i in 0..n {
        boundary_edges.push(BoundaryEdge { vertices: [vid(i, 0), vid(i + 1, 0)], tag: BoundaryTag::G4 });
    }
    for j in 0..n {
        boundary_edges.push(BoundaryEdge { vertices: [vid(n, j), vid(n, j + 1)], tag: BoundaryTag::G3 });
    }
    for i in (0..n).rev() {
        let (x0, x1) = (top[i], top[i + 1]);
        let in_strip = x0 >= a - GEOM_TOL && x1 <= b + GEOM_TOL;
        let tag = if in_strip { BoundaryTag::G1 } else { BoundaryTag::G2 };
        boundary_edges.push(BoundaryEdge { vertices: [vid(i + 1, n), vid(i, n)], tag });
    }
    for j in (0..n).rev() {
        boundary_edges.push(BoundaryEdge { vertices: [vid(0, j + 1), vid(0, j)], tag: BoundaryTag::G3 });
    }

    let mesh = Mesh { vertices, cells, boundary_edges };
    mesh.validate()?;
    Ok(mesh)
}

impl Mesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_coords(&self, c: usize) -> [[f64; 2]; 3] {
        let [a, b, d] = self.cells[c];
        [self.vertices[a], self.vertices[b], self.vertices[d]]
    }

    pub fn signed_area(&self, c: usize) -> f64 {
        let [p0, p1, p2] = self.cell_coords(c);
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_cells()).map(|c| self.signed_area(c)).sum()
    }

    pub fn edge_length(&self, e: &BoundaryEdge) -> f64 {
        let [a, b] = e.vertices;
        let (p, q) = (self.vertices[a], self.vertices[b]);
        (q[0] - p[0]).hypot(q[1] - p[1])
    }

    pub fn boundary_measure(&self, tag: BoundaryTag) -> f64 {
        self.boundary_edges
            .iter()
            .filter(|e| e.tag == tag)
            .map(|e| self.edge_length(e))
            .sum()
    }

    pub fn edges_with_tag(&self, tag: BoundaryTag) -> impl Iterator<Item = &BoundaryEdge> {
        self.boundary_edges.iter().filter(move |e| e.tag == tag)
    }

    /// Vertices touched by edges carrying `tag`, sorted and deduplicated.
    pub fn boundary_vertices(&self, tag: BoundaryTag) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges_with_tag(tag).flat_map(|e| e.vertices).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Number of cells sharing each undirected edge.
    pub fn edge_cell_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::with_capacity(3 * self.cells.len());
        for cell in &self.cells {
            for k in 0..3 {
                let (a, b) = (cell[k], cell[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Topological and domain invariants together.
    pub fn validate(&self) -> Result<()> {
        self.validate_topology()?;
        self.validate_domain()
    }

    /// Positive cell areas, every tagged edge a boundary facet, every boundary
    /// facet tagged exactly once.
    pub fn validate_topology(&self) -> Result<()> {
        let nv = self.vertices.len();
        for (i, v) in self.vertices.iter().enumerate() {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(Error::Geometry(format!("vertex {i} is not finite")));
            }
        }
        for (c, cell) in self.cells.iter().enumerate() {
            if let Some(&bad) = cell.iter().find(|&&v| v >= nv) {
                return Err(Error::OutOfRange { index: bad, size: nv });
            }
            let area = self.signed_area(c);
            if !(area > 0.0) {
                return Err(Error::Geometry(format!("cell {c} has nonpositive signed area {area:e}")));
            }
        }
        let counts = self.edge_cell_counts();
        if let Some((e, n)) = counts.iter().find(|(_, &n)| n > 2) {
            return Err(Error::Geometry(format!("edge {e:?} shared by {n} cells")));
        }
        let mut tagged: HashMap<(usize, usize), BoundaryTag> = HashMap::new();
        for e in &self.boundary_edges {
            let [a, b] = e.vertices;
            if a >= nv || b >= nv {
                return Err(Error::OutOfRange { index: a.max(b), size: nv });
            }
            let key = (a.min(b), a.max(b));
            match counts.get(&key) {
                Some(1) => {}
                Some(_) => return Err(Error::Tagging(format!("tagged edge {key:?} is interior"))),
                None => return Err(Error::Tagging(format!("tagged edge {key:?} is not a mesh edge"))),
            }
            if tagged.insert(key, e.tag).is_some() {
                return Err(Error::Tagging(format!("edge {key:?} tagged more than once")));
            }
        }
        if let Some((key, _)) = counts.iter().find(|(k, &n)| n == 1 && !tagged.contains_key(k)) {
            return Err(Error::Tagging(format!("boundary edge {key:?} has no tag")));
        }
        Ok(())
    }

    /// Tags sit on the matching sides of the unit square and the cells cover
    /// it.
    pub fn validate_domain(&self) -> Result<()> {
        for e in &self.boundary_edges {
            let [a, b] = e.vertices;
            let key = (a.min(b), a.max(b));
            let (p, q) = (self.vertices[a], self.vertices[b]);
            let on = |f: &dyn Fn([f64; 2]) -> bool| f(p) && f(q);
            let ok = match e.tag {
                BoundaryTag::G1 | BoundaryTag::G2 => on(&|v| (v[1] - 1.0).abs() <= GEOM_TOL),
                BoundaryTag::G3 => on(&|v| v[0].abs() <= GEOM_TOL) || on(&|v| (v[0] - 1.0).abs() <= GEOM_TOL),
                BoundaryTag::G4 => on(&|v| v[1].abs() <= GEOM_TOL),
            };
            if !ok {
                return Err(Error::Tagging(format!("edge {key:?} tagged {} lies on the wrong side", e.tag)));
            }
        }
        let area = self.total_area();
        if (area - 1.0).abs() > 1e-9 {
            return Err(Error::Geometry(format!("mesh area {area} does not cover the unit square")));
        }
        Ok(())
    }

    /// Checks that load-strip edges lie within `[0.5 − w, 0.5 + w]`.
    pub fn validate_strip(&self, half_width: f64) -> Result<()> {
        let (a, b) = (0.5 - half_width, 0.5 + half_width);
        for e in self.edges_with_tag(BoundaryTag::G1) {
            for &v in &e.vertices {
                let x = self.vertices[v][0];
                if x < a - GEOM_TOL || x > b + GEOM_TOL {
                    return Err(Error::Tagging(format!("G1 vertex at x = {x} outside the strip")));
                }
            }
        }
        Ok(())
    }

    /// Hex SHA-256 over coordinates, cells and tagged edges.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        for v in &self.vertices {
            h.update(v[0].to_le_bytes());
            h.update(v[1].to_le_bytes());
        }
        for c in &self.cells {
            for &i in c {
                h.update((i as u64).to_le_bytes());
            }
        }
        for e in &self.boundary_edges {
            h.update((e.vertices[0] as u64).to_le_bytes());
            h.update((e.vertices[1] as u64).to_le_bytes());
            h.update([e.tag.physical() as u8]);
        }
        hex::encode(h.finalize())
    }

    /// Shortest edge among cells that touch a vertex satisfying `pred`.
    pub fn min_edge_length_near(&self, pred: impl Fn([f64; 2]) -> bool) -> f64 {
        let mut best = f64::INFINITY;
        for cell in &self.cells {
            if !cell.iter().any(|&v| pred(self.vertices[v])) {
                continue;
            }
            for k in 0..3 {
                let (p, q) = (self.vertices[cell[k]], self.vertices[cell[(k + 1) % 3]]);
                best = best.min((q[0] - p[0]).hypot(q[1] - p[1]));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_counts() {
        let m = generate_unit_square(&MeshSpec::new(2, 1.0)).unwrap();
        assert_eq!(m.num_vertices(), 9);
        assert_eq!(m.num_cells(), 8);
        assert_eq!(m.boundary_edges.len(), 8);
    }

    #[test]
    fn resolution_below_two_rejected() {
        assert!(matches!(generate_unit_square(&MeshSpec::new(1, 1.0)), Err(Error::InvalidSpec(_))));
        assert!(matches!(generate_unit_square(&MeshSpec::new(8, 0.5)), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn areas_sum_to_one() {
        for (n, g) in [(2, 1.0), (3, 1.0), (7, 1.5), (20, 2.0), (33, 3.0)] {
            let m = generate_unit_square(&MeshSpec::new(n, g)).unwrap();
            assert!((m.total_area() - 1.0).abs() <= 1e-12, "n={n} g={g}");
        }
    }

    #[test]
    fn boundary_measures_default() {
        let m = generate_unit_square(&MeshSpec::default()).unwrap();
        assert!((m.boundary_measure(BoundaryTag::G1) - 0.2).abs() <= 1e-12);
        assert!((m.boundary_measure(BoundaryTag::G4) - 1.0).abs() <= 1e-12);
        assert!((m.boundary_measure(BoundaryTag::G3) - 2.0).abs() <= 1e-12);
        let top = m.boundary_measure(BoundaryTag::G1) + m.boundary_measure(BoundaryTag::G2);
        assert!((top - 1.0).abs() <= 1e-12);
        m.validate_strip(0.1).unwrap();
    }

    #[test]
    fn grading_refines_toward_strip() {
        let m = generate_unit_square(&MeshSpec::new(40, 2.0)).unwrap();
        let near_strip = m.min_edge_length_near(|v| (v[1] - 1.0).abs() < 1e-12 && (0.4..=0.6).contains(&v[0]));
        let bottom = m
            .edges_with_tag(BoundaryTag::G4)
            .map(|e| m.edge_length(e))
            .fold(f64::INFINITY, f64::min);
        assert!(near_strip < bottom, "{near_strip} vs {bottom}");
    }

    #[test]
    fn unresolved_strip_on_tiny_grid() {
        let m = generate_unit_square(&MeshSpec::new(2, 1.0)).unwrap();
        assert_eq!(m.boundary_measure(BoundaryTag::G1), 0.0);
        assert!((m.boundary_measure(BoundaryTag::G2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validate_flags_missing_tag() {
        let mut m = generate_unit_square(&MeshSpec::new(3, 1.0)).unwrap();
        m.boundary_edges.pop();
        assert!(matches!(m.validate(), Err(Error::Tagging(_))));
    }

    #[test]
    fn validate_flags_clockwise_cell() {
        let mut m = generate_unit_square(&MeshSpec::new(3, 1.0)).unwrap();
        m.cells[0].swap(1, 2);
        assert!(matches!(m.validate(), Err(Error::Geometry(_))));
    }
}
