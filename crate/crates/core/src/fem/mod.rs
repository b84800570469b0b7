//! Degrees of freedom, element assembly, and boundary conditions.
//!
//! Displacements live in the P2 vector space with interleaved components
//! (`dof = 2·node + component`); pressures live in P1 (`dof = vertex`).
//! P2 nodes are numbered vertices first, then edge midpoints in order of first
//! appearance while walking the cells.

mod assembly;
mod bc;
pub mod element;
pub mod quadrature;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use assembly::{
    assemble_coupling, assemble_elasticity, assemble_pressure_stiffness, assemble_scaled_mass,
    assemble_traction_load, eval_scalar, eval_vector,
};
pub use bc::apply_dirichlet;

use crate::mesh::{BoundaryTag, Mesh};
use crate::{Error, Result};

/// Coefficient vector over a [`DofMap`].
pub type FieldVector = Vec<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    P1Scalar,
    P2Vector,
}

impl SpaceKind {
    pub fn nodes_per_cell(self) -> usize {
        match self {
            SpaceKind::P1Scalar => 3,
            SpaceKind::P2Vector => 6,
        }
    }

    pub fn components(self) -> usize {
        match self {
            SpaceKind::P1Scalar => 1,
            SpaceKind::P2Vector => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DofMap {
    kind: SpaceKind,
    /// `nodes_per_cell` global node ids per cell.
    cell_nodes: Vec<usize>,
    node_coords: Vec<[f64; 2]>,
    /// Sorted, deduplicated node ids on each tag.
    boundary_nodes: [Vec<usize>; 4],
    edge_nodes: HashMap<(usize, usize), usize>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DofMap {
    pub fn new(mesh: &Mesh, kind: SpaceKind) -> Self {
        let npc = kind.nodes_per_cell();
        let mut cell_nodes = Vec::with_capacity(npc * mesh.num_cells());
        let mut node_coords = mesh.vertices.clone();
        let mut edge_nodes = HashMap::new();
        for cell in &mesh.cells {
            cell_nodes.extend_from_slice(cell);
            if kind == SpaceKind::P2Vector {
                for [a, b] in element::P2_EDGES {
                    let (va, vb) = (cell[a], cell[b]);
                    let id = *edge_nodes.entry(edge_key(va, vb)).or_insert_with(|| {
                        let (pa, pb) = (mesh.vertices[va], mesh.vertices[vb]);
                        node_coords.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                        node_coords.len() - 1
                    });
                    cell_nodes.push(id);
                }
            }
        }
        let mut boundary_nodes: [Vec<usize>; 4] = Default::default();
        for e in &mesh.boundary_edges {
            let list = &mut boundary_nodes[e.tag.index()];
            list.extend_from_slice(&e.vertices);
            if kind == SpaceKind::P2Vector {
                if let Some(&m) = edge_nodes.get(&edge_key(e.vertices[0], e.vertices[1])) {
                    list.push(m);
                }
            }
        }
        for list in &mut boundary_nodes {
            list.sort_unstable();
            list.dedup();
        }
        Self { kind, cell_nodes, node_coords, boundary_nodes, edge_nodes }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn num_nodes(&self) -> usize {
        self.node_coords.len()
    }

    pub fn num_dofs(&self) -> usize {
        self.num_nodes() * self.kind.components()
    }

    pub fn num_cells(&self) -> usize {
        self.cell_nodes.len() / self.kind.nodes_per_cell()
    }

    pub fn cell_nodes(&self, c: usize) -> &[usize] {
        let npc = self.kind.nodes_per_cell();
        &self.cell_nodes[c * npc..(c + 1) * npc]
    }

    /// Global dofs of a cell, component-interleaved for vector spaces.
    pub fn cell_dofs(&self, c: usize) -> Vec<usize> {
        let nc = self.kind.components();
        self.cell_nodes(c)
            .iter()
            .flat_map(|&n| (0..nc).map(move |k| nc * n + k))
            .collect()
    }

    pub fn node_coords(&self) -> &[[f64; 2]] {
        &self.node_coords
    }

    /// Midpoint node of the edge between two vertices (P2 only).
    pub fn edge_node(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_nodes.get(&edge_key(a, b)).copied()
    }

    pub fn boundary_nodes(&self, tag: BoundaryTag) -> &[usize] {
        &self.boundary_nodes[tag.index()]
    }

    /// Dofs on a tagged boundary; `component` selects one vector component,
    /// `None` returns all of them.
    pub fn boundary_dofs(&self, tag: BoundaryTag, component: Option<usize>) -> Vec<usize> {
        let nc = self.kind.components();
        let comps: Vec<usize> = match component {
            Some(k) => vec![k],
            None => (0..nc).collect(),
        };
        let mut out: Vec<usize> = self
            .boundary_nodes(tag)
            .iter()
            .flat_map(|&n| comps.iter().map(move |&k| nc * n + k))
            .collect();
        out.sort_unstable();
        out
    }

    /// Interleaved coefficients of a vector field sampled at the nodes.
    pub fn interpolate_vector(&self, f: impl Fn([f64; 2]) -> [f64; 2]) -> FieldVector {
        self.node_coords.iter().flat_map(|&p| f(p)).collect()
    }

    pub fn interpolate_scalar(&self, f: impl Fn([f64; 2]) -> f64) -> FieldVector {
        self.node_coords.iter().map(|&p| f(p)).collect()
    }
}

/// Material and flow parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Lamé shear modulus (Pa).
    pub mu: f64,
    /// Lamé first parameter (Pa).
    pub lambda: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Storage coefficients 1/M (Pa⁻¹).
    pub beta1: f64,
    pub beta2: f64,
    /// Permeabilities (m²).
    pub k1: f64,
    pub k2: f64,
    /// Fluid viscosity (Pa·s).
    pub eta: f64,
    /// Exchange coefficient between the two continua.
    pub gamma: f64,
}

impl MaterialParams {
    /// One of the three tabulated parameter sets (1, 2 or 3). The sets share
    /// everything except the storage coefficients.
    pub fn parameter_set(set: u8) -> Result<Self> {
        let (beta1, beta2) = match set {
            1 => (54e-9, 14e-9),
            2 => (108e-9, 24e-9),
            3 => (216e-9, 48e-9),
            _ => return Err(Error::InvalidArgument(format!("unknown parameter set {set}"))),
        };
        Ok(Self {
            mu: 4.2e6,
            lambda: 2.4e6,
            alpha1: 0.95,
            alpha2: 0.12,
            beta1,
            beta2,
            k1: 6.18e-15,
            k2: 27.2e-15,
            eta: 1e-3,
            gamma: 5e-10,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mu", self.mu),
            ("lambda", self.lambda),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("k1", self.k1),
            ("k2", self.k2),
            ("eta", self.eta),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        for (name, v) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }

    pub fn alpha(&self) -> [f64; 2] {
        [self.alpha1, self.alpha2]
    }

    pub fn beta(&self) -> [f64; 2] {
        [self.beta1, self.beta2]
    }

    /// Mobilities k_l/η.
    pub fn mobility(&self) -> [f64; 2] {
        [self.k1 / self.eta, self.k2 / self.eta]
    }
}
