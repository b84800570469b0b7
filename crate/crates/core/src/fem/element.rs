//! Shape functions on a single triangle, written in barycentric coordinates.
//!
//! P2 local node order: vertices 0, 1, 2, then edge midpoints (0,1), (1,2), (2,0).

use crate::{Error, Result};

/// Local vertex pairs of the P2 edge nodes.
pub const P2_EDGES: [[usize; 2]; 3] = [[0, 1], [1, 2], [2, 0]];

#[derive(Debug, Clone, Copy)]
pub struct Affine {
    pub area: f64,
    /// Gradients of the barycentric coordinates (constant per cell).
    pub grad_lambda: [[f64; 2]; 3],
}

impl Affine {
    pub fn new(x: [[f64; 2]; 3]) -> Result<Self> {
        let det = (x[1][0] - x[0][0]) * (x[2][1] - x[0][1]) - (x[2][0] - x[0][0]) * (x[1][1] - x[0][1]);
        if !(det > 0.0) {
            return Err(Error::Geometry(format!("degenerate or clockwise cell (2·area = {det:e})")));
        }
        let grad_lambda = [
            [(x[1][1] - x[2][1]) / det, (x[2][0] - x[1][0]) / det],
            [(x[2][1] - x[0][1]) / det, (x[0][0] - x[2][0]) / det],
            [(x[0][1] - x[1][1]) / det, (x[1][0] - x[0][0]) / det],
        ];
        Ok(Self { area: 0.5 * det, grad_lambda })
    }
}

pub fn p2_values(l: [f64; 3]) -> [f64; 6] {
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[0] * l[1],
        4.0 * l[1] * l[2],
        4.0 * l[2] * l[0],
    ]
}

pub fn p2_gradients(l: [f64; 3], g: &[[f64; 2]; 3]) -> [[f64; 2]; 6] {
    let mut out = [[0.0; 2]; 6];
    for i in 0..3 {
        let s = 4.0 * l[i] - 1.0;
        out[i] = [s * g[i][0], s * g[i][1]];
    }
    for (k, [a, b]) in P2_EDGES.iter().copied().enumerate() {
        out[3 + k] = [
            4.0 * (l[b] * g[a][0] + l[a] * g[b][0]),
            4.0 * (l[b] * g[a][1] + l[a] * g[b][1]),
        ];
    }
    out
}

/// 1D quadratic basis on an edge parametrised by s ∈ [0, 1]: (start, mid, end).
pub fn p2_edge_values(s: f64) -> [f64; 3] {
    [(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s), s * (2.0 * s - 1.0)]
}
