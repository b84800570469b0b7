use super::Mesh;

/// Bucket grid over the mesh bounding box for point-in-cell queries.
#[derive(Debug, Clone)]
pub struct PointLocator<'m> {
    mesh: &'m Mesh,
    origin: [f64; 2],
    cell_size: [f64; 2],
    dims: [usize; 2],
    buckets: Vec<Vec<usize>>,
}

impl<'m> PointLocator<'m> {
    pub fn new(mesh: &'m Mesh) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for v in &mesh.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let side = ((mesh.cells.len() as f64).sqrt().ceil() as usize).max(1);
        let dims = [side, side];
        let cell_size = [
            ((hi[0] - lo[0]) / side as f64).max(f64::MIN_POSITIVE),
            ((hi[1] - lo[1]) / side as f64).max(f64::MIN_POSITIVE),
        ];
        let mut loc = Self {
            mesh,
            origin: lo,
            cell_size,
            dims,
            buckets: vec![Vec::new(); side * side],
        };
        for (c, _) in mesh.cells.iter().enumerate() {
            let pts = mesh.cell_coords(c);
            let (mut bl, mut bh) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for p in pts {
                for k in 0..2 {
                    bl[k] = bl[k].min(p[k]);
                    bh[k] = bh[k].max(p[k]);
                }
            }
            let [i0, j0] = loc.bucket_of(bl);
            let [i1, j1] = loc.bucket_of(bh);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    loc.buckets[j * dims[0] + i].push(c);
                }
            }
        }
        loc
    }

    fn bucket_of(&self, p: [f64; 2]) -> [usize; 2] {
        let mut out = [0; 2];
        for k in 0..2 {
            let t = ((p[k] - self.origin[k]) / self.cell_size[k]).floor();
            out[k] = (t.max(0.0) as usize).min(self.dims[k] - 1);
        }
        out
    }

    /// Barycentric coordinates of `p` in cell `c`.
    pub fn barycentric(&self, c: usize, p: [f64; 2]) -> [f64; 3] {
        barycentric(self.mesh.cell_coords(c), p)
    }

    /// Cell containing `p` and its barycentric coordinates. Points within
    /// roundoff of the mesh are attributed to the nearest cell.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, [f64; 3])> {
        let [i, j] = self.bucket_of(p);
        let best = |cands: &mut dyn Iterator<Item = usize>| {
            let mut best: Option<(usize, [f64; 3], f64)> = None;
            for c in cands {
                let l = self.barycentric(c, p);
                let m = l[0].min(l[1]).min(l[2]);
                if best.is_none_or(|b| m > b.2) {
                    best = Some((c, l, m));
                }
            }
            best
        };
        let found = best(&mut self.buckets[j * self.dims[0] + i].iter().copied())
            .filter(|b| b.2 >= -1e-10)
            .or_else(|| best(&mut (0..self.mesh.cells.len())));
        found.filter(|b| b.2 >= -1e-8).map(|(c, l, _)| (c, l))
    }
}

pub(crate) fn barycentric(pts: [[f64; 2]; 3], p: [f64; 2]) -> [f64; 3] {
    let [p0, p1, p2] = pts;
    let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    let (dx, dy) = (p[0] - p0[0], p[1] - p0[1]);
    let l1 = ((p2[1] - p0[1]) * dx - (p2[0] - p0[0]) * dy) / det;
    let l2 = (-(p1[1] - p0[1]) * dx + (p1[0] - p0[0]) * dy) / det;
    [1.0 - l1 - l2, l1, l2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_unit_square, MeshSpec};

    #[test]
    fn vertices_and_centroids_found() {
        let m = generate_unit_square(&MeshSpec::new(7, 2.0)).unwrap();
        let loc = PointLocator::new(&m);
        for c in 0..m.num_cells() {
            let pts = m.cell_coords(c);
            let cen = [(pts[0][0] + pts[1][0] + pts[2][0]) / 3.0, (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0];
            let (found, l) = loc.locate(cen).unwrap();
            assert_eq!(found, c);
            assert!(l.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-12));
        }
        for v in &m.vertices {
            assert!(loc.locate(*v).is_some());
        }
        assert!(loc.locate([2.0, 2.0]).is_none());
    }
}
