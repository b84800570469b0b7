//! Triangle and edge quadrature. Triangle weights sum to 1 and are scaled by
//! the cell area at the call site.

pub struct TriangleRule {
    /// Barycentric coordinates of the points.
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

fn orbit3(a: f64, w: f64, points: &mut Vec<[f64; 3]>, weights: &mut Vec<f64>) {
    let b = 1.0 - 2.0 * a;
    for p in [[b, a, a], [a, b, a], [a, a, b]] {
        points.push(p);
        weights.push(w);
    }
}

impl TriangleRule {
    /// 6 points, exact for polynomials of degree 4.
    pub fn degree4() -> Self {
        let mut points = Vec::with_capacity(6);
        let mut weights = Vec::with_capacity(6);
        orbit3(0.445_948_490_915_964_9, 0.223_381_589_678_011_47, &mut points, &mut weights);
        orbit3(0.091_576_213_509_770_74, 0.109_951_743_655_321_87, &mut points, &mut weights);
        Self { points, weights }
    }

    /// 7 points, exact for polynomials of degree 5.
    pub fn degree5() -> Self {
        let mut points = vec![[1.0 / 3.0; 3]];
        let mut weights = vec![0.225];
        orbit3(0.470_142_064_105_115_1, 0.132_394_152_788_506_2, &mut points, &mut weights);
        orbit3(0.101_286_507_323_456_34, 0.125_939_180_544_827_14, &mut points, &mut weights);
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// 3-point Gauss–Legendre on [0, 1]: (abscissa, weight), weights sum to 1.
pub fn gauss3_unit() -> [(f64, f64); 3] {
    let d = 0.5 * (0.6f64).sqrt();
    [(0.5 - d, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + d, 5.0 / 18.0)]
}
