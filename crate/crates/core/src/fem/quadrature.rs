use crate::{Error, Result};

/// Symmetric quadrature rule on the reference simplex, points in
/// barycentric coordinates.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    dim: usize,
    degree: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Cheapest tabulated rule exact for polynomials of total degree `degree`.
    pub fn with_degree(dim: usize, degree: usize) -> Result<Self> {
        let rule = match (dim, degree) {
            (2, 0..=2) => triangle_degree2(),
            (2, 3..=4) => triangle_degree4(),
            (3, 0..=2) => tetrahedron_degree2(),
            (3, 3..=5) => tetrahedron_degree5(),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "no quadrature rule of degree {degree} in dimension {dim}"
                )))
            }
        };
        Ok(rule)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Barycentric coordinates of point `q` (`d + 1` entries).
    pub fn point(&self, q: usize) -> &[f64] {
        let n = self.dim + 1;
        &self.points[q * n..(q + 1) * n]
    }

    /// Weight of point `q`; the weights sum to the reference measure `1/d!`.
    pub fn weight(&self, q: usize) -> f64 {
        self.weights[q]
    }

    /// Weight of point `q` rescaled to a cell of measure `volume`.
    pub fn scaled_weight(&self, q: usize, volume: f64) -> f64 {
        self.weights[q] * volume / reference_measure(self.dim)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.points.chunks(self.dim + 1).zip(self.weights.iter().copied())
    }
}

pub fn reference_measure(dim: usize) -> f64 {
    1.0 / (1..=dim).product::<usize>() as f64
}

/// Expands orbits of barycentric points into the full point set.
fn from_orbits(dim: usize, degree: usize, orbits: &[(Vec<f64>, f64)]) -> QuadratureRule {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let measure = reference_measure(dim);
    for (generator, w) in orbits {
        let mut perms = distinct_permutations(generator);
        perms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for p in perms {
            points.extend(p);
            weights.push(w * measure);
        }
    }
    QuadratureRule {
        dim,
        degree,
        points,
        weights,
    }
}

fn distinct_permutations(v: &[f64]) -> Vec<Vec<f64>> {
    if v.len() == 1 {
        return vec![v.to_vec()];
    }
    let mut out: Vec<Vec<f64>> = Vec::new();
    for i in 0..v.len() {
        if v[..i].contains(&v[i]) {
            continue;
        }
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut tail in distinct_permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

// Weights below are fractions of the cell measure.

fn triangle_degree2() -> QuadratureRule {
    from_orbits(2, 2, &[(vec![2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0)])
}

fn triangle_degree4() -> QuadratureRule {
    let a = 0.445_948_490_915_965;
    let b = 0.091_576_213_509_771;
    from_orbits(
        2,
        4,
        &[
            (vec![a, a, 1.0 - 2.0 * a], 0.223_381_589_678_011),
            (vec![b, b, 1.0 - 2.0 * b], 0.109_951_743_655_322),
        ],
    )
}

fn tetrahedron_degree2() -> QuadratureRule {
    let a = (5.0 - 5f64.sqrt()) / 20.0;
    from_orbits(3, 2, &[(vec![1.0 - 3.0 * a, a, a, a], 0.25)])
}

fn tetrahedron_degree5() -> QuadratureRule {
    let a = 0.092_735_250_310_891_2;
    let b = 0.310_885_919_263_300_6;
    let c = 0.454_496_295_874_350_4;
    from_orbits(
        3,
        5,
        &[
            (vec![1.0 - 3.0 * a, a, a, a], 0.073_493_043_116_361_95),
            (vec![1.0 - 3.0 * b, b, b, b], 0.112_687_925_718_015_85),
            (vec![c, c, 0.5 - c, 0.5 - c], 0.042_546_020_777_081_47),
        ],
    )
}
