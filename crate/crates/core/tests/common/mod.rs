//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use phwalk_core::spectral::parse_eigenvector_file;
use phwalk_core::{
    biorthonormal_system, parse_graph, BiorthonormalSystem, CMatrix, EigenvectorMode, Graph,
    MetricPair, Tolerances, C64,
};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn load_graph(name: &str) -> Graph {
    parse_graph(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

pub fn load_eigvecs(name: &str) -> CMatrix {
    parse_eigenvector_file(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

/// Graph Hamiltonian, biorthonormal system and metric.
pub struct Setup {
    pub graph: Graph,
    pub h: DMatrix<f64>,
    pub sys: BiorthonormalSystem,
    pub metric: MetricPair,
}

pub fn setup(graph: Graph, mode: &EigenvectorMode) -> Result<Setup, phwalk_core::SpectralError> {
    let h = graph.laplacian_hamiltonian().into_matrix();
    let tol = Tolerances::default();
    let sys = biorthonormal_system(&h, mode, &tol)?;
    let metric = MetricPair::from_system(&sys, &tol)?;
    Ok(Setup { graph, h, sys, metric })
}

/// Triangle fixture with the reference eigenvector scalings.
pub fn triangle_explicit() -> Setup {
    setup(load_graph("triangle.graph"), &EigenvectorMode::Explicit(load_eigvecs("triangle.eigvecs"))).unwrap()
}

pub fn square_explicit() -> Setup {
    setup(load_graph("square.graph"), &EigenvectorMode::Explicit(load_eigvecs("square.eigvecs"))).unwrap()
}

/// Closed-form sq probabilities on the triangle fixture from vertex 1.
pub fn triangle_start1(t: f64) -> [f64; 3] {
    let (c1, c2, c3) = (t.cos(), (2. * t).cos(), (3. * t).cos());
    [
        (18. + 8. * c1 + 2. * c2 + 8. * c3) / 40.,
        (17. + 12. * c1 - 12. * c2 - 8. * c3) / 90.,
        (26. - 24. * c1 + 6. * c2 - 8. * c3) / 72.,
    ]
}

/// Closed-form sq probabilities on the triangle fixture from vertex 2.
pub fn triangle_start2(t: f64) -> [f64; 3] {
    let (c1, c2, c3) = (t.cos(), (2. * t).cos(), (3. * t).cos());
    [
        (3. + 2. * c1 - c2 - 2. * c3) / 10.,
        (14. + 6. * c1 + 12. * c2 + 4. * c3) / 45.,
        (14. - 12. * c1 - 6. * c2 + 4. * c3) / 36.,
    ]
}

/// Hermitian K₃ walk from vertex 1.
pub fn k3_start1(t: f64) -> [f64; 3] {
    let c = (3. * t).cos();
    [5. / 9. + 4. / 9. * c, 2. / 9. * (1. - c), 2. / 9. * (1. - c)]
}

/// Random simple graph on `n` vertices: each pair is an edge with
/// probability `density`, directed (random orientation) with probability
/// `directed`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64, directed: f64) -> Graph {
    let mut text = format!("vertices {n}\n");
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(density) {
                if rng.gen_bool(directed) {
                    let (a, b) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
                    text.push_str(&format!("{a} -> {b}\n"));
                } else {
                    text.push_str(&format!("{u} -- {v}\n"));
                }
            }
        }
    }
    parse_graph(&text).unwrap()
}

/// Draws random mixed graphs until one passes the real-spectrum gate and
/// yields a valid canonical system and metric. Returns the setup and the
/// number of rejected draws.
pub fn random_accepted<R: Rng>(rng: &mut R, n_range: std::ops::RangeInclusive<usize>) -> (Setup, usize) {
    let mut rejected = 0;
    loop {
        let n = rng.gen_range(n_range.clone());
        let g = random_graph(rng, n, 0.5, 0.3);
        match setup(g, &EigenvectorMode::Canonical) {
            Ok(s) => return (s, rejected),
            Err(_) => rejected += 1,
        }
    }
}

/// Undirected graph generator for the Hermitian comparisons.
pub fn random_undirected<R: Rng>(rng: &mut R, n: usize) -> Graph {
    random_graph(rng, n, 0.5, 0.0)
}

pub fn max_abs_c(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
/// Independent of any eigendecomposition.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm1 * scale > 0.125 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * C64::new(scale, 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &x / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn to_complex(h: &DMatrix<f64>) -> CMatrix {
    h.map(|x| C64::new(x, 0.0))
}

/// `e^{−iHt}`.
pub fn unitary_oracle(h: &DMatrix<f64>, t: f64) -> CMatrix {
    expm(&(to_complex(h) * C64::new(0.0, -t)))
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse(m: &CMatrix) -> Option<CMatrix> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n, n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))?;
        if a[(pivot, col)].norm() == 0.0 {
            return None;
        }
        a.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        let p = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = a[(i, col)];
                if f != C64::new(0.0, 0.0) {
                    for j in 0..n {
                        let (aj, ij) = (a[(col, j)], inv[(col, j)]);
                        a[(i, j)] -= f * aj;
                        inv[(i, j)] -= f * ij;
                    }
                }
            }
        }
    }
    Some(inv)
}
