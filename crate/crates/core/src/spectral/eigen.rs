//! Dense eigendecomposition of a real, generally non-symmetric matrix.
//!
//! Eigenvalues come from the complex Schur form `H = Q T Q†`. Eigenvectors
//! of isolated eigenvalues are recovered by back-substitution on `T`;
//! eigenvalues closer together than the cluster gap are treated as one
//! degenerate eigenvalue and their eigenspace is taken as the numerical
//! null space of `H - μI` (orthonormal by construction). A cluster whose
//! null space has lower dimension than its multiplicity is defective.

use nalgebra::{Complex, DMatrix, DVector, Schur, SVD};

use super::{CMatrix, SpectralError};

type C64 = Complex<f64>;

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues with paired unit-norm right eigenvectors (column `k` belongs
/// to eigenvalue `k`), sorted by real part then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    pub eigenvalues: Vec<C64>,
    pub right_eigenvectors: CMatrix,
}

impl ComplexSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest `|Im λ|` over the spectrum.
    pub fn max_imaginary(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.im.abs()).fold(0.0, f64::max)
    }

    /// `max_k ‖H v_k − λ_k v_k‖₂`.
    pub fn max_residual(&self, h: &DMatrix<f64>) -> f64 {
        let hc = to_complex(h);
        (0..self.dim())
            .map(|k| {
                let v = self.right_eigenvectors.column(k);
                (&hc * v - v * self.eigenvalues[k]).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn to_complex(h: &DMatrix<f64>) -> CMatrix {
    h.map(|x| C64::new(x, 0.0))
}

/// Relative gap below which two eigenvalues are considered one cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

/// Computes all eigenpairs of `h`, checking `‖H v − λ v‖ ≤ tol·‖H‖_F` for
/// every pair.
pub fn eigendecompose(h: &DMatrix<f64>, tol: f64) -> Result<ComplexSpectrum, SpectralError> {
    if !h.is_square() {
        return Err(SpectralError::NotSquare { rows: h.nrows(), cols: h.ncols() });
    }
    if !(tol > 0.0) {
        return Err(SpectralError::InvalidTolerance(tol));
    }
    let n = h.nrows();
    let h_norm = h.norm();
    let hc = to_complex(h);
    let schur = Schur::try_new(hc.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(SpectralError::NoConvergence)?;
    let (q, t) = schur.unpack();
    let diag: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();

    let clusters = cluster(&diag, CLUSTER_GAP * h_norm.max(1.0));
    let t_scale = f64::EPSILON * t.norm().max(f64::MIN_POSITIVE);

    // (eigenvalue, eigenvector) pairs in Schur order, clusters expanded.
    let mut pairs: Vec<(C64, DVector<C64>)> = Vec::with_capacity(n);
    for members in clusters {
        if members.len() == 1 {
            let j = members[0];
            let x = triangular_eigenvector(&t, j, t_scale);
            pairs.push((diag[j], &q * x));
        } else {
            let m = members.len();
            let mu = members.iter().map(|&j| diag[j]).sum::<C64>() / m as f64;
            let basis = null_space(&hc, mu, m, tol * h_norm)?;
            for v in basis {
                pairs.push((mu, v));
            }
        }
    }

    pairs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut vectors = CMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (k, (lambda, v)) in pairs.into_iter().enumerate() {
        vectors.set_column(k, &canonical_phase(v));
        eigenvalues.push(lambda);
    }
    let spectrum = ComplexSpectrum { eigenvalues, right_eigenvectors: vectors };
    let residual = spectrum.max_residual(h);
    if residual > tol * h_norm {
        return Err(SpectralError::ResidualTooLarge { residual, bound: tol * h_norm });
    }
    Ok(spectrum)
}

/// Groups indices whose eigenvalues are linked by gaps below `gap`
/// (single linkage). Groups are returned in order of their first member.
fn cluster(values: &[C64], gap: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() < gap {
                let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                if ri != rj {
                    label[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut label, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Solves `(T − t_jj I) x = 0` with `x_j = 1`, `x_i = 0` for `i > j`.
fn triangular_eigenvector(t: &CMatrix, j: usize, smin: f64) -> DVector<C64> {
    let n = t.nrows();
    let lambda = t[(j, j)];
    let mut x = DVector::zeros(n);
    x[j] = C64::new(1.0, 0.0);
    for i in (0..j).rev() {
        let mut s = C64::new(0.0, 0.0);
        for k in i + 1..=j {
            s += t[(i, k)] * x[k];
        }
        let mut d = t[(i, i)] - lambda;
        if d.norm() < smin {
            d = C64::new(smin, 0.0);
        }
        x[i] = -s / d;
    }
    x
}

/// Orthonormal basis of the `m` smallest right singular vectors of
/// `H − μI`, failing if any of them leaves a residual above `bound`.
fn null_space(
    hc: &CMatrix,
    mu: C64,
    m: usize,
    bound: f64,
) -> Result<Vec<DVector<C64>>, SpectralError> {
    let n = hc.nrows();
    let shifted = hc - CMatrix::identity(n, n) * mu;
    let svd = SVD::new(shifted, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let worst = svd.singular_values[order[m - 1]];
    if worst > bound {
        return Err(SpectralError::Defective {
            eigenvalue: mu,
            multiplicity: m,
            residual: worst,
        });
    }
    // Rows of V† are conjugated right singular vectors.
    Ok(order[..m]
        .iter()
        .map(|&k| v_t.row(k).transpose().map(|z| z.conj()))
        .collect())
}

/// Unit Euclidean norm, largest-magnitude component real and positive
/// (first such component on ties).
pub(crate) fn canonical_phase(mut v: DVector<C64>) -> DVector<C64> {
    let norm = v.norm();
    if norm == 0.0 {
        return v;
    }
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    let phase = v[best].conj() / v[best].norm();
    v.apply(|z| *z = *z * phase / norm);
    v[best].im = 0.0;
    v
}
