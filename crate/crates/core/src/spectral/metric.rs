use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{max_abs, BiorthonormalSystem, SpectralError, Tolerances};

/// The metric `Θ`, its positive square root `Ω`, and the spectral data
/// `Θ = Σ εₙ |εₙ⟩⟨εₙ|` used to build `Ω = Σ √εₙ |εₙ⟩⟨εₙ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPair {
    pub theta: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    /// Ascending.
    pub theta_eigenvalues: DVector<f64>,
    /// Orthonormal columns, paired with `theta_eigenvalues`.
    pub theta_eigenvectors: DMatrix<f64>,
}

impl MetricPair {
    pub fn from_system(sys: &BiorthonormalSystem, tol: &Tolerances) -> Result<Self, SpectralError> {
        omega_sqrt(&metric_operator(sys, tol)?)
    }

    pub fn dim(&self) -> usize {
        self.theta.nrows()
    }
}

/// `Θ = ΦΦ† = Σₙ |φₙ⟩⟨φₙ|`, symmetrized and with its (vanishing) imaginary
/// part dropped.
pub fn metric_operator(
    sys: &BiorthonormalSystem,
    tol: &Tolerances,
) -> Result<DMatrix<f64>, SpectralError> {
    let theta_c = &sys.phi * sys.phi.adjoint();
    let scale = max_abs(&theta_c).max(1.0);
    let imag = theta_c.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > tol.imaginary_discard * scale {
        return Err(SpectralError::ComplexMetric(imag));
    }
    let re = theta_c.map(|z| z.re);
    let theta = (&re + re.transpose()) * 0.5;
    let min = theta.symmetric_eigenvalues().min();
    if !(min > 0.0) {
        return Err(SpectralError::NotPositiveDefinite(min));
    }
    Ok(theta)
}

/// Positive square root of a symmetric positive-definite `Θ` via its
/// eigendecomposition.
pub fn omega_sqrt(theta: &DMatrix<f64>) -> Result<MetricPair, SpectralError> {
    if !theta.is_square() {
        return Err(SpectralError::NotSquare { rows: theta.nrows(), cols: theta.ncols() });
    }
    let n = theta.nrows();
    let scale = max_abs(theta).max(f64::MIN_POSITIVE);
    let asym = max_abs(&(theta - theta.transpose()));
    if asym > 1e-12 * scale {
        return Err(SpectralError::NotSymmetric(asym));
    }

    let eig = SymmetricEigen::new(theta.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (slot, &k) in order.iter().enumerate() {
        vectors.set_column(slot, &eig.eigenvectors.column(k));
    }

    let largest = values.iter().copied().fold(0.0, f64::max);
    let smallest = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smallest > n as f64 * f64::EPSILON * largest) {
        return Err(SpectralError::NotPositiveDefinite(smallest));
    }

    let roots = values.map(f64::sqrt);
    let omega = &vectors * DMatrix::from_diagonal(&roots) * vectors.transpose();
    let omega = (&omega + omega.transpose()) * 0.5;
    Ok(MetricPair {
        theta: theta.clone(),
        omega,
        theta_eigenvalues: values,
        theta_eigenvectors: vectors,
    })
}
