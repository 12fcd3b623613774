//! Biorthonormal eigensystems and metric operators for real-spectrum,
//! non-Hermitian Hamiltonians.
//!
//! For a diagonalizable `H` with real spectrum the right eigenvectors
//! `|ψₙ⟩` (columns of `Ψ`) and the dual vectors `|φₙ⟩` (columns of
//! `Φ = (Ψ⁻¹)†`) satisfy
//!
//! ```text
//! ⟨φₙ|ψₘ⟩ = δₙₘ,   Σₙ |ψₙ⟩⟨φₙ| = I,   H = Σₙ Eₙ |ψₙ⟩⟨φₙ|,   H†|φₙ⟩ = Eₙ|φₙ⟩.
//! ```
//!
//! The metric `Θ = Σₙ |φₙ⟩⟨φₙ|` is positive definite and makes `H`
//! self-adjoint under `⟨·|Θ·⟩`, i.e. `H†Θ = ΘH`. It depends on how the
//! scale of each eigenvector is split between `ψₙ` and `φₙ`; see
//! [`EigenvectorMode`].

mod eigen;
mod eigvec_file;
mod metric;

use nalgebra::storage::RawStorage;
use nalgebra::{Complex, ComplexField, DMatrix, DVector, Dim, Matrix, SVD};
use thiserror::Error;

pub use eigen::{eigendecompose, ComplexSpectrum, CLUSTER_GAP};
pub use eigvec_file::{parse_complex, parse_eigenvector_file};
pub use metric::{metric_operator, omega_sqrt, MetricPair};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("Schur iteration did not converge")]
    NoConvergence,
    #[error("eigenpair residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
    #[error("defective eigenvalue {eigenvalue} (multiplicity {multiplicity}, null-space residual {residual:e})")]
    Defective { eigenvalue: C64, multiplicity: usize, residual: f64 },
    #[error("spectrum is not real (max |Im| = {max_imaginary:e}); offending eigenvalues: {}", fmt_complex_list(.offending))]
    ComplexSpectrum { offending: Vec<C64>, max_imaginary: f64 },
    #[error("eigenvector matrix condition number {condition:e} exceeds {limit:e}; Hamiltonian is (nearly) defective")]
    IllConditioned { condition: f64, limit: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("column {column} is not an eigenvector (residual {residual:e})")]
    NotEigenvector { column: usize, residual: f64 },
    #[error("metric has imaginary residue {0:e}")]
    ComplexMetric(f64),
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("metric is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("eigenvector file line {line}: {msg}")]
    EigvecFile { line: usize, msg: String },
}

fn fmt_complex_list(values: &[C64]) -> String {
    values.iter().map(|z| format!("{z}")).collect::<Vec<_>>().join(", ")
}

/// Numerical thresholds used across the spectral pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Eigenpair residual bound relative to `‖H‖_F`.
    pub residual: f64,
    /// `|Im λ| ≤ reality·(1 + |λ|)` admits `λ` as real.
    pub reality: f64,
    /// Largest imaginary entry of `ΦΦ†` that is silently discarded.
    pub imaginary_discard: f64,
    /// Largest admissible condition number of `Ψ`.
    pub max_condition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { residual: 1e-9, reality: 1e-9, imaginary_discard: 1e-10, max_condition: 1e6 }
    }
}

/// Returns the real parts of the eigenvalues when every eigenvalue passes
/// `|Im λ| ≤ tol·(1 + |λ|)`.
pub fn require_real_spectrum(s: &ComplexSpectrum, tol: f64) -> Result<Vec<f64>, SpectralError> {
    let offending: Vec<C64> = s
        .eigenvalues
        .iter()
        .copied()
        .filter(|l| l.im.abs() > tol * (1.0 + l.norm()))
        .collect();
    if offending.is_empty() {
        Ok(s.eigenvalues.iter().map(|l| l.re).collect())
    } else {
        Err(SpectralError::ComplexSpectrum { offending, max_imaginary: s.max_imaginary() })
    }
}

/// How right eigenvectors are scaled before the dual basis is derived.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenvectorMode {
    /// Unit Euclidean norm, largest-magnitude component real positive.
    /// Degenerate eigenspaces get an orthonormal basis.
    Canonical,
    /// Caller-supplied eigenvectors, one per column, used as given.
    Explicit(CMatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    Canonical,
    Explicit,
}

/// Real energies with paired right (`psi`) and dual (`phi`) eigenvectors,
/// column `n` of each belonging to `energies[n]`, in ascending energy.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthonormalSystem {
    pub energies: Vec<f64>,
    pub psi: CMatrix,
    pub phi: CMatrix,
    pub mode: ScalingMode,
    /// 2-norm condition number of `psi`.
    pub condition: f64,
}

/// Max-entry defects of the structural identities of a system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemResiduals {
    /// `‖Φ†Ψ − I‖`
    pub biorthonormality: f64,
    /// `‖Σ|ψₙ⟩⟨φₙ| − I‖`
    pub completeness: f64,
    /// `‖Σ Eₙ|ψₙ⟩⟨φₙ| − H‖`
    pub reconstruction: f64,
    /// `maxₙ ‖H†φₙ − Eₙφₙ‖∞`
    pub left_eigen: f64,
}

impl SystemResiduals {
    pub fn max(&self) -> f64 {
        self.biorthonormality
            .max(self.completeness)
            .max(self.reconstruction)
            .max(self.left_eigen)
    }
}

pub(crate) fn max_abs<T, R, C, S>(m: &Matrix<T, R, C, S>) -> f64
where
    T: ComplexField<RealField = f64>,
    R: Dim,
    C: Dim,
    S: RawStorage<T, R, C>,
{
    m.iter().map(|z| z.clone().abs()).fold(0.0, f64::max)
}

impl BiorthonormalSystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `Θ⁻¹ = Σₙ |ψₙ⟩⟨ψₙ| = ΨΨ†`.
    pub fn theta_inverse(&self) -> CMatrix {
        &self.psi * self.psi.adjoint()
    }

    pub fn residuals(&self, h: &DMatrix<f64>) -> SystemResiduals {
        let n = self.dim();
        let id = CMatrix::identity(n, n);
        let hc = eigen::to_complex(h);
        let energies = CVector::from_iterator(n, self.energies.iter().map(|&e| C64::new(e, 0.0)));
        let scaled = &self.psi * CMatrix::from_diagonal(&energies);
        let h_dag = hc.adjoint();
        let left_eigen = (0..n)
            .map(|k| {
                let phi = self.phi.column(k);
                max_abs(&(&h_dag * phi - phi * energies[k]))
            })
            .fold(0.0, f64::max);
        SystemResiduals {
            biorthonormality: max_abs(&(self.phi.adjoint() * &self.psi - &id)),
            completeness: max_abs(&(&self.psi * self.phi.adjoint() - &id)),
            reconstruction: max_abs(&(scaled * self.phi.adjoint() - hc)),
            left_eigen,
        }
    }
}

/// Builds the biorthonormal system of `h`.
///
/// The spectrum of `h` must pass [`require_real_spectrum`]. The dual basis is
/// `Φ = (Ψ⁻¹)†`; an ill-conditioned `Ψ` is rejected as (nearly) defective.
pub fn biorthonormal_system(
    h: &DMatrix<f64>,
    mode: &EigenvectorMode,
    tol: &Tolerances,
) -> Result<BiorthonormalSystem, SpectralError> {
    let spectrum = eigendecompose(h, tol.residual)?;
    let energies = require_real_spectrum(&spectrum, tol.reality)?;
    let n = spectrum.dim();

    let (energies, psi, scaling) = match mode {
        EigenvectorMode::Canonical => {
            (energies, spectrum.right_eigenvectors, ScalingMode::Canonical)
        }
        EigenvectorMode::Explicit(given) => {
            let (e, p) = explicit_pairs(h, given, tol)?;
            (e, p, ScalingMode::Explicit)
        }
    };
    debug_assert_eq!(psi.ncols(), n);

    let condition = condition_number(&psi);
    if !(condition <= tol.max_condition) {
        return Err(SpectralError::IllConditioned { condition, limit: tol.max_condition });
    }
    let inverse = psi.clone().try_inverse().ok_or(SpectralError::IllConditioned {
        condition: f64::INFINITY,
        limit: tol.max_condition,
    })?;
    Ok(BiorthonormalSystem {
        energies,
        phi: inverse.adjoint(),
        psi,
        mode: scaling,
        condition,
    })
}

/// Validates caller-supplied eigenvectors and orders them by energy.
fn explicit_pairs(
    h: &DMatrix<f64>,
    given: &CMatrix,
    tol: &Tolerances,
) -> Result<(Vec<f64>, CMatrix), SpectralError> {
    let n = h.nrows();
    if given.nrows() != n {
        return Err(SpectralError::DimensionMismatch { expected: n, found: given.nrows() });
    }
    if given.ncols() != n {
        return Err(SpectralError::DimensionMismatch { expected: n, found: given.ncols() });
    }
    let hc = eigen::to_complex(h);
    let h_norm = h.norm();
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let v = given.column(k);
        let vv = v.norm_squared();
        if vv == 0.0 {
            return Err(SpectralError::NotEigenvector { column: k, residual: f64::INFINITY });
        }
        let hv = &hc * v;
        let lambda = v.dotc(&hv) / vv;
        let residual = (hv - v * lambda).norm() / vv.sqrt();
        if residual > tol.residual * h_norm {
            return Err(SpectralError::NotEigenvector { column: k, residual });
        }
        if lambda.im.abs() > tol.reality * (1.0 + lambda.norm()) {
            return Err(SpectralError::ComplexSpectrum {
                offending: vec![lambda],
                max_imaginary: lambda.im.abs(),
            });
        }
        pairs.push((lambda.re, k));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut psi = CMatrix::zeros(n, n);
    for (slot, &(_, k)) in pairs.iter().enumerate() {
        psi.set_column(slot, &given.column(k));
    }
    Ok((pairs.into_iter().map(|(e, _)| e).collect(), psi))
}

fn condition_number(m: &CMatrix) -> f64 {
    let sv = SVD::new(m.clone(), false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `max |(H†Θ − ΘH)ᵢⱼ|`; zero certifies that `H` is self-adjoint under
/// `⟨·|Θ·⟩`.
pub fn pseudo_hermiticity_residual(h: &DMatrix<f64>, theta: &DMatrix<f64>) -> f64 {
    max_abs(&(h.transpose() * theta - theta * h))
}
