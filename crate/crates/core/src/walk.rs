//! Time evolution and vertex probabilities for three walk models:
//!
//! * `sq`: pseudo-Hermitian quantum walk, `p_k = |⟨k|Ω|ψ(t)⟩|²` with
//!   `|ψ(t)⟩ = Σₙ e^{−iEₙt} |ψₙ⟩⟨φₙ|ψ₀⟩` and `⟨ψ₀|Θ|ψ₀⟩ = 1`;
//! * `q`: Hermitian quantum walk on a symmetric Hamiltonian,
//!   `p_k = |⟨k|e^{−iHt}|ψ₀⟩|²`;
//! * `c`: classical continuous-time random walk, `p(t) = e^{−Ht} p₀`,
//!   expanded in the biorthonormal basis so directed graphs work too.
//!
//! All evolution is spectral and therefore exact in `t`. Grid evaluation is
//! embarrassingly parallel over time points; with the `parallel` feature the
//! rows of a [`ProbabilitySeries`] are computed on the rayon pool. Each row
//! is computed by the same sequential code either way, so the output is
//! bitwise identical across execution modes.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::spectral::{BiorthonormalSystem, CMatrix, CVector, MetricPair, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("initial state is the zero vector")]
    ZeroVector,
    #[error("initial state has nonpositive metric norm {0:e}")]
    NonPositiveNorm(f64),
    #[error("time must be finite and nonnegative, got {0}")]
    InvalidTime(f64),
    #[error("Hermitian walk requires a symmetric Hamiltonian (asymmetry {0:e}); use the sq model for directed graphs")]
    NotSymmetric(f64),
    #[error("initial state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid initial distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Pseudo-Hermitian quantum walk.
    PseudoHermitian,
    /// Hermitian quantum walk.
    Hermitian,
    /// Classical Kolmogorov walk.
    Classical,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::PseudoHermitian => "sq",
            Model::Hermitian => "q",
            Model::Classical => "c",
        })
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sq" => Ok(Model::PseudoHermitian),
            "q" => Ok(Model::Hermitian),
            "c" => Ok(Model::Classical),
            other => Err(format!("unknown model `{other}` (expected sq, q or c)")),
        }
    }
}

/// Amplitudes `|ψ(t)⟩` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub amplitudes: CVector,
    pub time: f64,
}

impl WalkState {
    /// `⟨ψ(t)|Θ|ψ(t)⟩`.
    pub fn theta_norm(&self, theta: &DMatrix<f64>) -> f64 {
        theta_norm_sq(&self.amplitudes, theta)
    }
}

fn theta_norm_sq(v: &CVector, theta: &DMatrix<f64>) -> f64 {
    let theta_v = theta.map(|x| C64::new(x, 0.0)) * v;
    v.dotc(&theta_v).re
}

fn check_time(t: f64) -> Result<(), WalkError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(WalkError::InvalidTime(t))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), WalkError> {
    if expected == found {
        Ok(())
    } else {
        Err(WalkError::DimensionMismatch { expected, found })
    }
}

/// `|k⟩` for a 1-based vertex label.
pub fn basis_state(n: usize, vertex: usize) -> Result<CVector, WalkError> {
    if vertex == 0 || vertex > n {
        return Err(WalkError::VertexOutOfRange { vertex, n });
    }
    let mut v = CVector::zeros(n);
    v[vertex - 1] = C64::new(1.0, 0.0);
    Ok(v)
}

/// `v / √(v†Θv)`.
pub fn normalize_initial(v: &CVector, theta: &DMatrix<f64>) -> Result<CVector, WalkError> {
    check_dim(theta.nrows(), v.len())?;
    if v.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Err(WalkError::ZeroVector);
    }
    let norm_sq = theta_norm_sq(v, theta);
    if !(norm_sq > 0.0) {
        return Err(WalkError::NonPositiveNorm(norm_sq));
    }
    Ok(v / C64::new(norm_sq.sqrt(), 0.0))
}

/// `⟨φₙ|ψ₀⟩` for every `n`.
pub fn eigen_coefficients(sys: &BiorthonormalSystem, psi0: &CVector) -> CVector {
    sys.phi.adjoint() * psi0
}

fn phases(energies: &[f64], t: f64) -> CVector {
    CVector::from_iterator(energies.len(), energies.iter().map(|&e| C64::from_polar(1.0, -e * t)))
}

/// `|ψ(t)⟩ = Σₙ e^{−iEₙt} |ψₙ⟩⟨φₙ|ψ₀⟩`.
pub fn evolve(sys: &BiorthonormalSystem, psi0: &CVector, t: f64) -> Result<WalkState, WalkError> {
    check_time(t)?;
    check_dim(sys.dim(), psi0.len())?;
    let coeffs = eigen_coefficients(sys, psi0).component_mul(&phases(&sys.energies, t));
    Ok(WalkState { amplitudes: &sys.psi * coeffs, time: t })
}

/// `p_k = |⟨k|Ω|ψ(t)⟩|²`.
pub fn pseudo_probability(state: &WalkState, omega: &DMatrix<f64>) -> Result<DVector<f64>, WalkError> {
    check_dim(omega.ncols(), state.amplitudes.len())?;
    let mapped = omega.map(|x| C64::new(x, 0.0)) * &state.amplitudes;
    Ok(mapped.map(|z| z.norm_sqr()))
}

/// `p_k = |⟨k|e^{−iHt}|ψ₀⟩|²` for symmetric `h` and unit `psi0`.
pub fn hermitian_probability(
    h: &DMatrix<f64>,
    psi0: &CVector,
    t: f64,
) -> Result<DVector<f64>, WalkError> {
    check_time(t)?;
    Ok(HermitianWalk::new(h, psi0)?.probabilities(t))
}

/// `p(t) = Σₙ e^{−Eₙt} |ψₙ⟩⟨φₙ|p₀⟩`.
pub fn classical_probability(
    sys: &BiorthonormalSystem,
    p0: &DVector<f64>,
    t: f64,
) -> Result<DVector<f64>, WalkError> {
    check_time(t)?;
    Ok(ClassicalWalk::new(sys, p0)?.probabilities(t))
}

/// A walk model with its initial condition baked in.
pub trait TransitionModel: Sync {
    fn model(&self) -> Model;
    fn dim(&self) -> usize;
    /// Vertex probabilities at `t ≥ 0`, unclamped.
    fn probabilities(&self, t: f64) -> DVector<f64>;
}

/// Pseudo-Hermitian walk from a Θ-normalized initial state.
#[derive(Debug, Clone)]
pub struct PseudoHermitianWalk {
    energies: Vec<f64>,
    /// `ΩΨ`
    omega_psi: CMatrix,
    coefficients: CVector,
}

impl PseudoHermitianWalk {
    pub fn new(
        sys: &BiorthonormalSystem,
        metric: &MetricPair,
        psi0: &CVector,
    ) -> Result<Self, WalkError> {
        check_dim(sys.dim(), psi0.len())?;
        check_dim(sys.dim(), metric.dim())?;
        let norm = theta_norm_sq(psi0, &metric.theta);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(WalkError::NotNormalized(norm.max(0.0).sqrt()));
        }
        Ok(PseudoHermitianWalk {
            energies: sys.energies.clone(),
            omega_psi: metric.omega.map(|x| C64::new(x, 0.0)) * &sys.psi,
            coefficients: eigen_coefficients(sys, psi0),
        })
    }
}

impl TransitionModel for PseudoHermitianWalk {
    fn model(&self) -> Model {
        Model::PseudoHermitian
    }

    fn dim(&self) -> usize {
        self.energies.len()
    }

    fn probabilities(&self, t: f64) -> DVector<f64> {
        let c = self.coefficients.component_mul(&phases(&self.energies, t));
        (&self.omega_psi * c).map(|z| z.norm_sqr())
    }
}

/// Hermitian walk via the orthonormal eigenbasis of a symmetric `H`.
#[derive(Debug, Clone)]
pub struct HermitianWalk {
    energies: Vec<f64>,
    basis: CMatrix,
    coefficients: CVector,
}

impl HermitianWalk {
    pub fn new(h: &DMatrix<f64>, psi0: &CVector) -> Result<Self, WalkError> {
        check_dim(h.nrows(), psi0.len())?;
        let asym = (h - h.transpose()).amax();
        if asym > 1e-12 * h.amax().max(1.0) {
            return Err(WalkError::NotSymmetric(asym));
        }
        let norm = psi0.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(WalkError::NotNormalized(norm));
        }
        let eig = SymmetricEigen::new(h.clone());
        let basis = eig.eigenvectors.map(|x| C64::new(x, 0.0));
        Ok(HermitianWalk {
            energies: eig.eigenvalues.iter().copied().collect(),
            coefficients: basis.adjoint() * psi0,
            basis,
        })
    }
}

impl TransitionModel for HermitianWalk {
    fn model(&self) -> Model {
        Model::Hermitian
    }

    fn dim(&self) -> usize {
        self.energies.len()
    }

    fn probabilities(&self, t: f64) -> DVector<f64> {
        let c = self.coefficients.component_mul(&phases(&self.energies, t));
        (&self.basis * c).map(|z| z.norm_sqr())
    }
}

/// Classical walk `e^{−Ht} p₀` via the biorthonormal expansion.
#[derive(Debug, Clone)]
pub struct ClassicalWalk {
    energies: Vec<f64>,
    psi: CMatrix,
    coefficients: CVector,
}

impl ClassicalWalk {
    pub fn new(sys: &BiorthonormalSystem, p0: &DVector<f64>) -> Result<Self, WalkError> {
        check_dim(sys.dim(), p0.len())?;
        if let Some(x) = p0.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(WalkError::InvalidDistribution(format!("entry {x} is not a probability")));
        }
        let total = p0.sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(WalkError::InvalidDistribution(format!("entries sum to {total}")));
        }
        let p0c = p0.map(|x| C64::new(x, 0.0));
        Ok(ClassicalWalk {
            energies: sys.energies.clone(),
            psi: sys.psi.clone(),
            coefficients: eigen_coefficients(sys, &p0c),
        })
    }
}

impl TransitionModel for ClassicalWalk {
    fn model(&self) -> Model {
        Model::Classical
    }

    fn dim(&self) -> usize {
        self.energies.len()
    }

    fn probabilities(&self, t: f64) -> DVector<f64> {
        let decay = DVector::from_iterator(
            self.energies.len(),
            self.energies.iter().map(|&e| C64::new((-e * t).exp(), 0.0)),
        );
        (&self.psi * self.coefficients.component_mul(&decay)).map(|z| z.re)
    }
}

/// Per-vertex probabilities on a time grid: row `i` is the distribution at
/// `times[i]`, column `k` is vertex `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySeries {
    pub times: Vec<f64>,
    pub probabilities: DMatrix<f64>,
    pub model: Model,
}

impl ProbabilitySeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_i |Σ_k p_ik − 1|`.
    pub fn max_row_sum_error(&self) -> f64 {
        self.probabilities
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.probabilities.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Where grid rows are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon pool; sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `steps + 1` evenly spaced points `i·t_max/steps`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| i as f64 * t_max / steps as f64).collect()
}

fn check_grid(grid: &[f64]) -> Result<(), WalkError> {
    if let Some(&t) = grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(WalkError::InvalidGrid(format!("time {t} is not finite and nonnegative")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(WalkError::InvalidGrid("times must be strictly increasing".into()));
    }
    Ok(())
}

/// Evaluates `walk` at every grid point. Output rows follow `grid` order.
pub fn evaluate_series<M: TransitionModel + ?Sized>(
    walk: &M,
    grid: &[f64],
    exec: Execution,
) -> Result<ProbabilitySeries, WalkError> {
    check_grid(grid)?;
    let rows = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            grid.par_iter().map(|&t| walk.probabilities(t)).collect::<Vec<_>>()
        }
        _ => grid.iter().map(|&t| walk.probabilities(t)).collect::<Vec<_>>(),
    };
    let n = walk.dim();
    let mut probabilities = DMatrix::zeros(grid.len(), n);
    for (i, row) in rows.iter().enumerate() {
        probabilities.set_row(i, &row.transpose());
    }
    Ok(ProbabilitySeries { times: grid.to_vec(), probabilities, model: walk.model() })
}

/// Probability series for `model` from the unnormalized `initial` state.
///
/// The initial vector is prepared per model: Θ-normalized for `sq`,
/// Euclidean-normalized for `q`, and taken as a real probability vector for
/// `c` (a basis state `|k⟩` is valid for all three).
pub fn probability_series(
    h: &DMatrix<f64>,
    sys: &BiorthonormalSystem,
    metric: &MetricPair,
    initial: &CVector,
    grid: &[f64],
    model: Model,
) -> Result<ProbabilitySeries, WalkError> {
    probability_series_with(h, sys, metric, initial, grid, model, Execution::default())
}

pub fn probability_series_with(
    h: &DMatrix<f64>,
    sys: &BiorthonormalSystem,
    metric: &MetricPair,
    initial: &CVector,
    grid: &[f64],
    model: Model,
    exec: Execution,
) -> Result<ProbabilitySeries, WalkError> {
    match model {
        Model::PseudoHermitian => {
            let psi0 = normalize_initial(initial, &metric.theta)?;
            evaluate_series(&PseudoHermitianWalk::new(sys, metric, &psi0)?, grid, exec)
        }
        Model::Hermitian => {
            let norm = initial.norm();
            if norm == 0.0 {
                return Err(WalkError::ZeroVector);
            }
            let psi0 = initial / C64::new(norm, 0.0);
            evaluate_series(&HermitianWalk::new(h, &psi0)?, grid, exec)
        }
        Model::Classical => {
            if initial.iter().any(|z| z.im != 0.0) {
                return Err(WalkError::InvalidDistribution("complex entries".into()));
            }
            let p0 = initial.map(|z| z.re);
            evaluate_series(&ClassicalWalk::new(sys, &p0)?, grid, exec)
        }
    }
}
