//! Continuous-time quantum walks on graphs whose Laplacian Hamiltonian is
//! non-Hermitian but has a real spectrum.
//!
//! The pipeline is:
//!
//! 1. [`graph`]: parse a mixed directed/undirected graph and build
//!    `H = D_in − A`;
//! 2. [`spectral`]: eigendecompose `H`, gate on a real spectrum, form the
//!    biorthonormal system `{ψₙ, φₙ}`, the metric `Θ = ΦΦ†` and `Ω = √Θ`;
//! 3. [`walk`]: evolve states and compute vertex probabilities for the
//!    pseudo-Hermitian, Hermitian and classical walk models.

pub mod graph;
pub mod spectral;
pub mod walk;

use thiserror::Error;

pub use graph::{parse_graph, Edge, EdgeKind, Graph, GraphError, Hamiltonian};
pub use spectral::{
    biorthonormal_system, eigendecompose, metric_operator, omega_sqrt,
    pseudo_hermiticity_residual, require_real_spectrum, BiorthonormalSystem, CMatrix, CVector,
    ComplexSpectrum, EigenvectorMode, MetricPair, SpectralError, Tolerances, C64,
};
pub use walk::{
    evolve, normalize_initial, probability_series, Execution, Model, ProbabilitySeries,
    WalkError, WalkState,
};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}
