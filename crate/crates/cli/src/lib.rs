//! `phwalk` command implementations. Each command renders its full output
//! into a `String`; `main` decides where it goes and maps errors to exit
//! codes (0 success, 1 usage/validation, 2 numerical gate failure).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use phwalk_core::spectral::{parse_eigenvector_file, ScalingMode};
use phwalk_core::walk::{basis_state, uniform_grid};
use phwalk_core::{
    biorthonormal_system, eigendecompose, parse_graph, probability_series,
    pseudo_hermiticity_residual, require_real_spectrum, EigenvectorMode, Graph, GraphError,
    MetricPair, Model, SpectralError, Tolerances, WalkError, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Eigenvalues and the real-spectrum gate.
    Spectrum,
    /// Metric operator Θ and its square root Ω.
    Metric,
    /// Diagonalizability, real spectrum and pseudo-Hermiticity checks.
    Check,
    /// Vertex probability time series as CSV.
    Walk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Sq,
    Q,
    C,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Sq => Model::PseudoHermitian,
            ModelArg::Q => Model::Hermitian,
            ModelArg::C => Model::Classical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Canonical,
    Explicit,
}

/// Pseudo-Hermitian continuous-time quantum walks on graphs.
#[derive(Debug, Parser)]
#[command(name = "phwalk", version)]
pub struct Cli {
    pub command: Command,
    /// Graph description file.
    pub graph: PathBuf,
    /// Starting vertex (1-based).
    #[arg(long, default_value_t = 1)]
    pub start: usize,
    #[arg(long = "t-max", default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "sq")]
    pub model: ModelArg,
    /// Eigenvector scaling used to build the metric.
    #[arg(long, value_enum, default_value = "canonical")]
    pub mode: ModeArg,
    /// Eigenvector file for `--mode explicit`.
    #[arg(long)]
    pub eigvecs: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    /// A diagnostic command ran to completion but a check failed; the
    /// report is still emitted.
    #[error("numerical gate failed")]
    GateFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Graph { .. } => 1,
            CliError::Spectral(
                SpectralError::EigvecFile { .. }
                | SpectralError::DimensionMismatch { .. }
                | SpectralError::NotEigenvector { .. },
            ) => 1,
            CliError::Walk(
                WalkError::VertexOutOfRange { .. }
                | WalkError::NotSymmetric(_)
                | WalkError::InvalidGrid(_),
            ) => 1,
            CliError::Spectral(_) | CliError::Walk(_) | CliError::GateFailed(_) => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|source| CliError::Graph { path: path.to_owned(), source })
}

fn eigenvector_mode(cli: &Cli) -> Result<EigenvectorMode, CliError> {
    match (cli.mode, &cli.eigvecs) {
        (ModeArg::Canonical, None) => Ok(EigenvectorMode::Canonical),
        (ModeArg::Explicit, Some(path)) => {
            Ok(EigenvectorMode::Explicit(parse_eigenvector_file(&read(path)?)?))
        }
        (ModeArg::Explicit, None) => Err(CliError::Usage("--mode explicit requires --eigvecs FILE".into())),
        (ModeArg::Canonical, Some(_)) => Err(CliError::Usage("--eigvecs requires --mode explicit".into())),
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes. Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Fixed 10-decimal rendering with trailing zeros trimmed.
fn fmt_short(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn fmt_eigenvalue(z: C64, real: bool) -> String {
    if real || fmt_short(z.im) == "0" {
        fmt_short(z.re)
    } else {
        let im = fmt_short(z.im.abs());
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{im}i", fmt_short(z.re))
    }
}

fn fmt_matrix(out: &mut String, m: &nalgebra::DMatrix<f64>) {
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

pub fn cmd_spectrum(cli: &Cli) -> Result<String, CliError> {
    let h = load_graph(&cli.graph)?.laplacian_hamiltonian().into_matrix();
    let tol = Tolerances::default();
    let spectrum = eigendecompose(&h, tol.residual)?;
    let gate = require_real_spectrum(&spectrum, tol.reality);
    let values: Vec<String> = spectrum
        .eigenvalues
        .iter()
        .map(|&z| fmt_eigenvalue(z, gate.is_ok()))
        .collect();
    let out = format!(
        "{}; real-spectrum: {}\nmax |Im|: {}\n",
        values.join(", "),
        if gate.is_ok() { "PASS" } else { "FAIL" },
        fmt_num(spectrum.max_imaginary())
    );
    match gate {
        Ok(_) => Ok(out),
        Err(_) => Err(CliError::GateFailed(out)),
    }
}

fn build_metric(cli: &Cli, h: &nalgebra::DMatrix<f64>) -> Result<(phwalk_core::BiorthonormalSystem, MetricPair), CliError> {
    let tol = Tolerances::default();
    let mode = eigenvector_mode(cli)?;
    let sys = biorthonormal_system(h, &mode, &tol)?;
    let metric = MetricPair::from_system(&sys, &tol)?;
    Ok((sys, metric))
}

pub fn cmd_metric(cli: &Cli) -> Result<String, CliError> {
    let h = load_graph(&cli.graph)?.laplacian_hamiltonian().into_matrix();
    let (sys, metric) = build_metric(cli, &h)?;
    let mut out = String::new();
    let mode = match sys.mode {
        ScalingMode::Canonical => "canonical",
        ScalingMode::Explicit => "explicit",
    };
    let _ = writeln!(out, "# mode: {mode}");
    out.push_str("theta\n");
    fmt_matrix(&mut out, &metric.theta);
    out.push_str("omega\n");
    fmt_matrix(&mut out, &metric.omega);
    Ok(out)
}

pub fn cmd_check(cli: &Cli) -> Result<String, CliError> {
    let h = load_graph(&cli.graph)?.laplacian_hamiltonian().into_matrix();
    let tol = Tolerances::default();
    let mut out = String::new();
    let fail = |mut out: String, line: String| {
        out.push_str(&line);
        out.push_str("check: FAIL\n");
        Err(CliError::GateFailed(out))
    };

    let spectrum = match eigendecompose(&h, tol.residual) {
        Ok(s) => s,
        Err(e) => return fail(out, format!("eigendecomposition: FAIL ({e})\n")),
    };
    match require_real_spectrum(&spectrum, tol.reality) {
        Ok(_) => {
            let _ = writeln!(out, "real-spectrum: PASS (max |Im| = {})", fmt_num(spectrum.max_imaginary()));
        }
        Err(SpectralError::ComplexSpectrum { offending, max_imaginary }) => {
            let list: Vec<String> = offending.iter().map(|&z| fmt_eigenvalue(z, false)).collect();
            return fail(
                out,
                format!(
                    "real-spectrum: FAIL (max |Im| = {}; offending eigenvalues: {})\n",
                    fmt_num(max_imaginary),
                    list.join(", ")
                ),
            );
        }
        Err(e) => return fail(out, format!("real-spectrum: FAIL ({e})\n")),
    }

    let (sys, metric) = match build_metric(cli, &h) {
        Ok(pair) => pair,
        Err(CliError::Spectral(e)) => return fail(out, format!("diagonalizable: FAIL ({e})\n")),
        Err(e) => return Err(e),
    };
    let _ = writeln!(out, "diagonalizable: PASS (cond = {})", fmt_num(sys.condition));

    let residual = pseudo_hermiticity_residual(&h, &metric.theta);
    let bound = 1e-9 * (h.norm() * metric.theta.norm()).max(1.0);
    let line = format!(
        "pseudo-hermiticity residual: {} (bound {})",
        fmt_num(residual),
        fmt_num(bound)
    );
    if residual <= bound {
        let _ = writeln!(out, "{line}: PASS\ncheck: PASS");
        Ok(out)
    } else {
        fail(out, format!("{line}: FAIL\n"))
    }
}

pub fn cmd_walk(cli: &Cli) -> Result<String, CliError> {
    if cli.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if !(cli.t_max.is_finite() && cli.t_max > 0.0) {
        return Err(CliError::Usage("--t-max must be positive".into()));
    }
    let graph = load_graph(&cli.graph)?;
    let n = graph.vertex_count();
    let initial = basis_state(n, cli.start)?;
    let model = Model::from(cli.model);
    if model == Model::Hermitian && !graph.is_undirected() {
        return Err(CliError::Usage("model q requires an undirected graph; use sq".into()));
    }
    let h = graph.laplacian_hamiltonian().into_matrix();
    let (sys, metric) = build_metric(cli, &h)?;
    let grid = uniform_grid(cli.t_max, cli.steps);
    let series = probability_series(&h, &sys, &metric, &initial, &grid, model)?;

    let mut out = String::from("t");
    for k in 1..=n {
        let _ = write!(out, ",p_{k}");
    }
    out.push('\n');
    for (t, row) in series.times.iter().zip(series.probabilities.row_iter()) {
        out.push_str(&fmt_num(*t));
        for &p in row.iter() {
            out.push(',');
            out.push_str(&fmt_num(p.max(0.0)));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Spectrum => cmd_spectrum(cli),
        Command::Metric => cmd_metric(cli),
        Command::Check => cmd_check(cli),
        Command::Walk => cmd_walk(cli),
    }
}
