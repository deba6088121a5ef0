//! Command-line and config-file arguments.
//!
//! Every parameter is optional here so that flags can be layered over a
//! JSON config file; defaults are filled in by [`crate::config`]. Config file
//! keys are the snake_case field names (`eig_rel_tol`), flags the kebab-case
//! ones (`--eig-rel-tol`).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "annulus-spectra", version, about = "First eigenvalues of the p-Laplacian on annular domains")]
#[command(after_help = "Exit codes: 0 success, 1 a check failed, 2 invalid configuration, 3 solver failure.\n\
    Set ANNULUS_SPECTRA_CACHE to override the cache directory and SOURCE_DATE_EPOCH to fix record timestamps.")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct CommonArgs {
    /// JSON object of parameters; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Write the record (or CSV) here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Directory of cached records, keyed by config digest.
    #[arg(long, global = true, value_name = "DIR")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads [default: 1].
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First eigenvalue of a concentric annulus in a space form.
    Radial(RadialArgs),
    /// First Dirichlet eigenvalue of a geodesic ball.
    Ball(BallArgs),
    /// First eigenvalue of a rasterized planar domain.
    Grid(GridArgs),
    /// Schwarz rearrangement of a planar eigenfunction, with its identities.
    Rearrange(RearrangeArgs),
    /// Run one numerical check, or the whole suite.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Radial eigenvalues over a cartesian parameter grid, as CSV
    /// (columns: problem, n, kappa, p, r1, r2, eigenvalue, residual, wall_ms).
    Sweep(SweepArgs),
    /// Tidy CSV from result records: fits give x, y, fit_y; radial results
    /// and rearrangements give r, u, flux; planar results give x, y, value.
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Planar eigenvalue against the equal-volume concentric annulus.
    FaberKrahn(GridArgs),
    /// Norm, energy and volume identities of the Schwarz rearrangement.
    Rearrangement(GridArgs),
    /// lambda non-increasing and mu non-decreasing in the curvature.
    Monotonicity(MonotonicityArgs),
    /// Rate at which lambda(eps) approaches the ball eigenvalue.
    VanishingHole(HoleArgs),
    /// Decay of mu(eps) as the Dirichlet hole shrinks.
    MuDecay(HoleArgs),
    /// Ramp trial function bound on mu.
    TrialBound(TrialBoundArgs),
    /// Boundary-variation formula against central differences.
    Hadamard(HadamardArgs),
    /// Sign of the flux of a radial eigenfunction.
    Sign(SignArgs),
    /// Every check with the default parameters.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    /// Inner Neumann, outer Dirichlet.
    Lambda,
    /// Inner Dirichlet, outer Neumann.
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepProblem {
    Lambda,
    Mu,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricArg {
    Flat,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    Fit,
    Profile,
    Field,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    /// Relative width of the final eigenvalue bracket [default: 1e-8].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eig_rel_tol: Option<f64>,
    /// Per-step relative tolerance of the integrator [default: 1e-10].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct RadialArgs {
    /// [default: lambda]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<Problem>,
    /// Exponent, greater than 1 [default: 2].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Dimension [default: 2].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Curvature of the space form [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Inner radius [default: 0.5].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    /// Outer radius [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct BallArgs {
    /// Exponent, greater than 1 [default: 2].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Dimension [default: 2].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Curvature of the space form [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Geodesic radius [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct GridArgs {
    /// Domain as `kind:a,b,...`: disk:R, rectangle:W,H, annulus:R,r[,offset],
    /// disk_minus_square:R,s[,offset], ellipse_minus_disk:a,b,r[,offset]
    /// [default: annulus:1,0.3].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    /// Overrides the hole offset of the shape.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    /// Boundary layout: lambda puts Dirichlet data outside, mu on the hole [default: lambda].
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<Problem>,
    /// [default: flat]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricArg>,
    /// Grid spacing [default: 0.015625].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Exponent in [1.2, 6] [default: 2].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Relative stopping tolerance of the minimizer [default: 1e-8].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    /// [default: 200000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    /// Also write the eigenfunction as CSV (x, y, value).
    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_csv: Option<PathBuf>,
    /// Also write the domain as a PGM mask: 0 exterior, 85 Dirichlet,
    /// 170 Neumann boundary, 255 interior.
    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mask_pgm: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct RearrangeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Number of levels of the value ladder [default: 256].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct MonotonicityArgs {
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// [default: 0.5]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    /// Non-decreasing curvatures [default: -1,-0.5,0,0.25,0.5].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappas: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct HoleArgs {
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// [default: 2 for vanishing-hole, 3 for mu-decay]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Outer radius [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Strictly decreasing hole radii [default: 0.16,0.08,0.04,0.02].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct TrialBoundArgs {
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// [default: 3]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Hole radius [default: 0.1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Ramp width [default: 0.1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Outer radius [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct HadamardArgs {
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// [default: 0.3]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    /// Finite-difference step of the inner radius [default: 0.001].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct SignArgs {
    /// [default: lambda]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<SweepProblem>,
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Inner radius, ignored for balls [default: 0.3].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    /// Outer radius [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SuiteArgs {
    /// Grid spacing of the planar checks [default: 0.0078125].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Exponents of the planar checks [default: 1.5,2].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planar_p: Option<Vec<f64>>,
    /// Exponents of the radial sweeps [default: 1.5,2,3].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial_p: Option<Vec<f64>>,
    /// Planar domains to run, by name [default: all of concentric, offset_0.2,
    /// offset_0.4, square_hole, ellipse_outer, sphere_caps, concentric_mu, offset_0.4_mu].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domains: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    /// [default: lambda]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<SweepProblem>,
    /// [default: 2]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    /// [default: 0]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<f64>>,
    /// [default: 2]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    /// Inner radii, ignored for balls [default: 0.5].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<Vec<f64>>,
    /// Outer radii [default: 1].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Record files, each holding one record or a JSON array of records.
    pub records: Vec<PathBuf>,
    /// Columns to emit when there are no records [default: fit].
    #[arg(long, value_enum)]
    pub kind: Option<PlotKind>,
}
