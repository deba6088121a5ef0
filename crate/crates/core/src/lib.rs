//! First eigenvalues of the `p`-Laplacian on annular domains with mixed
//! boundary conditions.
//!
//! - [`geometry`]: constant-curvature model spaces, geodesic balls and volumes.
//! - [`radial`]: shooting solvers for concentric geodesic annuli and balls.
//! - [`planar`]: Rayleigh-quotient minimization on 2-D grids with a hole,
//!   flat or with the spherical metric, and Schwarz rearrangement.
//! - [`verify`]: comparison, rate and boundary-variation checks.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geometry;
pub mod planar;
pub mod quadrature;
pub mod radial;
pub mod verify;

pub use geometry::{AnnulusLayout, AnnulusSpec, GeometryError, SpaceForm};
pub use planar::{
    BoundaryLayout, CellClass, EigenResult2D, GridDomain, Metric, MinimizeOptions, PlanarError, PlanarField,
    ShapeSpec,
};
pub use radial::{EigenResult, RadialProblem, RadialProfile, SolveError, SolverOptions};
pub use verify::{ComparisonReport, FitReport, Relation, VerifyError};

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
