//! Grid discretization of the Rayleigh quotients on planar domains with one
//! hole, optionally carrying the spherical metric pulled back by
//! stereographic projection.
//!
//! Nodes sit at integer multiples of `h`, so axis-aligned boundaries fall on
//! nodes. The quotient is discretized with per-quadrant one-sided
//! differences: every non-exterior node owns four quadrant "triangles"
//! weighted `w_E/4`, which is the average of the two P1 triangulations of the
//! grid and reduces to the 5-point stencil for `p = 2`.

mod domain;
mod energy;
mod minimize;
mod rearrange;
mod skyline;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use domain::{build_domain, BoundaryLayout, ShapeSpec};
pub use energy::{energy, mass, rayleigh_quotient, rayleigh_gradient};
pub use minimize::{minimize_rayleigh, EigenResult2D, MinimizeOptions};
pub use rearrange::{schwarz_rearrange, schwarz_rearrange_with, superlevel_volume, LADDER_LEVELS};

use crate::geometry::GeometryError;
use crate::radial::SolveError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanarError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("interior nodes form {0} connected components")]
    Disconnected(usize),
    #[error("domain has no Dirichlet nodes; the infimum is 0")]
    NoDirichlet,
    #[error("field vanishes on every active node")]
    ZeroField,
    #[error("field has a negative value {value} at node {index}")]
    NegativeField { index: usize, value: f64 },
    #[error("no convergence after {iterations} iterations (last quotient {})", history.last().copied().unwrap_or(f64::NAN))]
    ConvergenceFailure { iterations: usize, history: Vec<f64> },
    #[error(transparent)]
    Space(#[from] GeometryError),
    #[error(transparent)]
    Radial(#[from] SolveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    Interior,
    DirichletBoundary,
    NeumannBoundary,
    Exterior,
}

impl CellClass {
    /// Unknowns of the discrete problem.
    #[inline]
    pub fn is_active(self) -> bool {
        matches!(self, CellClass::Interior | CellClass::NeumannBoundary)
    }
}

/// Which boundary component a boundary node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    None,
    Outer,
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Flat,
    /// Unit sphere through inverse stereographic projection,
    /// conformal factor `2 / (1 + |x|^2)`.
    Sphere,
}

impl Metric {
    #[inline]
    pub fn conformal_factor(self, x: f64, y: f64) -> f64 {
        match self {
            Metric::Flat => 1.0,
            Metric::Sphere => 2.0 / (1.0 + x * x + y * y),
        }
    }

    pub fn curvature(self) -> f64 {
        match self {
            Metric::Flat => 0.0,
            Metric::Sphere => 1.0,
        }
    }
}

/// Rasterized domain. Node `(i, j)` sits at `(x0 + i h, y0 + j h)` and is
/// stored at index `j * nx + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDomain {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub x0: f64,
    pub y0: f64,
    pub shape: ShapeSpec,
    pub layout: BoundaryLayout,
    pub metric: Metric,
    pub cell_class: Vec<CellClass>,
    pub hole_class: Vec<Component>,
}

impl GridDomain {
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k % self.nx, k / self.nx);
        (self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    pub fn len(&self) -> usize {
        self.cell_class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_class.is_empty()
    }

    pub fn count(&self, class: CellClass) -> usize {
        self.cell_class.iter().filter(|&&c| c == class).count()
    }

    pub fn active_count(&self) -> usize {
        self.cell_class.iter().filter(|c| c.is_active()).count()
    }

    pub fn has_hole(&self) -> bool {
        self.shape.has_hole()
    }

    /// Node weight of the mass term.
    #[inline]
    pub fn mass_weight(&self, k: usize) -> f64 {
        let (x, y) = self.coords(k);
        let rho = self.metric.conformal_factor(x, y);
        self.h * self.h * rho * rho
    }

    /// Node weight of the energy term for exponent `p`.
    #[inline]
    pub fn energy_weight(&self, k: usize, p: f64) -> f64 {
        let (x, y) = self.coords(k);
        let rho = self.metric.conformal_factor(x, y);
        self.h * self.h * rho.powf(2.0 - p)
    }

    /// Metric area of the region enclosed by the outer boundary (hole included).
    pub fn outer_measure(&self) -> f64 {
        domain::region_measure(self, |x, y| self.shape.outer_distance(x, y))
    }

    /// Metric area of the hole (0 without one).
    pub fn hole_measure(&self) -> f64 {
        if !self.has_hole() {
            return 0.0;
        }
        domain::region_measure(self, |x, y| self.shape.hole_distance(x, y))
    }

    /// Metric area of the domain itself.
    pub fn measure(&self) -> f64 {
        self.outer_measure() - self.hole_measure()
    }
}

/// Nodal values over a [`GridDomain`]; zero off the active nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarField {
    pub values: Vec<f64>,
    pub domain: Arc<GridDomain>,
}

impl PlanarField {
    /// Builds a field, zeroing every non-active node.
    pub fn new(domain: Arc<GridDomain>, mut values: Vec<f64>) -> Result<Self, PlanarError> {
        if values.len() != domain.len() {
            return Err(PlanarError::Parameter(format!(
                "field has {} values for {} nodes",
                values.len(),
                domain.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(PlanarError::Parameter(format!("non-finite value at node {k}")));
        }
        for (v, c) in values.iter_mut().zip(&domain.cell_class) {
            if !c.is_active() {
                *v = 0.0;
            }
        }
        Ok(PlanarField { values, domain })
    }

    /// Samples `f(x, y)` on the active nodes.
    pub fn from_fn(domain: Arc<GridDomain>, f: impl Fn(f64, f64) -> f64) -> Result<Self, PlanarError> {
        let values = (0..domain.len()).map(|k| {
            let (x, y) = domain.coords(k);
            f(x, y)
        });
        let values = values.collect();
        PlanarField::new(domain, values)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Deterministic parallel sum: fixed-size chunks reduced in order, so the
/// result does not depend on the number of worker threads.
pub(crate) fn chunked_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    use rayon::prelude::*;
    const CHUNK: usize = 2048;
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(len)).map(&f).sum())
        .collect();
    partial.iter().sum()
}
