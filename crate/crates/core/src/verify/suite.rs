use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_curvature_monotonicity, check_faber_krahn, check_hadamard, check_mu_decay, check_mu_trial_bound,
    check_rearrangement, check_sign_structure, check_vanishing_hole, ComparisonReport, FitReport, VerifyError,
};
use crate::geometry::{AnnulusLayout, AnnulusSpec, SpaceForm};
use crate::planar::{build_domain, BoundaryLayout, Metric, MinimizeOptions, ShapeSpec};
use crate::radial::{solve_annulus, SolverOptions};

/// A planar domain of the symmetrization checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteDomain {
    pub name: String,
    pub shape: ShapeSpec,
    pub metric: Metric,
    pub layout: BoundaryLayout,
    /// Also run the rearrangement identities on this domain's eigenfunction.
    pub rearrange: bool,
}

/// Default planar domains: concentric and offset annuli, a square hole, an
/// elliptical outer boundary, and two non-concentric caps of the unit sphere
/// (a hemisphere minus a cap, in stereographic coordinates), all with a
/// Neumann hole; the concentric and 0.4-offset annuli also with a Dirichlet hole.
pub fn default_domains() -> Vec<SuiteDomain> {
    let lambda = BoundaryLayout::InnerNeumannOuterDirichlet;
    let mu = BoundaryLayout::InnerDirichletOuterNeumann;
    let d = |name: &str, shape, metric, layout, rearrange| SuiteDomain {
        name: name.to_string(),
        shape,
        metric,
        layout,
        rearrange,
    };
    let annulus = |offset| ShapeSpec::Annulus { outer: 1.0, inner: 0.3, offset };
    vec![
        d("concentric", annulus(0.0), Metric::Flat, lambda, true),
        d("offset_0.2", annulus(0.2), Metric::Flat, lambda, false),
        d("offset_0.4", annulus(0.4), Metric::Flat, lambda, true),
        d("square_hole", ShapeSpec::DiskMinusSquare { radius: 1.0, half_side: 0.25, offset: 0.0 }, Metric::Flat, lambda, false),
        d(
            "ellipse_outer",
            ShapeSpec::EllipseMinusDisk { semi_x: 1.25, semi_y: 0.8, inner: 0.3, offset: 0.0 },
            Metric::Flat,
            lambda,
            false,
        ),
        d("sphere_caps", ShapeSpec::Annulus { outer: 1.0, inner: 0.3, offset: 0.3 }, Metric::Sphere, lambda, false),
        d("concentric_mu", annulus(0.0), Metric::Flat, mu, false),
        d("offset_0.4_mu", annulus(0.4), Metric::Flat, mu, false),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub solver: SolverOptions,
    pub minimize: MinimizeOptions,
    /// Grid spacing of the planar checks.
    pub grid_h: f64,
    /// Exponents of the planar checks.
    pub planar_p: Vec<f64>,
    pub domains: Vec<SuiteDomain>,
    /// Exponents of the radial sign and curvature sweeps.
    pub radial_p: Vec<f64>,
    pub sign_kappas: Vec<f64>,
    pub sign_annuli: Vec<(f64, f64)>,
    pub monotonicity_kappas: Vec<f64>,
    pub monotonicity_dims: Vec<usize>,
    pub monotonicity_annulus: (f64, f64),
    pub hole_radii: Vec<f64>,
    pub hadamard_delta: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            solver: SolverOptions::default(),
            minimize: MinimizeOptions::default(),
            grid_h: 1.0 / 128.0,
            planar_p: vec![1.5, 2.0],
            domains: default_domains(),
            radial_p: vec![1.5, 2.0, 3.0],
            sign_kappas: vec![-1.0, 0.0, 0.5],
            sign_annuli: vec![(0.3, 1.0), (0.5, 2.0)],
            monotonicity_kappas: vec![-1.0, -0.5, 0.0, 0.25, 0.5],
            monotonicity_dims: vec![2, 3],
            monotonicity_annulus: (0.5, 1.0),
            hole_radii: vec![0.16, 0.08, 0.04, 0.02],
            hadamard_delta: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<ComparisonReport>,
    pub fits: Vec<FitReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ComparisonReport> {
        self.reports.iter().filter(|r| !r.pass)
    }
}

/// Runs every check with the configured parameters. Radial sweeps fan out
/// over the rayon pool; results keep the input order.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let solver = &config.solver;
    let mut reports = Vec::new();
    let mut fits = Vec::new();

    let mut sign_cases = Vec::new();
    for &p in &config.radial_p {
        for &kappa in &config.sign_kappas {
            for &(r1, r2) in &config.sign_annuli {
                for layout in [AnnulusLayout::InnerNeumannOuterDirichlet, AnnulusLayout::InnerDirichletOuterNeumann] {
                    sign_cases.push((p, kappa, AnnulusSpec::new(r1, r2, layout)));
                }
            }
        }
    }
    let sign: Vec<Vec<ComparisonReport>> = sign_cases
        .par_iter()
        .map(|(p, kappa, ann)| {
            let sf = SpaceForm::new(2, *kappa)?;
            Ok(check_sign_structure(&solve_annulus(&sf, *p, ann, solver)?))
        })
        .collect::<Result<_, VerifyError>>()?;
    reports.extend(sign.into_iter().flatten());

    let (r1, r2) = config.monotonicity_annulus;
    for &p in &config.radial_p {
        for &n in &config.monotonicity_dims {
            reports.extend(check_curvature_monotonicity(p, n, r1, r2, &config.monotonicity_kappas, solver)?);
        }
    }

    let holes = check_vanishing_hole(2.0, 2, 1.0, &config.hole_radii, solver)?;
    reports.extend(holes.reports);
    fits.push(holes.fit);
    let decay = check_mu_decay(2.0, 3, 1.0, &config.hole_radii, solver)?;
    reports.extend(decay.reports);
    fits.push(decay.fit);
    reports.push(check_mu_trial_bound(&SpaceForm::euclidean(3), 2.0, 0.1, 0.1, 1.0, solver)?);
    reports.push(check_hadamard(&SpaceForm::euclidean(2), 2.0, 0.3, 1.0, config.hadamard_delta, solver)?);

    for dom in &config.domains {
        let grid = Arc::new(build_domain(&dom.shape, dom.layout, config.grid_h, dom.metric)?);
        for &p in &config.planar_p {
            let outcome = check_faber_krahn(grid.clone(), p, &config.minimize, solver)?;
            let mut report = outcome.report;
            report.provenance = format!("[{}] {}", dom.name, report.provenance);
            reports.push(report);
            if dom.rearrange {
                for mut r in check_rearrangement(&outcome.planar.field, p)? {
                    r.provenance = format!("[{}] {}", dom.name, r.provenance);
                    reports.push(r);
                }
            }
        }
    }
    Ok(SuiteReport { reports, fits })
}
