//! Numerical checks of the comparison inequalities, asymptotic rates and the
//! boundary-variation formula, expressed as [`ComparisonReport`]s and
//! [`FitReport`]s.

mod planar_checks;
mod radial_checks;
mod suite;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, SpaceForm};
use crate::planar::{Metric, PlanarError};
use crate::radial::SolveError;

pub use planar_checks::{check_faber_krahn, check_rearrangement, FaberKrahnOutcome};
pub use radial_checks::{
    check_curvature_monotonicity, check_hadamard, check_mu_decay, check_mu_trial_bound, check_sign_structure,
    check_vanishing_hole, mu_trial_scan, mu_trial_upper_bound, RateCheck,
};
pub use suite::{default_domains, run_suite, SuiteConfig, SuiteDomain, SuiteReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs >= rhs`
    Ge,
    /// `lhs <= rhs`
    Le,
    /// `lhs > rhs`
    Gt,
    /// `lhs < rhs`
    Lt,
    /// `lhs == rhs`
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Lt => "<",
            Relation::Eq => "==",
        })
    }
}

/// One numerical comparison `lhs <relation> rhs`.
///
/// `slack` is the signed margin divided by `scale` (`|rhs|` for relative
/// comparisons, 1 for absolute ones): positive when the relation holds with
/// room to spare, `-|lhs - rhs| / scale` for [`Relation::Eq`]. The report
/// passes when `slack >= -tolerance` (strictly greater for `Gt`/`Lt`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Name of the check, e.g. `faber_krahn`.
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub scale: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// What the two sides are and the parameters they were computed at.
    pub provenance: String,
    pub details: BTreeMap<String, f64>,
}

impl ComparisonReport {
    /// Comparison relative to `|rhs|` (absolute when `rhs == 0`).
    pub fn relative(check: &str, lhs: f64, rhs: f64, relation: Relation, tolerance: f64, provenance: String) -> Self {
        let scale = if rhs != 0.0 { rhs.abs() } else { 1.0 };
        Self::with_scale(check, lhs, rhs, relation, scale, tolerance, provenance)
    }

    pub fn absolute(check: &str, lhs: f64, rhs: f64, relation: Relation, tolerance: f64, provenance: String) -> Self {
        Self::with_scale(check, lhs, rhs, relation, 1.0, tolerance, provenance)
    }

    fn with_scale(
        check: &str,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        scale: f64,
        tolerance: f64,
        provenance: String,
    ) -> Self {
        let d = (lhs - rhs) / scale;
        let slack = match relation {
            Relation::Ge | Relation::Gt => d,
            Relation::Le | Relation::Lt => -d,
            Relation::Eq => -d.abs(),
        };
        let pass = match relation {
            Relation::Gt | Relation::Lt => slack > -tolerance,
            _ => slack >= -tolerance,
        };
        ComparisonReport {
            check: check.to_string(),
            lhs,
            rhs,
            relation,
            scale,
            slack,
            tolerance,
            pass,
            provenance,
            details: BTreeMap::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:.10e} {} {:.10e} (slack {:+.3e}, tolerance {:.1e}) [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.lhs,
            self.relation,
            self.rhs,
            self.slack,
            self.tolerance,
            self.provenance
        )
    }
}

/// Least-squares power law `y = exp(intercept) x^slope` on log-log data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub check: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub details: BTreeMap<String, f64>,
}

impl FitReport {
    pub fn fit(check: &str, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, VerifyError> {
        if xs.len() != ys.len() || xs.len() < 4 {
            return Err(VerifyError::Parameter(format!(
                "a fit needs equal-length sequences of at least 4 points, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.iter().chain(&ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(VerifyError::Parameter("fit data must be positive and finite".into()));
        }
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let m = lx.len() as f64;
        let mx = lx.iter().sum::<f64>() / m;
        let my = ly.iter().sum::<f64>() / m;
        let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
        if sxx == 0.0 {
            return Err(VerifyError::Parameter("fit abscissae are all equal".into()));
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
        Ok(FitReport { check: check.to_string(), xs, ys, slope, intercept, r_squared, details: BTreeMap::new() })
    }

    /// Fitted value at `x`.
    pub fn fit_y(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Target of the symmetrization: geodesic balls of the model space whose
/// volumes are `beta` times the original ones. Only `beta = 1` is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizationPlan {
    pub beta: f64,
    pub target: SpaceForm,
}

impl SymmetrizationPlan {
    /// Plane for flat grids, unit sphere for sphere-metric grids.
    pub fn for_metric(metric: Metric) -> Self {
        SymmetrizationPlan { beta: 1.0, target: SpaceForm { n: 2, kappa: metric.curvature() } }
    }

    /// Radius of the target ball with volume `beta * volume`.
    pub fn radius(&self, volume: f64) -> Result<f64, GeometryError> {
        self.target.schwarz_radius(self.beta * volume)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_signs() {
        let r = ComparisonReport::relative("t", 1.1, 1.0, Relation::Ge, 0.0, String::new());
        assert!(r.pass && (r.slack - 0.1).abs() < 1e-12);
        let r = ComparisonReport::relative("t", 1.1, 1.0, Relation::Le, 0.05, String::new());
        assert!(!r.pass && (r.slack + 0.1).abs() < 1e-12);
        let r = ComparisonReport::relative("t", 0.99, 1.0, Relation::Eq, 0.02, String::new());
        assert!(r.pass && (r.slack + 0.01).abs() < 1e-12);
        let r = ComparisonReport::absolute("t", 0.0, 0.0, Relation::Gt, 0.0, String::new());
        assert!(!r.pass);
        let r = ComparisonReport::relative("t", -1e-3, 0.0, Relation::Lt, 0.0, String::new());
        assert!(r.pass && r.scale == 1.0);
    }

    #[test]
    fn fit_recovers_power_law() {
        let xs = vec![0.02, 0.04, 0.08, 0.16];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.7)).collect();
        let f = FitReport::fit("t", xs, ys).unwrap();
        assert!((f.slope - 1.7).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!((f.fit_y(0.1) - 3.0 * 0.1f64.powf(1.7)).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_short_or_nonpositive() {
        assert!(FitReport::fit("t", vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(FitReport::fit("t", vec![1.0, 2.0, 3.0, 4.0], vec![1.0, 0.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn sphere_plan_targets_unit_sphere() {
        let plan = SymmetrizationPlan::for_metric(Metric::Sphere);
        assert_eq!(plan.beta, 1.0);
        let r = plan.radius(2.0 * std::f64::consts::PI).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }
}
