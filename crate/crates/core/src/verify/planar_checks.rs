use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ComparisonReport, Relation, SymmetrizationPlan, VerifyError};
use crate::geometry::AnnulusSpec;
use crate::planar::{
    self, minimize_rayleigh, schwarz_rearrange_with, superlevel_volume, EigenResult2D, GridDomain,
    MinimizeOptions, PlanarField, LADDER_LEVELS,
};
use crate::radial::{solve_annulus, EigenResult, SolverOptions};

/// Grid-backed comparisons allow 2% for discretization.
const GRID_TOLERANCE: f64 = 0.02;
/// Rearrangement identities allow 1%.
const REARRANGEMENT_TOLERANCE: f64 = 0.01;
/// Allowed relative change of the rearranged norm when the ladder is refined.
const LADDER_TOLERANCE: f64 = 0.002;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaberKrahnOutcome {
    pub report: ComparisonReport,
    pub planar: EigenResult2D,
    pub radial: EigenResult,
}

/// Planar eigenvalue of a domain with one hole against the radial eigenvalue
/// of the concentric annulus with the same outer and hole volumes, in the
/// plane for flat grids and on the unit sphere for sphere-metric grids. The
/// eigenvalue (`lambda` or `mu`) follows the domain's boundary layout.
pub fn check_faber_krahn(
    domain: Arc<GridDomain>,
    p: f64,
    minimize: &MinimizeOptions,
    solver: &SolverOptions,
) -> Result<FaberKrahnOutcome, VerifyError> {
    if !domain.has_hole() {
        return Err(VerifyError::Parameter(format!("{} has no hole", domain.shape)));
    }
    let Some(layout) = domain.layout.annulus_layout() else {
        return Err(VerifyError::Parameter(format!(
            "layout {:?} does not put Dirichlet data on exactly one boundary component",
            domain.layout
        )));
    };
    let plan = SymmetrizationPlan::for_metric(domain.metric);
    let outer_volume = domain.outer_measure();
    let hole_volume = domain.hole_measure();
    let r2 = plan.radius(outer_volume)?;
    let r1 = plan.radius(hole_volume)?;
    let radial = solve_annulus(&plan.target, p, &AnnulusSpec::new(r1, r2, layout), solver)?;
    let planar = minimize_rayleigh(domain.clone(), p, minimize)?;
    let name = match layout {
        crate::geometry::AnnulusLayout::InnerNeumannOuterDirichlet => "lambda",
        crate::geometry::AnnulusLayout::InnerDirichletOuterNeumann => "mu",
    };
    let report = ComparisonReport::relative(
        "faber_krahn",
        planar.eigenvalue,
        radial.eigenvalue,
        Relation::Ge,
        GRID_TOLERANCE,
        format!(
            "{name}_p of {} ({:?} metric, h={}) vs {name}_p of the concentric annulus r1={r1:.6}, r2={r2:.6} \
             with equal volumes (kappa={}); p={p}",
            domain.shape,
            domain.metric,
            domain.h,
            plan.target.kappa
        ),
    )
    .detail("outer_volume", outer_volume)
    .detail("hole_volume", hole_volume)
    .detail("r1", r1)
    .detail("r2", r2)
    .detail("iterations", planar.iterations as f64);
    Ok(FaberKrahnOutcome { report, planar, radial })
}

/// Identities of the Schwarz rearrangement `h` of a nonnegative field `u`:
/// equal `p`-norms, `int |grad h|^p <= int |grad u|^p`, superlevel volumes
/// (plus the hole) matching the ball volumes on every ladder level, and a
/// norm that is stable when the ladder is refined twofold.
///
/// The rearrangement is decreasing away from the hole, so the field must
/// vanish on the outer boundary: Dirichlet holes are rejected.
pub fn check_rearrangement(field: &PlanarField, p: f64) -> Result<Vec<ComparisonReport>, VerifyError> {
    let domain = &field.domain;
    if !domain.layout.outer_dirichlet() || (domain.has_hole() && domain.layout.inner_dirichlet()) {
        return Err(VerifyError::Parameter(format!(
            "decreasing rearrangement needs a Dirichlet outer boundary and a Neumann hole, got {:?}",
            domain.layout
        )));
    }
    let sf = SymmetrizationPlan::for_metric(domain.metric).target;
    let hole = domain.hole_measure();
    let h = schwarz_rearrange_with(field, hole, &sf, LADDER_LEVELS)?;
    let fine = schwarz_rearrange_with(field, hole, &sf, 2 * LADDER_LEVELS)?;
    let mass_u = planar::mass(field, p)?;
    let energy_u = planar::energy(field, p)?;
    let mass_h = h.interpolated_mass(&sf, p);
    let mass_fine = fine.interpolated_mass(&sf, p);
    let energy_h = h.interpolated_energy(&sf, p);

    let measure = domain.measure();
    let mut worst = 0.0_f64;
    for (&r, &t) in h.r.iter().zip(&h.value).filter(|(_, t)| **t > 0.0) {
        let star = sf.ball_volume(r)? - hole;
        worst = worst.max((star - superlevel_volume(field, t)).abs());
    }
    let label = format!("{} ({:?} metric, h={}), p={p}", domain.shape, domain.metric, domain.h);
    Ok(vec![
        ComparisonReport::relative(
            "rearrangement.norm",
            mass_h,
            mass_u,
            Relation::Eq,
            REARRANGEMENT_TOLERANCE,
            format!("int h^p vs int u^p; {label}"),
        ),
        ComparisonReport::relative(
            "rearrangement.energy",
            energy_h,
            energy_u,
            Relation::Le,
            REARRANGEMENT_TOLERANCE,
            format!("int |grad h|^p vs int |grad u|^p; {label}"),
        ),
        ComparisonReport::absolute(
            "rearrangement.volume",
            worst / measure,
            0.0,
            Relation::Eq,
            1e-12,
            format!("max over ladder levels of |Vol(B(r_t)) - Vol(hole) - Vol(u > t)| / Vol(domain); {label}"),
        ),
        ComparisonReport::relative(
            "rearrangement.ladder",
            mass_fine,
            mass_h,
            Relation::Eq,
            LADDER_TOLERANCE,
            format!("int h^p with {} vs {} levels; {label}", 2 * LADDER_LEVELS, LADDER_LEVELS),
        ),
    ])
}
