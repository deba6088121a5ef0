use std::sync::Arc;

use annulus_spectra::geometry::{AnnulusLayout, AnnulusSpec, SpaceForm};
use annulus_spectra::planar::{build_domain, BoundaryLayout, GridDomain, Metric, MinimizeOptions, ShapeSpec};
use annulus_spectra::radial::{solve_dirichlet_ball, solve_lambda_star, solve_mu_star, SolverOptions};
use annulus_spectra::verify::*;

const LADDER: [f64; 4] = [0.16, 0.08, 0.04, 0.02];

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn annulus_grid(offset: f64, layout: BoundaryLayout, h: f64, metric: Metric) -> Arc<GridDomain> {
    let shape = ShapeSpec::Annulus { outer: 1.0, inner: 0.3, offset };
    Arc::new(build_domain(&shape, layout, h, metric).unwrap())
}

fn faber_krahn(offset: f64, layout: BoundaryLayout, h: f64, metric: Metric, p: f64) -> FaberKrahnOutcome {
    check_faber_krahn(annulus_grid(offset, layout, h, metric), p, &MinimizeOptions::default(), &opts()).unwrap()
}

#[test]
fn concentric_domains_are_near_equality() {
    for layout in [BoundaryLayout::InnerNeumannOuterDirichlet, BoundaryLayout::InnerDirichletOuterNeumann] {
        for metric in [Metric::Flat, Metric::Sphere] {
            let out = faber_krahn(0.0, layout, 1.0 / 64.0, metric, 2.0);
            assert!(out.report.pass, "{}", out.report);
            assert!(out.report.slack.abs() <= 0.02, "{}", out.report);
            assert!(out.report.details["hole_volume"] > 0.0);
        }
    }
}

#[test]
fn offset_hole_falls_below_the_symmetrized_annulus() {
    // Moving the hole off centre lowers both eigenvalues well below the
    // equal-volume concentric annulus; the check reports this as a failure.
    let lam = faber_krahn(0.4, BoundaryLayout::InnerNeumannOuterDirichlet, 1.0 / 64.0, Metric::Flat, 2.0);
    assert!(!lam.report.pass && lam.report.slack < -0.15, "{}", lam.report);
    let mu = faber_krahn(0.4, BoundaryLayout::InnerDirichletOuterNeumann, 1.0 / 64.0, Metric::Flat, 2.0);
    assert!(!mu.report.pass && mu.report.slack < -0.3, "{}", mu.report);
}

#[test]
fn rearrangement_identities_on_concentric_eigenfunction() {
    let out = faber_krahn(0.0, BoundaryLayout::InnerNeumannOuterDirichlet, 1.0 / 128.0, Metric::Flat, 2.0);
    let reports = check_rearrangement(&out.planar.field, 2.0).unwrap();
    assert_eq!(reports.len(), 4);
    for r in &reports {
        assert!(r.pass, "{r}");
    }
}

#[test]
fn rearrangement_energy_exceeds_offset_energy() {
    // The rearranged profile is admissible on the symmetrized annulus, so its
    // energy is at least that annulus' eigenvalue, above the offset eigenvalue.
    let out = faber_krahn(0.4, BoundaryLayout::InnerNeumannOuterDirichlet, 1.0 / 64.0, Metric::Flat, 2.0);
    let reports = check_rearrangement(&out.planar.field, 2.0).unwrap();
    let by_name = |name: &str| reports.iter().find(|r| r.check == name).unwrap();
    assert!(by_name("rearrangement.norm").pass);
    assert!(by_name("rearrangement.volume").pass);
    assert!(by_name("rearrangement.ladder").pass);
    let energy = by_name("rearrangement.energy");
    assert!(!energy.pass);
    assert!(energy.lhs >= out.radial.eigenvalue * (1.0 - 1e-3), "{energy}");
}

#[test]
fn rearrangement_rejects_dirichlet_hole() {
    let out = faber_krahn(0.0, BoundaryLayout::InnerDirichletOuterNeumann, 1.0 / 32.0, Metric::Flat, 2.0);
    assert!(check_rearrangement(&out.planar.field, 2.0).is_err());
}

#[test]
fn curvature_chains_are_monotone() {
    let reports = check_curvature_monotonicity(2.0, 2, 0.5, 1.0, &[-1.0, 0.0, 0.5], &opts()).unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
    let lam: Vec<_> = reports.iter().filter(|r| r.check.ends_with("lambda")).collect();
    assert!(lam.iter().all(|r| r.lhs < r.rhs));
    let mu: Vec<_> = reports.iter().filter(|r| r.check.ends_with("mu")).collect();
    assert!(mu.iter().all(|r| r.lhs > r.rhs));

    let repeated = check_curvature_monotonicity(2.0, 2, 0.5, 1.0, &[0.5, 0.5], &opts()).unwrap();
    assert!(repeated.iter().all(|r| r.pass && r.slack.abs() < 1e-14));
}

#[test]
fn vanishing_hole_rate() {
    let check = check_vanishing_hole(2.0, 2, 1.0, &LADDER, &opts()).unwrap();
    assert!(check.passed(), "{:#?}", check.reports.iter().filter(|r| !r.pass).collect::<Vec<_>>());
    assert!((1.7..=2.3).contains(&check.fit.slope), "{}", check.fit.slope);
    let above: Vec<_> = check.reports.iter().filter(|r| r.check == "vanishing_hole.above_ball").collect();
    assert_eq!(above.len(), 4);
    assert!(above.iter().all(|r| r.lhs > r.rhs));
    // Polynomial extrapolation in eps^2 recovers the ball eigenvalue to a few 1e-6.
    assert!(check.fit.details["extrapolation_rel_error"] < 1e-5);
    let ball = solve_dirichlet_ball(&SpaceForm::euclidean(2), 2.0, 1.0, &opts()).unwrap().eigenvalue;
    assert_eq!(check.fit.details["ball_eigenvalue"], ball);
}

#[test]
fn fitted_slopes_are_stable_under_ladder_shift() {
    let shifted: Vec<f64> = LADDER.iter().map(|e| 1.5 * e).collect();
    let a = check_vanishing_hole(2.0, 2, 1.0, &LADDER, &opts()).unwrap().fit.slope;
    let b = check_vanishing_hole(2.0, 2, 1.0, &shifted, &opts()).unwrap().fit.slope;
    assert!((a - b).abs() < 0.15, "{a} vs {b}");
    let a = check_mu_decay(2.0, 3, 1.0, &LADDER, &opts()).unwrap().fit.slope;
    let b = check_mu_decay(2.0, 3, 1.0, &shifted, &opts()).unwrap().fit.slope;
    assert!((a - b).abs() < 0.15, "{a} vs {b}");
}

#[test]
fn mu_decays_with_the_hole() {
    let check = check_mu_decay(2.0, 3, 1.0, &LADDER, &opts()).unwrap();
    assert!(check.passed());
    assert!(check.fit.slope >= 0.7 && (check.fit.slope - 1.0).abs() < 0.3, "{}", check.fit.slope);
    assert!(check.fit.ys.windows(2).all(|w| w[1] < w[0]));
    let sf = SpaceForm::euclidean(3);
    let mu = |e: f64| {
        let ann = AnnulusSpec::new(e, 1.0, AnnulusLayout::InnerDirichletOuterNeumann);
        solve_mu_star(&sf, 2.0, &ann, &opts()).unwrap().eigenvalue
    };
    assert!(mu(0.5) / mu(0.25) > 1.0);
}

#[test]
fn trial_bound_dominates_mu() {
    let sf = SpaceForm::euclidean(3);
    let report = check_mu_trial_bound(&sf, 2.0, 0.1, 0.1, 1.0, &opts()).unwrap();
    assert!(report.pass && report.lhs > report.rhs);
    // Independent quadrature (mpmath, 30 digits) of the same quotient.
    let oracle = 0.7034468897598233;
    assert!((report.lhs / oracle - 1.0).abs() < 1e-8, "{}", report.lhs);
}

#[test]
fn trial_bound_is_smallest_for_an_interior_ramp_width() {
    let sf = SpaceForm::euclidean(3);
    let etas: Vec<f64> = (1..=17).map(|k| 0.05 * k as f64).collect();
    let scan = mu_trial_scan(&sf, 2.0, 0.1, 1.0, &etas).unwrap();
    let (best, _) = scan.iter().copied().fold((0.0, f64::INFINITY), |acc, (e, b)| if b < acc.1 { (e, b) } else { acc });
    assert!((0.1..=0.25).contains(&best), "{best}");
    assert!(scan.last().unwrap().1 > scan[0].1);
    let ann = AnnulusSpec::new(0.1, 1.0, AnnulusLayout::InnerDirichletOuterNeumann);
    let mu = solve_mu_star(&sf, 2.0, &ann, &opts()).unwrap().eigenvalue;
    assert!(scan.iter().all(|(_, b)| *b >= mu));
}

#[test]
fn hadamard_formula_agrees_with_central_differences() {
    let sf = SpaceForm::euclidean(2);
    let coarse = check_hadamard(&sf, 2.0, 0.3, 1.0, 1e-3, &opts()).unwrap();
    assert!(coarse.pass, "{coarse}");
    assert!(coarse.slack.abs() <= 1e-3);
    assert_eq!(coarse.details["sign"], 1.0);
    let fine = check_hadamard(&sf, 2.0, 0.3, 1.0, 5e-4, &opts()).unwrap();
    assert!(coarse.slack.abs() >= 3.0 * fine.slack.abs(), "{} vs {}", coarse.slack, fine.slack);
    assert!((fine.lhs - fine.rhs).abs() < (coarse.lhs - coarse.rhs).abs());
}

#[test]
fn sign_structure_of_solver_profiles() {
    for kappa in [-1.0, 0.0, 0.5] {
        let sf = SpaceForm::new(2, kappa).unwrap();
        let lam = solve_lambda_star(&sf, 2.0, &AnnulusSpec::new(0.3, 1.0, AnnulusLayout::InnerNeumannOuterDirichlet), &opts()).unwrap();
        let reports = check_sign_structure(&lam);
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
        assert!(lam.profile.flux[0].abs() <= 1e-12);
        let mu = solve_mu_star(&sf, 2.0, &AnnulusSpec::new(0.3, 1.0, AnnulusLayout::InnerDirichletOuterNeumann), &opts()).unwrap();
        assert!(check_sign_structure(&mu).iter().all(|r| r.pass));
    }
    let ball = solve_dirichlet_ball(&SpaceForm::euclidean(3), 3.0, 1.0, &opts()).unwrap();
    let reports = check_sign_structure(&ball);
    assert_eq!(reports.len(), 1);
    assert!(reports[0].pass);
}

#[test]
fn flipped_profile_fails_sign_check() {
    let sf = SpaceForm::euclidean(2);
    let mut lam = solve_lambda_star(&sf, 2.0, &AnnulusSpec::new(0.3, 1.0, AnnulusLayout::InnerNeumannOuterDirichlet), &opts()).unwrap();
    lam.profile.flux[100] = 1.0;
    assert!(!check_sign_structure(&lam)[0].pass);
}

#[test]
fn small_suite_runs() {
    let config = SuiteConfig {
        grid_h: 1.0 / 128.0,
        planar_p: vec![2.0],
        domains: default_domains().into_iter().filter(|d| d.name == "concentric").collect(),
        radial_p: vec![2.0],
        monotonicity_dims: vec![2],
        ..SuiteConfig::default()
    };
    let report = run_suite(&config).unwrap();
    assert!(report.passed(), "{:#?}", report.failures().collect::<Vec<_>>());
    assert_eq!(report.fits.len(), 2);
    assert_eq!(report.reports.iter().filter(|r| r.check == "faber_krahn").count(), 1);
    assert_eq!(report.reports.iter().filter(|r| r.check.starts_with("rearrangement")).count(), 4);
}
