use std::f64::consts::PI;
use std::sync::Arc;

use annulus_spectra::geometry::{AnnulusLayout, AnnulusSpec, SpaceForm};
use annulus_spectra::planar::{
    build_domain, minimize_rayleigh, rayleigh_quotient, schwarz_rearrange, superlevel_volume, BoundaryLayout,
    GridDomain, Metric, MinimizeOptions, PlanarField, ShapeSpec,
};
use annulus_spectra::radial::{solve_lambda_star, SolverOptions};
use proptest::prelude::*;
use serde_json::Value;

const LAMBDA: BoundaryLayout = BoundaryLayout::InnerNeumannOuterDirichlet;

fn grid(shape: ShapeSpec, layout: BoundaryLayout, h: f64) -> Arc<GridDomain> {
    Arc::new(build_domain(&shape, layout, h, Metric::Flat).unwrap())
}

fn eigenvalue(shape: ShapeSpec, layout: BoundaryLayout, h: f64, p: f64) -> f64 {
    minimize_rayleigh(grid(shape, layout, h), p, &MinimizeOptions::default()).unwrap().eigenvalue
}

fn annulus(outer: f64, offset: f64) -> ShapeSpec {
    ShapeSpec::Annulus { outer, inner: 0.3, offset }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn square_and_disk_within_one_percent() {
    let square = eigenvalue(ShapeSpec::Rectangle { width: 1.0, height: 1.0 }, BoundaryLayout::AllDirichlet, 1.0 / 128.0, 2.0);
    assert!(rel(square, 2.0 * PI * PI) < 0.01, "{square}");
    let fixture: Value = serde_json::from_str(include_str!("fixtures/bessel_oracles.json")).unwrap();
    let j01_sq = fixture["dirichlet_disk_unit"].as_f64().unwrap();
    let disk = eigenvalue(ShapeSpec::Disk { radius: 1.0 }, BoundaryLayout::AllDirichlet, 1.0 / 128.0, 2.0);
    assert!(rel(disk, j01_sq) < 0.01, "{disk} vs {j01_sq}");
}

#[test]
fn concentric_annulus_matches_radial_solver() {
    let planar = eigenvalue(annulus(1.0, 0.0), LAMBDA, 1.0 / 128.0, 2.0);
    let ann = AnnulusSpec::new(0.3, 1.0, AnnulusLayout::InnerNeumannOuterDirichlet);
    let radial = solve_lambda_star(&SpaceForm::euclidean(2), 2.0, &ann, &SolverOptions::default()).unwrap();
    assert!(rel(planar, radial.eigenvalue) < 0.01, "{planar} vs {}", radial.eigenvalue);
}

#[test]
fn mesh_convergence_ratio_below_four() {
    // Differences between successive halvings shrink, with ratio under 4
    // (first-order rasterization of curved boundaries).
    for p in [2.0, 1.5] {
        let e: Vec<f64> = [16.0, 32.0, 64.0].iter().map(|n| eigenvalue(annulus(1.0, 0.0), LAMBDA, 1.0 / n, p)).collect();
        let ratio = (e[0] - e[1]) / (e[1] - e[2]);
        assert!(ratio > 0.0 && ratio < 4.0, "p={p}: {e:?} ratio {ratio}");
    }
}

#[test]
fn growing_the_domain_lowers_lambda() {
    let h = 1.0 / 32.0;
    for offset in [0.0, 0.3] {
        let small = eigenvalue(annulus(1.0, offset), LAMBDA, h, 2.0);
        let large = eigenvalue(annulus(1.0 + h, offset), LAMBDA, h, 2.0);
        assert!(large < small, "offset {offset}: {large} vs {small}");
    }
    let small = eigenvalue(ShapeSpec::Disk { radius: 1.0 }, BoundaryLayout::AllDirichlet, h, 1.5);
    let large = eigenvalue(ShapeSpec::Disk { radius: 1.0 + h }, BoundaryLayout::AllDirichlet, h, 1.5);
    assert!(large < small);
}

#[test]
fn sphere_metric_disk_matches_geodesic_ball() {
    use annulus_spectra::radial::solve_dirichlet_ball;
    // Stereographic radius tan(theta/2) is the cap of geodesic radius theta.
    let theta: f64 = 1.0;
    let shape = ShapeSpec::Disk { radius: (theta / 2.0).tan() };
    let d = Arc::new(build_domain(&shape, BoundaryLayout::AllDirichlet, 1.0 / 128.0, Metric::Sphere).unwrap());
    let planar = minimize_rayleigh(d, 2.0, &MinimizeOptions::default()).unwrap().eigenvalue;
    let sf = SpaceForm::new(2, 1.0).unwrap();
    let radial = solve_dirichlet_ball(&sf, 2.0, theta, &SolverOptions::default()).unwrap().eigenvalue;
    assert!(rel(planar, radial) < 0.01, "{planar} vs {radial}");
}

#[test]
fn energy_history_is_nonincreasing() {
    for p in [1.5, 2.0, 4.0] {
        let r = minimize_rayleigh(grid(annulus(1.0, 0.4), LAMBDA, 1.0 / 32.0), p, &MinimizeOptions::default()).unwrap();
        assert!(r.energy_history.windows(2).all(|w| w[1] <= w[0]), "p={p}");
        let q = rayleigh_quotient(&r.field, p).unwrap();
        assert!(rel(q, r.eigenvalue) < 1e-12);
    }
}

fn random_field(d: &Arc<GridDomain>, seed: &[f64]) -> PlanarField {
    let values = (0..d.len()).map(|k| seed[k % seed.len()].abs() * (1.0 + (k % 7) as f64)).collect();
    PlanarField::new(d.clone(), values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_is_scale_invariant(seed in prop::collection::vec(0.01f64..1.0, 5..40), c in 0.01f64..100.0, p in 1.2f64..6.0) {
        let d = grid(annulus(1.0, 0.2), LAMBDA, 1.0 / 16.0);
        let u = random_field(&d, &seed);
        let scaled = PlanarField::new(d.clone(), u.values.iter().map(|v| c * v).collect()).unwrap();
        let (a, b) = (rayleigh_quotient(&u, p).unwrap(), rayleigh_quotient(&scaled, p).unwrap());
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn rearrangement_matches_volumes_and_decreases(seed in prop::collection::vec(0.01f64..1.0, 5..40)) {
        let d = grid(annulus(1.0, 0.3), LAMBDA, 1.0 / 16.0);
        let u = random_field(&d, &seed);
        let sf = SpaceForm::euclidean(2);
        let hole = d.hole_measure();
        let h = schwarz_rearrange(&u, hole, &sf).unwrap();
        prop_assert!(h.value.windows(2).all(|w| w[1] < w[0]));
        for (&r, &t) in h.r.iter().zip(&h.value).filter(|(_, t)| **t > 0.0) {
            let star = sf.ball_volume(r).unwrap() - hole;
            prop_assert!((star - superlevel_volume(&u, t)).abs() < 1e-12 * d.measure());
        }
    }
}
