use annulus_spectra::geometry::{AnnulusLayout, AnnulusSpec, SpaceForm};
use annulus_spectra::radial::{
    shooting_boundary_value, solve_dirichlet_ball, solve_lambda_star, solve_mu_star, RadialProblem,
    SolverOptions,
};
use proptest::prelude::*;
use serde_json::Value;

fn fixture() -> Value {
    serde_json::from_str(include_str!("fixtures/bessel_oracles.json")).unwrap()
}

fn lam(r1: f64, r2: f64) -> AnnulusSpec {
    AnnulusSpec::new(r1, r2, AnnulusLayout::InnerNeumannOuterDirichlet)
}

fn mu(r1: f64, r2: f64) -> AnnulusSpec {
    AnnulusSpec::new(r1, r2, AnnulusLayout::InnerDirichletOuterNeumann)
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn bessel_annulus_roots() {
    let opts = SolverOptions::default();
    for case in fixture()["annulus"].as_array().unwrap() {
        let n = case["n"].as_u64().unwrap() as usize;
        let (r1, r2) = (case["r1"].as_f64().unwrap(), case["r2"].as_f64().unwrap());
        let sf = SpaceForm::euclidean(n);
        let l = solve_lambda_star(&sf, 2.0, &lam(r1, r2), &opts).unwrap();
        let m = solve_mu_star(&sf, 2.0, &mu(r1, r2), &opts).unwrap();
        let (l_ref, m_ref) = (case["lambda"].as_f64().unwrap(), case["mu"].as_f64().unwrap());
        assert!(rel(l.eigenvalue, l_ref) < 1e-6, "n={n} r1={r1}: {} vs {l_ref}", l.eigenvalue);
        assert!(rel(m.eigenvalue, m_ref) < 1e-6, "n={n} r1={r1}: {} vs {m_ref}", m.eigenvalue);
    }
}

#[test]
fn bessel_disk() {
    let disk = fixture()["dirichlet_disk_unit"].as_f64().unwrap();
    let r = solve_dirichlet_ball(&SpaceForm::euclidean(2), 2.0, 1.0, &SolverOptions::default()).unwrap();
    assert!(rel(r.eigenvalue, disk) < 1e-6);
}

#[test]
fn vanishing_hole_ladder() {
    let opts = SolverOptions::default();
    let sf = SpaceForm::euclidean(2);
    for case in fixture()["vanishing_hole_n2"].as_array().unwrap() {
        let eps = case["epsilon"].as_f64().unwrap();
        let r = solve_lambda_star(&sf, 2.0, &lam(eps, 1.0), &opts).unwrap();
        assert!(rel(r.eigenvalue, case["lambda"].as_f64().unwrap()) < 1e-6, "eps={eps}");
    }
    let sf = SpaceForm::euclidean(3);
    for case in fixture()["mu_decay_n3"].as_array().unwrap() {
        let eps = case["epsilon"].as_f64().unwrap();
        let r = solve_mu_star(&sf, 2.0, &mu(eps, 1.0), &opts).unwrap();
        assert!(rel(r.eigenvalue, case["mu"].as_f64().unwrap()) < 1e-6, "eps={eps}");
    }
}

#[test]
fn euclidean_scaling() {
    let opts = SolverOptions::default();
    let sf = SpaceForm::euclidean(2);
    let base = solve_lambda_star(&sf, 2.0, &lam(1.0, 2.0), &opts).unwrap().eigenvalue;
    let doubled = solve_lambda_star(&sf, 2.0, &lam(2.0, 4.0), &opts).unwrap().eigenvalue;
    assert!(rel(doubled, base / 4.0) < 1e-6);
    for p in [1.5, 3.0] {
        for c in [0.5, 2.0] {
            let a = solve_mu_star(&sf, p, &mu(0.4, 1.0), &opts).unwrap().eigenvalue;
            let b = solve_mu_star(&sf, p, &mu(0.4 * c, c), &opts).unwrap().eigenvalue;
            assert!(rel(b * c.powf(p), a) < 1e-6, "p={p} c={c}");
        }
    }
}

#[test]
fn lambda_decreases_with_outer_radius() {
    let opts = SolverOptions::default();
    for (n, kappa) in [(2, 0.0), (3, -1.0), (2, 0.5)] {
        let sf = SpaceForm::new(n, kappa).unwrap();
        let ladder: Vec<f64> = [1.0, 1.2, 1.4, 1.6, 1.8]
            .iter()
            .map(|&r2| solve_lambda_star(&sf, 2.5, &lam(0.5, r2), &opts).unwrap().eigenvalue)
            .collect();
        assert!(ladder.windows(2).all(|w| w[1] < w[0]), "{ladder:?}");
    }
}

#[test]
fn sign_structure_of_fluxes() {
    let opts = SolverOptions::default();
    for p in [1.5, 2.0, 3.0] {
        for kappa in [-1.0, 0.0, 0.5] {
            for (r1, r2) in [(0.3, 1.0), (0.5, 2.0)] {
                let sf = SpaceForm::new(2, kappa).unwrap();
                let l = solve_lambda_star(&sf, p, &lam(r1, r2), &opts).unwrap();
                let m = solve_mu_star(&sf, p, &mu(r1, r2), &opts).unwrap();
                let last = l.profile.len() - 1;
                assert!(l.profile.flux[1..=last].iter().all(|&w| w < 0.0));
                assert!(m.profile.flux[..last].iter().all(|&w| w > 0.0));
                assert_eq!(l.profile.flux[0], 0.0);
                assert!(m.profile.value[1..].iter().all(|&u| u > 0.0));
            }
        }
    }
}

#[test]
fn single_sign_change_in_final_bracket() {
    let opts = SolverOptions::default();
    let sf = SpaceForm::new(3, -0.5).unwrap();
    for (problem, r) in [
        (RadialProblem::Lambda, solve_lambda_star(&sf, 1.5, &lam(0.3, 1.0), &opts).unwrap()),
        (RadialProblem::Mu, solve_mu_star(&sf, 3.0, &mu(0.3, 1.0), &opts).unwrap()),
    ] {
        // Scan a bracket of relative width 1e-5 around the converged value.
        let values: Vec<f64> = (0..16)
            .map(|k| {
                let t = r.eigenvalue * (1.0 + 1e-5 * (k as f64 / 15.0 - 0.5));
                shooting_boundary_value(&sf, r.p, problem, 0.3, 1.0, t, &opts).unwrap()
            })
            .collect();
        let changes = values.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        assert_eq!(changes, 1, "{values:?}");
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn refinement_stability() {
    let opts = SolverOptions::default();
    let fine = SolverOptions { ode_tol: opts.ode_tol / 2.0, ..opts };
    let sf = SpaceForm::new(2, 0.5).unwrap();
    for p in [1.5, 2.0, 3.0] {
        let a = solve_lambda_star(&sf, p, &lam(0.3, 1.0), &opts).unwrap().eigenvalue;
        let b = solve_lambda_star(&sf, p, &lam(0.3, 1.0), &fine).unwrap().eigenvalue;
        assert!(rel(a, b) < 10.0 * opts.eig_rel_tol, "p={p}: {a} vs {b}");
    }
}

#[test]
fn ode_residual_at_default_tolerances() {
    let opts = SolverOptions::default();
    let sf = SpaceForm::euclidean(2);
    for (p, bound) in [(1.5, 1e-2), (2.0, 1e-4), (3.0, 1e-4)] {
        let r = solve_lambda_star(&sf, p, &lam(0.5, 1.0), &opts).unwrap();
        println!("p={p}: ode_residual {:.3e}", r.ode_residual);
        assert!(r.ode_residual <= bound, "p={p}: {}", r.ode_residual);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn normalized_positive_profiles(
        p in 1.2_f64..6.0,
        kappa in -1.0_f64..1.0,
        r1 in 0.1_f64..0.8,
        width in 0.2_f64..1.0,
    ) {
        let sf = SpaceForm::new(2, kappa).unwrap();
        let opts = SolverOptions::default();
        let l = solve_lambda_star(&sf, p, &lam(r1, r1 + width), &opts).unwrap();
        prop_assert!(l.eigenvalue > 0.0);
        prop_assert!((l.normalization - 1.0).abs() < 1e-10);
        prop_assert!(l.profile.value[..l.profile.len() - 1].iter().all(|&u| u > 0.0));
        let m = solve_mu_star(&sf, p, &mu(r1, r1 + width), &opts).unwrap();
        prop_assert!(m.eigenvalue > 0.0);
        prop_assert!((m.normalization - 1.0).abs() < 1e-10);
    }
}
