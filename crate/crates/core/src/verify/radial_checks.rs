use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ComparisonReport, FitReport, Relation, VerifyError};
use crate::geometry::{AnnulusLayout, AnnulusSpec, SpaceForm};
use crate::quadrature;
use crate::radial::{
    solve_dirichlet_ball, solve_lambda_star, solve_mu_star, EigenResult, RadialProblem, SolverOptions,
};

/// A rate fit together with the pointwise comparisons made on the same ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCheck {
    pub fit: FitReport,
    pub reports: Vec<ComparisonReport>,
}

impl RateCheck {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

fn radial_tolerance(opts: &SolverOptions) -> f64 {
    10.0 * opts.eig_rel_tol
}

/// Compares consecutive curvatures: with `kappa_i <= kappa_{i+1}`, the model
/// of curvature `kappa_{i+1}` has Ricci curvature bounded below by
/// `(n-1) kappa_i`, so `lambda*` must not increase and `mu*` must not
/// decrease. Returns the `lambda` reports followed by the `mu` reports.
pub fn check_curvature_monotonicity(
    p: f64,
    n: usize,
    r1: f64,
    r2: f64,
    kappas: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<ComparisonReport>, VerifyError> {
    if kappas.len() < 2 {
        return Err(VerifyError::Parameter("need at least two curvatures".into()));
    }
    if kappas.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(VerifyError::Parameter(format!("curvatures must be non-decreasing, got {kappas:?}")));
    }
    let solved: Vec<(f64, f64)> = kappas
        .par_iter()
        .map(|&kappa| {
            let sf = SpaceForm::new(n, kappa)?;
            let lam = solve_lambda_star(&sf, p, &AnnulusSpec::new(r1, r2, AnnulusLayout::InnerNeumannOuterDirichlet), opts)?;
            let mu = solve_mu_star(&sf, p, &AnnulusSpec::new(r1, r2, AnnulusLayout::InnerDirichletOuterNeumann), opts)?;
            Ok((lam.eigenvalue, mu.eigenvalue))
        })
        .collect::<Result<_, VerifyError>>()?;
    let tol = radial_tolerance(opts);
    let mut lambda_reports = Vec::new();
    let mut mu_reports = Vec::new();
    for i in 1..kappas.len() {
        let (k0, k1) = (kappas[i - 1], kappas[i]);
        let prov = |name: &str| {
            format!("{name}*(kappa={k1}) vs {name}*(kappa={k0}); p={p}, n={n}, r1={r1}, r2={r2}")
        };
        lambda_reports.push(
            ComparisonReport::relative("curvature_monotonicity.lambda", solved[i].0, solved[i - 1].0, Relation::Le, tol, prov("lambda"))
                .detail("kappa_lhs", k1)
                .detail("kappa_rhs", k0),
        );
        mu_reports.push(
            ComparisonReport::relative("curvature_monotonicity.mu", solved[i].1, solved[i - 1].1, Relation::Ge, tol, prov("mu"))
                .detail("kappa_lhs", k1)
                .detail("kappa_rhs", k0),
        );
    }
    lambda_reports.extend(mu_reports);
    Ok(lambda_reports)
}

fn check_ladder(radius: f64, epsilons: &[f64], max_ratio: f64) -> Result<(), VerifyError> {
    if epsilons.len() < 4 {
        return Err(VerifyError::Parameter(format!("need at least 4 hole radii, got {}", epsilons.len())));
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(VerifyError::Parameter(format!("hole radii must be strictly decreasing, got {epsilons:?}")));
    }
    if !(epsilons[epsilons.len() - 1] > 0.0) || !(epsilons[0] < max_ratio * radius) {
        return Err(VerifyError::Parameter(format!(
            "hole radii must lie in (0, {}), got {epsilons:?}",
            max_ratio * radius
        )));
    }
    Ok(())
}

/// Polynomial extrapolation in `eps^2` to `eps = 0` (Neville's scheme).
fn extrapolate_to_zero(eps: &[f64], values: &[f64]) -> f64 {
    let x: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let mut t = values.to_vec();
    let m = t.len();
    for k in 1..m {
        for i in 0..m - k {
            t[i] = (x[i + k] * t[i] - x[i] * t[i + 1]) / (x[i + k] - x[i]);
        }
    }
    t[0]
}

/// Small Neumann holes in a Dirichlet ball: `lambda_p(B(R) \ B(eps))`
/// against the ball eigenvalue `lambda_{p,0}(B(R))`.
///
/// Reports, per hole radius: the strict excess over the ball eigenvalue, and
/// the two-sided bound `lambda_0 - C1 eps^(n-1) <= lambda(eps) <= lambda_0 + C2 eps^n`
/// with the smallest constants that hold on the ladder (recorded in the
/// details). Consecutive radii are checked for monotonicity, and the log-log
/// slope of `lambda(eps) - lambda_0` must lie within 0.3 of `n`.
pub fn check_vanishing_hole(
    p: f64,
    n: usize,
    radius: f64,
    epsilons: &[f64],
    opts: &SolverOptions,
) -> Result<RateCheck, VerifyError> {
    check_ladder(radius, epsilons, 0.5)?;
    let sf = SpaceForm::new(n, 0.0)?;
    let ball = solve_dirichlet_ball(&sf, p, radius, opts)?.eigenvalue;
    let lambdas: Vec<f64> = epsilons
        .par_iter()
        .map(|&e| {
            let ann = AnnulusSpec::new(e, radius, AnnulusLayout::InnerNeumannOuterDirichlet);
            Ok(solve_lambda_star(&sf, p, &ann, opts)?.eigenvalue)
        })
        .collect::<Result<_, VerifyError>>()?;
    let tol = radial_tolerance(opts);
    let params = format!("p={p}, n={n}, R={radius}");
    let excess: Vec<f64> = lambdas.iter().map(|l| l - ball).collect();
    let nf = n as f64;
    let c_upper = epsilons.iter().zip(&excess).map(|(e, d)| d / e.powf(nf)).fold(0.0, f64::max);
    let c_lower = epsilons.iter().zip(&excess).map(|(e, d)| -d / e.powf(nf - 1.0)).fold(0.0, f64::max);

    let mut reports = Vec::new();
    for (&e, &l) in epsilons.iter().zip(&lambdas) {
        let prov = |what: &str| format!("lambda_p(B(R)\\B(eps)) vs {what}; eps={e}, {params}");
        reports.push(ComparisonReport::relative(
            "vanishing_hole.above_ball",
            l,
            ball,
            Relation::Gt,
            0.0,
            prov("lambda_p0(B(R))"),
        ));
        reports.push(
            ComparisonReport::relative(
                "vanishing_hole.upper",
                l,
                ball + c_upper * e.powf(nf),
                Relation::Le,
                tol,
                prov("lambda_p0 + C2 eps^n"),
            )
            .detail("c2", c_upper),
        );
        reports.push(
            ComparisonReport::relative(
                "vanishing_hole.lower",
                l,
                ball - c_lower * e.powf(nf - 1.0),
                Relation::Ge,
                tol,
                prov("lambda_p0 - C1 eps^(n-1)"),
            )
            .detail("c1", c_lower),
        );
    }
    for i in 1..epsilons.len() {
        reports.push(ComparisonReport::relative(
            "vanishing_hole.monotone",
            lambdas[i],
            lambdas[i - 1],
            Relation::Le,
            tol,
            format!("lambda_p(eps={}) vs lambda_p(eps={}); {params}", epsilons[i], epsilons[i - 1]),
        ));
    }

    let mut fit = if excess.iter().all(|d| *d > 0.0) {
        FitReport::fit("vanishing_hole.rate", epsilons.to_vec(), excess.clone())?
    } else {
        let abs = excess.iter().map(|d| d.abs().max(f64::MIN_POSITIVE)).collect();
        FitReport::fit("vanishing_hole.rate", epsilons.to_vec(), abs)?
    };
    let limit = extrapolate_to_zero(epsilons, &lambdas);
    fit.details.insert("ball_eigenvalue".into(), ball);
    fit.details.insert("extrapolated_limit".into(), limit);
    fit.details.insert("extrapolation_rel_error".into(), (limit - ball).abs() / ball);
    fit.details.insert("c1".into(), c_lower);
    fit.details.insert("c2".into(), c_upper);
    reports.push(
        ComparisonReport::absolute(
            "vanishing_hole.rate",
            fit.slope,
            nf,
            Relation::Eq,
            0.3,
            format!("log-log slope of lambda_p(eps) - lambda_p0 vs n; {params}"),
        )
        .detail("r_squared", fit.r_squared),
    );
    Ok(RateCheck { fit, reports })
}

/// Dirichlet holes in a Neumann ball: `mu_p(B(R) \ B(eps))` must decrease
/// strictly as the hole shrinks, with log-log slope at least `n - 2.3`.
pub fn check_mu_decay(
    p: f64,
    n: usize,
    radius: f64,
    epsilons: &[f64],
    opts: &SolverOptions,
) -> Result<RateCheck, VerifyError> {
    if n < 3 {
        return Err(VerifyError::Parameter(format!("mu decays to zero only for n >= 3, got n = {n}")));
    }
    check_ladder(radius, epsilons, 1.0)?;
    let sf = SpaceForm::new(n, 0.0)?;
    let mus: Vec<f64> = epsilons
        .par_iter()
        .map(|&e| {
            let ann = AnnulusSpec::new(e, radius, AnnulusLayout::InnerDirichletOuterNeumann);
            Ok(solve_mu_star(&sf, p, &ann, opts)?.eigenvalue)
        })
        .collect::<Result<_, VerifyError>>()?;
    let params = format!("p={p}, n={n}, R={radius}");
    let mut reports = Vec::new();
    for i in 1..epsilons.len() {
        reports.push(ComparisonReport::relative(
            "mu_decay.monotone",
            mus[i],
            mus[i - 1],
            Relation::Lt,
            0.0,
            format!("mu_p(eps={}) vs mu_p(eps={}); {params}", epsilons[i], epsilons[i - 1]),
        ));
    }
    let fit = FitReport::fit("mu_decay.rate", epsilons.to_vec(), mus)?;
    reports.push(
        ComparisonReport::absolute(
            "mu_decay.rate",
            fit.slope,
            n as f64 - 2.3,
            Relation::Ge,
            0.0,
            format!("log-log slope of mu_p(eps) vs n - 2 - 0.3; {params}"),
        )
        .detail("r_squared", fit.r_squared),
    );
    Ok(RateCheck { fit, reports })
}

/// Rayleigh quotient of the ramp `w(r) = min(r - eps, eta)` on
/// `B(R) \ B(eps)`, which vanishes on the inner sphere and is admissible for
/// `mu`. The energy is the shell volume `Vol(B(eps+eta)) - Vol(B(eps))`; the
/// mass integral over the ramp is computed by adaptive quadrature.
pub fn mu_trial_upper_bound(sf: &SpaceForm, p: f64, epsilon: f64, eta: f64, radius: f64) -> Result<f64, VerifyError> {
    sf.validate()?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(VerifyError::Parameter(format!("p must exceed 1, got {p}")));
    }
    if !(epsilon > 0.0 && eta > 0.0 && epsilon + eta < radius) {
        return Err(VerifyError::Parameter(format!(
            "need eps > 0, eta > 0 and eps + eta < R, got eps={epsilon}, eta={eta}, R={radius}"
        )));
    }
    sf.check_radius(radius)?;
    let top = epsilon + eta;
    let energy = sf.ball_volume(top)? - sf.ball_volume(epsilon)?;
    let ramp = quadrature::integrate(|r| (r - epsilon).powf(p) * sf.jacobian(r), epsilon, top, 1e-13, 0.0);
    let cap = eta.powf(p) * (sf.ball_volume(radius)? - sf.ball_volume(top)?);
    Ok(energy / (sf.sphere_area() * ramp.value + cap))
}

/// Evaluates [`mu_trial_upper_bound`] over `etas`, returning `(eta, bound)` pairs.
pub fn mu_trial_scan(
    sf: &SpaceForm,
    p: f64,
    epsilon: f64,
    radius: f64,
    etas: &[f64],
) -> Result<Vec<(f64, f64)>, VerifyError> {
    etas.iter().map(|&eta| Ok((eta, mu_trial_upper_bound(sf, p, epsilon, eta, radius)?))).collect()
}

/// The ramp bound must dominate the computed `mu_p(B(R) \ B(eps))`.
pub fn check_mu_trial_bound(
    sf: &SpaceForm,
    p: f64,
    epsilon: f64,
    eta: f64,
    radius: f64,
    opts: &SolverOptions,
) -> Result<ComparisonReport, VerifyError> {
    let bound = mu_trial_upper_bound(sf, p, epsilon, eta, radius)?;
    let ann = AnnulusSpec::new(epsilon, radius, AnnulusLayout::InnerDirichletOuterNeumann);
    let mu = solve_mu_star(sf, p, &ann, opts)?.eigenvalue;
    Ok(ComparisonReport::relative(
        "mu_trial_bound",
        bound,
        mu,
        Relation::Ge,
        radial_tolerance(opts),
        format!(
            "ramp quotient vs mu_p; p={p}, n={}, kappa={}, eps={epsilon}, eta={eta}, R={radius}",
            sf.n, sf.kappa
        ),
    ))
}

/// Inner-radius derivative of `lambda*` on `B(r2) \ B(r1)`.
///
/// With a Neumann inner sphere the gradient vanishes there, and moving the
/// inner sphere outward removes the region where `u` is largest, so
/// `d lambda / d r1 = lambda u(r1)^p Area(S(r1))` for `u` normalized in
/// `L^p`. The right side uses the integrator-carried mass of the shot
/// (launched with `u(r1) = 1`). The left side is the central difference
/// `(lambda(r1 + delta) - lambda(r1 - delta)) / (2 delta)`. Solves run with
/// tolerances tightened to `1e-13` so the difference is not dominated by
/// bisection noise.
pub fn check_hadamard(
    sf: &SpaceForm,
    p: f64,
    r1: f64,
    r2: f64,
    delta: f64,
    opts: &SolverOptions,
) -> Result<ComparisonReport, VerifyError> {
    if !(delta > 0.0 && delta <= r1 / 10.0) {
        return Err(VerifyError::Parameter(format!("need 0 < delta <= r1/10, got delta={delta}, r1={r1}")));
    }
    let tight = opts.tightened(1e-13);
    let solve = |inner: f64| {
        let ann = AnnulusSpec::new(inner, r2, AnnulusLayout::InnerNeumannOuterDirichlet);
        solve_lambda_star(sf, p, &ann, &tight)
    };
    let [center, plus, minus]: [EigenResult; 3] = [r1, r1 + delta, r1 - delta]
        .par_iter()
        .map(|&r| solve(r))
        .collect::<Result<Vec<_>, _>>()?
        .try_into()
        .expect("three solves");
    let fd = (plus.eigenvalue - minus.eigenvalue) / (2.0 * delta);
    let formula = center.eigenvalue * sf.sphere_area_at(r1)? / center.ode_mass;
    let tolerance = 1e-3_f64.max(10.0 * delta * delta);
    Ok(ComparisonReport::relative(
        "hadamard",
        fd,
        formula,
        Relation::Eq,
        tolerance,
        format!(
            "central difference of lambda* in r1 vs lambda u(r1)^p Area(S(r1)); p={p}, n={}, kappa={}, r1={r1}, r2={r2}, delta={delta}",
            sf.n, sf.kappa
        ),
    )
    .detail("lambda", center.eigenvalue)
    .detail("lambda_plus", plus.eigenvalue)
    .detail("lambda_minus", minus.eigenvalue)
    .detail("sign", formula.signum()))
}

/// Strict sign of the interior flux (negative for `lambda` profiles and balls,
/// positive for `mu` profiles), plus, for annuli, the flux at the Neumann end
/// relative to the flux at the Dirichlet end, which must not exceed the
/// solver's boundary residual.
pub fn check_sign_structure(result: &EigenResult) -> Vec<ComparisonReport> {
    let flux = &result.profile.flux;
    let n = flux.len();
    let scale = flux.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let interior = &flux[1..n.saturating_sub(1).max(1)];
    let label = format!(
        "{:?}, p={}, n={}, kappa={}, r=[{}, {}]",
        result.problem,
        result.p,
        result.space_form.n,
        result.space_form.kappa,
        result.profile.inner_radius(),
        result.profile.outer_radius()
    );
    let mut reports = Vec::new();
    match result.problem {
        RadialProblem::Lambda | RadialProblem::DirichletBall => {
            let worst = interior.iter().copied().fold(f64::NEG_INFINITY, f64::max) / scale;
            reports.push(ComparisonReport::absolute(
                "sign_structure.interior",
                worst,
                0.0,
                Relation::Lt,
                0.0,
                format!("largest interior flux / max |flux| vs 0; {label}"),
            ));
        }
        RadialProblem::Mu => {
            let worst = interior.iter().copied().fold(f64::INFINITY, f64::min) / scale;
            reports.push(ComparisonReport::absolute(
                "sign_structure.interior",
                worst,
                0.0,
                Relation::Gt,
                0.0,
                format!("smallest interior flux / max |flux| vs 0; {label}"),
            ));
        }
    }
    let ends = match result.problem {
        RadialProblem::Lambda => Some((flux[0], flux[n - 1], 1e-12)),
        RadialProblem::Mu => Some((flux[n - 1], flux[0], result.boundary_residual)),
        RadialProblem::DirichletBall => None,
    };
    if let Some((neumann, dirichlet, bound)) = ends {
        let ratio = if dirichlet != 0.0 { (neumann / dirichlet).abs() } else { f64::INFINITY };
        reports.push(ComparisonReport::absolute(
            "sign_structure.neumann_end",
            ratio,
            bound,
            Relation::Le,
            1e-12,
            format!("|flux at Neumann end / flux at Dirichlet end| vs boundary residual; {label}"),
        ));
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_is_exact_on_polynomials() {
        let eps = [0.4_f64, 0.2, 0.1, 0.05];
        let vals: Vec<f64> = eps.iter().map(|e| 3.0 + 2.0 * e * e - e.powi(4) + 0.5 * e.powi(6)).collect();
        assert!((extrapolate_to_zero(&eps, &vals) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trial_bound_euclidean_p2_closed_form() {
        // n = 3, p = 2: int_e^{e+h} (r-e)^2 r^2 dr = h^3 (10 e^2 + 15 e h + 6 h^2) / 30.
        let (e, h, big_r) = (0.1_f64, 0.1_f64, 1.0_f64);
        let sf = SpaceForm::euclidean(3);
        let four_pi = 4.0 * std::f64::consts::PI;
        let energy = four_pi / 3.0 * ((e + h).powi(3) - e.powi(3));
        let ramp = four_pi * h.powi(3) * (10.0 * e * e + 15.0 * e * h + 6.0 * h * h) / 30.0;
        let cap = h * h * four_pi / 3.0 * (big_r.powi(3) - (e + h).powi(3));
        let exact = energy / (ramp + cap);
        let got = mu_trial_upper_bound(&sf, 2.0, e, h, big_r).unwrap();
        assert!((got / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trial_bound_rejects_bad_geometry() {
        let sf = SpaceForm::euclidean(3);
        assert!(mu_trial_upper_bound(&sf, 2.0, 0.5, 0.6, 1.0).is_err());
        assert!(mu_trial_upper_bound(&sf, 2.0, 0.0, 0.1, 1.0).is_err());
        assert!(mu_trial_upper_bound(&sf, 1.0, 0.1, 0.1, 1.0).is_err());
        assert!(mu_trial_upper_bound(&SpaceForm { n: 3, kappa: 1.0 }, 2.0, 0.1, 0.1, 4.0).is_err());
    }

    #[test]
    fn ladder_validation() {
        let opts = SolverOptions::default();
        assert!(check_vanishing_hole(2.0, 2, 1.0, &[0.16, 0.08, 0.04], &opts).is_err());
        assert!(check_vanishing_hole(2.0, 2, 1.0, &[0.6, 0.08, 0.04, 0.02], &opts).is_err());
        assert!(check_vanishing_hole(2.0, 2, 1.0, &[0.02, 0.04, 0.08, 0.16], &opts).is_err());
        assert!(check_mu_decay(2.0, 2, 1.0, &[0.4, 0.2, 0.1, 0.05], &opts).is_err());
        assert!(check_curvature_monotonicity(2.0, 2, 0.5, 1.0, &[0.0, -1.0], &opts).is_err());
        assert!(check_hadamard(&SpaceForm::euclidean(2), 2.0, 0.3, 1.0, 0.05, &opts).is_err());
    }
}
