use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::energy::Discretization;
use super::skyline::SkylineCholesky;
use super::{CellClass, GridDomain, PlanarError, PlanarField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// Stop when the quotient changes by less than this (relative) over `window` iterations.
    pub rel_tol: f64,
    pub window: usize,
    pub max_iterations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { rel_tol: 1e-8, window: 10, max_iterations: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult2D {
    pub eigenvalue: f64,
    pub field: PlanarField,
    pub iterations: usize,
    pub final_step: f64,
    /// Quotient after the initial guess and after each accepted step.
    pub energy_history: Vec<f64>,
}

const MIN_STEP: f64 = 1e-14;

/// Minimizes the discrete Rayleigh quotient over nonnegative fields with
/// unit `p`-mass.
///
/// Each step moves along the preconditioned descent direction
/// `-K^{-1} grad R`, where `K` is the `p = 2` stiffness matrix on the active
/// nodes. The step starts from the last accepted length (doubled, capped at
/// `8/p`) and is halved until the quotient decreases; the trial is clipped at
/// zero and renormalized. For `p = 2` a step of `1/2` is one step of inverse
/// iteration.
pub fn minimize_rayleigh(
    domain: Arc<GridDomain>,
    p: f64,
    opts: &MinimizeOptions,
) -> Result<EigenResult2D, PlanarError> {
    if !(1.2..=6.0).contains(&p) {
        return Err(PlanarError::Parameter(format!("p must lie in [1.2, 6], got {p}")));
    }
    if opts.window == 0 || !(opts.rel_tol > 0.0) {
        return Err(PlanarError::Parameter("window and rel_tol must be positive".into()));
    }
    if domain.count(CellClass::DirichletBoundary) == 0 {
        return Err(PlanarError::NoDirichlet);
    }
    let disc = Discretization::new(&domain, p);
    let active: Vec<usize> = (0..domain.len()).filter(|&k| domain.cell_class[k].is_active()).collect();
    let precond = stiffness_factor(&domain, &disc, &active)?;

    let mut u = initial_guess(&domain);
    normalize(&disc, &mut u);
    let len = u.len();
    let mut grad = vec![0.0; len];
    let mut dir = vec![0.0; active.len()];
    let mut trial = vec![0.0; len];
    let mut r = disc.quotient_gradient(&u, &mut grad).ok_or(PlanarError::ZeroField)?;
    let mut history = vec![r];
    let max_step = 8.0 / p;
    let mut step = 1.0 / p;
    let mut iterations = 0;
    loop {
        if iterations >= opts.max_iterations {
            return Err(PlanarError::ConvergenceFailure { iterations, history });
        }
        iterations += 1;
        for (d, &k) in dir.iter_mut().zip(&active) {
            *d = -grad[k];
        }
        precond.solve(&mut dir);
        let mut accepted = None;
        while step >= MIN_STEP {
            trial.copy_from_slice(&u);
            for (d, &k) in dir.iter().zip(&active) {
                trial[k] = (u[k] + step * d).max(0.0);
            }
            if normalize(&disc, &mut trial) {
                let rt = disc.energy(&trial);
                if rt < r {
                    accepted = Some(rt);
                    break;
                }
            }
            step *= 0.5;
        }
        let Some(_) = accepted else {
            // No decrease at any step length: the quotient is stationary to rounding.
            break;
        };
        std::mem::swap(&mut u, &mut trial);
        r = disc.quotient_gradient(&u, &mut grad).ok_or(PlanarError::ZeroField)?;
        history.push(r);
        let n = history.len();
        if n > opts.window {
            let old = history[n - 1 - opts.window];
            if (old - r).abs() <= opts.rel_tol * r.abs() {
                break;
            }
        }
        step = (2.0 * step).min(max_step);
    }
    let field = PlanarField { values: u, domain };
    Ok(EigenResult2D { eigenvalue: r, field, iterations, final_step: step, energy_history: history })
}

/// Scales `u` to unit mass; false if it vanishes.
fn normalize(disc: &Discretization, u: &mut [f64]) -> bool {
    let m = disc.mass(u);
    if !(m > 0.0) || !m.is_finite() {
        return false;
    }
    let s = m.powf(-1.0 / disc.p);
    u.iter_mut().for_each(|v| *v *= s);
    true
}

/// Graph distance (in units of `h`) from the Dirichlet nodes, on active nodes.
fn initial_guess(domain: &GridDomain) -> Vec<f64> {
    let nx = domain.nx;
    let mut dist = vec![usize::MAX; domain.len()];
    let mut queue = VecDeque::new();
    for (k, c) in domain.cell_class.iter().enumerate() {
        if *c == CellClass::DirichletBoundary {
            dist[k] = 0;
            queue.push_back(k);
        }
    }
    while let Some(k) = queue.pop_front() {
        for m in [k.wrapping_sub(1), k + 1, k.wrapping_sub(nx), k + nx] {
            if m < domain.len() && domain.cell_class[m].is_active() && dist[m] == usize::MAX {
                dist[m] = dist[k] + 1;
                queue.push_back(m);
            }
        }
    }
    dist.iter()
        .zip(&domain.cell_class)
        .map(|(&d, c)| if c.is_active() && d != usize::MAX { d as f64 * domain.h } else { 0.0 })
        .collect()
}

/// Cholesky factor of the `p = 2` stiffness matrix restricted to the active
/// nodes (row-major order keeps the envelope within one grid row).
fn stiffness_factor(
    domain: &GridDomain,
    disc: &Discretization,
    active: &[usize],
) -> Result<SkylineCholesky, PlanarError> {
    let mut slot = vec![usize::MAX; domain.len()];
    for (a, &k) in active.iter().enumerate() {
        slot[k] = a;
    }
    let edges = disc.quadratic_edge_weights();
    let nx = domain.nx;
    let mut entries = Vec::with_capacity(3 * active.len());
    let mut diag = vec![0.0; active.len()];
    for (k, &(right, up)) in edges.iter().enumerate() {
        for (m, w) in [(k + 1, right), (k + nx, up)] {
            if w == 0.0 {
                continue;
            }
            let (a, b) = (slot[k], slot[m]);
            if a != usize::MAX {
                diag[a] += w;
            }
            if b != usize::MAX {
                diag[b] += w;
            }
            if a != usize::MAX && b != usize::MAX {
                entries.push((a.max(b), a.min(b), -w));
            }
        }
    }
    entries.extend(diag.iter().enumerate().map(|(a, &d)| (a, a, d)));
    SkylineCholesky::factor(active.len(), &entries)
        .map_err(|e| PlanarError::Parameter(format!("stiffness matrix is singular at active node {}", e.row)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::planar::{build_domain, rayleigh_quotient, BoundaryLayout, Metric, ShapeSpec};

    fn domain(shape: ShapeSpec, layout: BoundaryLayout, h: f64) -> Arc<GridDomain> {
        Arc::new(build_domain(&shape, layout, h, Metric::Flat).unwrap())
    }

    #[test]
    fn square_dirichlet() {
        let d = domain(ShapeSpec::Rectangle { width: 1.0, height: 1.0 }, BoundaryLayout::AllDirichlet, 1.0 / 32.0);
        let r = minimize_rayleigh(d, 2.0, &MinimizeOptions::default()).unwrap();
        // 5-point stencil eigenvalue: 2 * (4/h^2) sin^2(pi h/2) * 2 / 2.
        let h: f64 = 1.0 / 32.0;
        let exact = 8.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
        assert!((r.eigenvalue / exact - 1.0).abs() < 1e-7, "{} vs {exact}", r.eigenvalue);
        assert!(r.energy_history.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.field.values.iter().all(|&v| v >= 0.0));
        let q = rayleigh_quotient(&r.field, 2.0).unwrap();
        assert!((q - r.eigenvalue).abs() < 1e-12 * q);
    }

    #[test]
    fn nonquadratic_exponents_converge() {
        let d = domain(
            ShapeSpec::Annulus { outer: 1.0, inner: 0.3, offset: 0.2 },
            BoundaryLayout::InnerNeumannOuterDirichlet,
            1.0 / 16.0,
        );
        for p in [1.5, 3.0] {
            let r = minimize_rayleigh(d.clone(), p, &MinimizeOptions::default()).unwrap();
            assert!(r.energy_history.windows(2).all(|w| w[1] <= w[0]), "p={p}");
            assert!(r.eigenvalue > 0.0);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let d = domain(ShapeSpec::Disk { radius: 1.0 }, BoundaryLayout::AllNeumann, 0.1);
        assert_eq!(minimize_rayleigh(d, 2.0, &MinimizeOptions::default()).err(), Some(PlanarError::NoDirichlet));
        let d = domain(ShapeSpec::Disk { radius: 1.0 }, BoundaryLayout::AllDirichlet, 0.1);
        assert!(minimize_rayleigh(d, 1.1, &MinimizeOptions::default()).is_err());
    }

    #[test]
    fn iteration_cap_reports_history() {
        let d = domain(ShapeSpec::Disk { radius: 1.0 }, BoundaryLayout::AllDirichlet, 0.1);
        let opts = MinimizeOptions { max_iterations: 3, ..Default::default() };
        match minimize_rayleigh(d, 3.0, &opts) {
            Err(PlanarError::ConvergenceFailure { iterations, history }) => {
                assert_eq!(iterations, 3);
                assert!(history.len() >= 2);
            }
            other => panic!("{other:?}"),
        }
    }
}
