use rayon::prelude::*;

use super::{chunked_sum, CellClass, GridDomain, PlanarError, PlanarField};

const XP: u8 = 1;
const XM: u8 = 2;
const YP: u8 = 4;
const YM: u8 = 8;

/// Precomputed weights and stencil validity for one domain and exponent.
pub(crate) struct Discretization<'a> {
    pub domain: &'a GridDomain,
    pub p: f64,
    /// `w_E / 4` for owner nodes, 0 for exterior nodes.
    quarter_energy: Vec<f64>,
    /// `w_M` on active nodes, 0 elsewhere.
    mass_weight: Vec<f64>,
    /// Which one-sided differences exist (neighbour present and not exterior).
    stencil: Vec<u8>,
}

impl<'a> Discretization<'a> {
    pub fn new(domain: &'a GridDomain, p: f64) -> Self {
        let (nx, ny) = (domain.nx, domain.ny);
        let class = &domain.cell_class;
        let open = |m: usize| class[m] != CellClass::Exterior;
        let len = domain.len();
        let mut quarter_energy = vec![0.0; len];
        let mut mass_weight = vec![0.0; len];
        let mut stencil = vec![0u8; len];
        for k in 0..len {
            if class[k] == CellClass::Exterior {
                continue;
            }
            quarter_energy[k] = 0.25 * domain.energy_weight(k, p);
            if class[k].is_active() {
                mass_weight[k] = domain.mass_weight(k);
            }
            let (i, j) = (k % nx, k / nx);
            let mut bits = 0;
            if i + 1 < nx && open(k + 1) {
                bits |= XP;
            }
            if i > 0 && open(k - 1) {
                bits |= XM;
            }
            if j + 1 < ny && open(k + nx) {
                bits |= YP;
            }
            if j > 0 && open(k - nx) {
                bits |= YM;
            }
            stencil[k] = bits;
        }
        Discretization { domain, p, quarter_energy, mass_weight, stencil }
    }

    /// One-sided differences `(xp, xm, yp, ym)` at owner `k`, zero where the
    /// neighbour is missing or exterior.
    #[inline]
    fn differences(&self, u: &[f64], k: usize) -> [f64; 4] {
        let nx = self.domain.nx;
        let inv_h = 1.0 / self.domain.h;
        let bits = self.stencil[k];
        let u0 = u[k];
        let d = |flag: u8, m: usize| if bits & flag != 0 { (u[m] - u0) * inv_h } else { 0.0 };
        [
            d(XP, k.wrapping_add(1)),
            d(XM, k.wrapping_sub(1)),
            d(YP, k.wrapping_add(nx)),
            d(YM, k.wrapping_sub(nx)),
        ]
    }

    #[inline]
    fn norm_pow(&self, s: f64) -> f64 {
        if self.p == 2.0 {
            s
        } else if s == 0.0 {
            0.0
        } else {
            s.powf(0.5 * self.p)
        }
    }

    /// `d/ds (s^(p/2)) * 2 = p s^((p-2)/2)`, taking 0 at `s = 0`.
    #[inline]
    fn norm_slope(&self, s: f64) -> f64 {
        if self.p == 2.0 {
            2.0
        } else if s == 0.0 {
            0.0
        } else {
            self.p * s.powf(0.5 * self.p - 1.0)
        }
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        chunked_sum(u.len(), |k| {
            let w = self.quarter_energy[k];
            if w == 0.0 {
                return 0.0;
            }
            let [xp, xm, yp, ym] = self.differences(u, k);
            let (xp2, xm2, yp2, ym2) = (xp * xp, xm * xm, yp * yp, ym * ym);
            w * (self.norm_pow(xp2 + yp2)
                + self.norm_pow(xm2 + yp2)
                + self.norm_pow(xm2 + ym2)
                + self.norm_pow(xp2 + ym2))
        })
    }

    pub fn mass(&self, u: &[f64]) -> f64 {
        let p = self.p;
        chunked_sum(u.len(), |k| {
            let w = self.mass_weight[k];
            if w == 0.0 {
                0.0
            } else if p == 2.0 {
                w * u[k] * u[k]
            } else {
                w * u[k].abs().powf(p)
            }
        })
    }

    /// Gradient of the energy with respect to the active values (zero elsewhere).
    pub fn energy_gradient(&self, u: &[f64], out: &mut [f64]) {
        let nx = self.domain.nx;
        let inv_h = 1.0 / self.domain.h;
        // Per owner: summed quadrant coefficients times each one-sided difference.
        let fluxes: Vec<[f64; 4]> = (0..u.len())
            .into_par_iter()
            .with_min_len(1024)
            .map(|k| {
                let w = self.quarter_energy[k];
                if w == 0.0 {
                    return [0.0; 4];
                }
                let [xp, xm, yp, ym] = self.differences(u, k);
                let (xp2, xm2, yp2, ym2) = (xp * xp, xm * xm, yp * yp, ym * ym);
                let c0 = w * self.norm_slope(xp2 + yp2);
                let c1 = w * self.norm_slope(xm2 + yp2);
                let c2 = w * self.norm_slope(xm2 + ym2);
                let c3 = w * self.norm_slope(xp2 + ym2);
                [(c0 + c3) * xp, (c1 + c2) * xm, (c0 + c1) * yp, (c2 + c3) * ym]
            })
            .collect();
        let class = &self.domain.cell_class;
        out.par_iter_mut().with_min_len(1024).enumerate().for_each(|(k, g)| {
            if !class[k].is_active() {
                *g = 0.0;
                return;
            }
            let own = fluxes[k];
            let mut s = -(own[0] + own[1] + own[2] + own[3]);
            // Active nodes never sit on the grid edge (two-node margin).
            s += fluxes[k - 1][0] + fluxes[k + 1][1] + fluxes[k - nx][2] + fluxes[k + nx][3];
            *g = s * inv_h;
        });
    }

    pub fn mass_gradient(&self, u: &[f64], out: &mut [f64]) {
        let p = self.p;
        out.par_iter_mut().with_min_len(1024).enumerate().for_each(|(k, g)| {
            let w = self.mass_weight[k];
            *g = if w == 0.0 || u[k] == 0.0 {
                0.0
            } else {
                p * w * u[k].abs().powf(p - 1.0) * u[k].signum()
            };
        });
    }

    /// Quotient and its gradient; `None` for a vanishing field.
    pub fn quotient_gradient(&self, u: &[f64], out: &mut [f64]) -> Option<f64> {
        let m = self.mass(u);
        if m == 0.0 {
            return None;
        }
        let e = self.energy(u);
        let r = e / m;
        let mut gm = vec![0.0; u.len()];
        self.energy_gradient(u, out);
        self.mass_gradient(u, &mut gm);
        out.par_iter_mut().with_min_len(1024).zip(&gm).for_each(|(g, dm)| *g = (*g - r * dm) / m);
        Some(r)
    }

    /// Edge weights of the `p = 2` energy `sum_e a_e (u_k - u_m)^2`, for the
    /// right (`.0`) and upper (`.1`) edge of each node. Every open edge lies in
    /// four quadrants of weight `h^2/4` (the `p = 2` weight for both metrics),
    /// so `a_e = 1`.
    pub fn quadratic_edge_weights(&self) -> Vec<(f64, f64)> {
        self.stencil
            .iter()
            .map(|&bits| {
                let right = if bits & XP != 0 { 1.0 } else { 0.0 };
                let up = if bits & YP != 0 { 1.0 } else { 0.0 };
                (right, up)
            })
            .collect()
    }
}

fn check_p(p: f64) -> Result<(), PlanarError> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(PlanarError::Parameter(format!("p must exceed 1, got {p}")))
    }
}

/// Discrete `int |grad u|^p`.
pub fn energy(field: &PlanarField, p: f64) -> Result<f64, PlanarError> {
    check_p(p)?;
    Ok(Discretization::new(&field.domain, p).energy(&field.values))
}

/// Discrete `int |u|^p` over the active nodes.
pub fn mass(field: &PlanarField, p: f64) -> Result<f64, PlanarError> {
    check_p(p)?;
    Ok(Discretization::new(&field.domain, p).mass(&field.values))
}

/// Discrete Rayleigh quotient `int |grad u|^p / int |u|^p`.
pub fn rayleigh_quotient(field: &PlanarField, p: f64) -> Result<f64, PlanarError> {
    check_p(p)?;
    let disc = Discretization::new(&field.domain, p);
    let m = disc.mass(&field.values);
    if m == 0.0 {
        return Err(PlanarError::ZeroField);
    }
    Ok(disc.energy(&field.values) / m)
}

/// Quotient and its gradient with respect to the active nodal values.
pub fn rayleigh_gradient(field: &PlanarField, p: f64) -> Result<(f64, Vec<f64>), PlanarError> {
    check_p(p)?;
    let disc = Discretization::new(&field.domain, p);
    let mut g = vec![0.0; field.values.len()];
    let r = disc.quotient_gradient(&field.values, &mut g).ok_or(PlanarError::ZeroField)?;
    Ok((r, g))
}
