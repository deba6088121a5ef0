//! Constant-curvature model spaces.
//!
//! A [`SpaceForm`] is the complete simply connected `n`-manifold of constant
//! sectional curvature `kappa`: Euclidean space for `kappa = 0`, a round sphere
//! of radius `1/sqrt(kappa)` for `kappa > 0` and hyperbolic space for
//! `kappa < 0`. In geodesic polar coordinates about any point the volume
//! element is `s_kappa(r)^(n-1) dr dtheta`, so every radial quantity in this
//! crate is expressed through [`s_kappa`] and [`c_kappa`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature;

/// Below this value of `|kappa| t^2` the trigonometric branches are replaced by
/// their Taylor expansions about `kappa = 0`.
const TAYLOR_THRESHOLD: f64 = 1e-8;

/// Relative slack when comparing a radius against the sphere's antipodal
/// distance `pi / sqrt(kappa)`.
const DIAMETER_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension must be at least 1, got {0}")]
    Dimension(usize),
    #[error("curvature must be finite, got {0}")]
    Curvature(f64),
    #[error("radius {value} must be non-negative")]
    NegativeRadius { value: f64 },
    #[error("radius {value} exceeds the model diameter pi/sqrt(kappa) = {limit}")]
    BeyondDiameter { value: f64, limit: f64 },
    #[error("volume {volume} exceeds the total model volume {total}")]
    VolumeRange { volume: f64, total: f64 },
    #[error("volume must be non-negative and finite, got {0}")]
    InvalidVolume(f64),
    #[error("invalid annulus: {0}")]
    Annulus(String),
}

/// Which boundary component carries the Dirichlet condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusLayout {
    /// Neumann on the inner sphere, Dirichlet on the outer one (eigenvalue `lambda`).
    InnerNeumannOuterDirichlet,
    /// Dirichlet on the inner sphere, Neumann on the outer one (eigenvalue `mu`).
    InnerDirichletOuterNeumann,
}

/// Model space `M^n_kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    pub n: usize,
    pub kappa: f64,
}

/// Concentric geodesic annulus `B(r2) \ B(r1)` with a boundary layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub r1: f64,
    pub r2: f64,
    pub layout: AnnulusLayout,
}

impl AnnulusSpec {
    pub fn new(r1: f64, r2: f64, layout: AnnulusLayout) -> Self {
        AnnulusSpec { r1, r2, layout }
    }

    /// Checks `0 < r1 < r2` and, on spheres, `r2 < pi/sqrt(kappa)`.
    pub fn validate(&self, sf: &SpaceForm) -> Result<(), GeometryError> {
        if !(self.r1.is_finite() && self.r2.is_finite()) || self.r1 <= 0.0 || self.r2 <= self.r1 {
            return Err(GeometryError::Annulus(format!(
                "need 0 < r1 < r2, got r1 = {}, r2 = {}",
                self.r1, self.r2
            )));
        }
        if let Some(limit) = sf.diameter() {
            if self.r2 >= limit {
                return Err(GeometryError::Annulus(format!(
                    "outer radius {} must be below pi/sqrt(kappa) = {}",
                    self.r2, limit
                )));
            }
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.r2 - self.r1
    }
}

fn check_argument(kappa: f64, t: f64) -> Result<(), GeometryError> {
    if !kappa.is_finite() {
        return Err(GeometryError::Curvature(kappa));
    }
    if !(t >= 0.0) {
        return Err(GeometryError::NegativeRadius { value: t });
    }
    if kappa > 0.0 {
        let limit = PI / kappa.sqrt();
        if t > limit * (1.0 + DIAMETER_SLACK) {
            return Err(GeometryError::BeyondDiameter { value: t, limit });
        }
    }
    Ok(())
}

/// Unchecked `s_kappa`; callers guarantee the domain.
#[inline]
pub(crate) fn s_raw(kappa: f64, t: f64) -> f64 {
    let x = kappa * t * t;
    if x.abs() < TAYLOR_THRESHOLD {
        t * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)))
    } else if kappa > 0.0 {
        let k = kappa.sqrt();
        (k * t).sin() / k
    } else {
        let k = (-kappa).sqrt();
        (k * t).sinh() / k
    }
}

#[inline]
pub(crate) fn c_raw(kappa: f64, t: f64) -> f64 {
    let x = kappa * t * t;
    if x.abs() < TAYLOR_THRESHOLD {
        1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0))
    } else if kappa > 0.0 {
        (kappa.sqrt() * t).cos()
    } else {
        ((-kappa).sqrt() * t).cosh()
    }
}

/// `sin(sqrt(k) t)/sqrt(k)`, `t`, or `sinh(sqrt(-k) t)/sqrt(-k)` by the sign of `kappa`.
pub fn s_kappa(kappa: f64, t: f64) -> Result<f64, GeometryError> {
    check_argument(kappa, t)?;
    Ok(s_raw(kappa, t))
}

/// Derivative of [`s_kappa`] in `t`.
pub fn c_kappa(kappa: f64, t: f64) -> Result<f64, GeometryError> {
    check_argument(kappa, t)?;
    Ok(c_raw(kappa, t))
}

/// Area of the unit `(n-1)`-sphere, `2 pi^(n/2) / Gamma(n/2)`.
pub fn unit_sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / statrs::function::gamma::gamma(half)
}

impl SpaceForm {
    pub fn new(n: usize, kappa: f64) -> Result<Self, GeometryError> {
        let sf = SpaceForm { n, kappa };
        sf.validate()?;
        Ok(sf)
    }

    pub fn euclidean(n: usize) -> Self {
        SpaceForm { n, kappa: 0.0 }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.n < 1 {
            return Err(GeometryError::Dimension(self.n));
        }
        if !self.kappa.is_finite() {
            return Err(GeometryError::Curvature(self.kappa));
        }
        Ok(())
    }

    /// Antipodal distance `pi/sqrt(kappa)` on spheres, `None` otherwise.
    pub fn diameter(&self) -> Option<f64> {
        (self.kappa > 0.0).then(|| PI / self.kappa.sqrt())
    }

    pub fn check_radius(&self, r: f64) -> Result<(), GeometryError> {
        check_argument(self.kappa, r)
    }

    pub fn s(&self, t: f64) -> Result<f64, GeometryError> {
        s_kappa(self.kappa, t)
    }

    pub fn c(&self, t: f64) -> Result<f64, GeometryError> {
        c_kappa(self.kappa, t)
    }

    /// `omega_{n-1}`, the area of the unit sphere in the tangent space.
    pub fn sphere_area(&self) -> f64 {
        unit_sphere_area(self.n)
    }

    /// Density `s_kappa(r)^(n-1)` of the volume form against `dr dtheta`.
    pub fn volume_element(&self, r: f64) -> Result<f64, GeometryError> {
        check_argument(self.kappa, r)?;
        Ok(self.jacobian(r))
    }

    /// Unchecked volume element, used on hot paths after validation.
    #[inline]
    pub(crate) fn jacobian(&self, r: f64) -> f64 {
        match self.n {
            1 => 1.0,
            2 => s_raw(self.kappa, r),
            3 => {
                let s = s_raw(self.kappa, r);
                s * s
            }
            n => s_raw(self.kappa, r).powi(n as i32 - 1),
        }
    }

    /// Area of the geodesic sphere of radius `r`.
    pub fn sphere_area_at(&self, r: f64) -> Result<f64, GeometryError> {
        Ok(self.sphere_area() * self.volume_element(r)?)
    }

    /// Volume of the geodesic ball of radius `r`.
    pub fn ball_volume(&self, r: f64) -> Result<f64, GeometryError> {
        check_argument(self.kappa, r)?;
        Ok(self.ball_volume_unchecked(r))
    }

    pub(crate) fn ball_volume_unchecked(&self, r: f64) -> f64 {
        let omega = self.sphere_area();
        if self.n == 1 {
            return omega * r;
        }
        if self.kappa == 0.0 {
            return omega * r.powi(self.n as i32) / self.n as f64;
        }
        let integral = quadrature::integrate(|t| self.jacobian(t), 0.0, r, 1e-12, 1e-14);
        omega * integral.value
    }

    /// Volume of the whole model for spheres.
    pub fn total_volume(&self) -> Option<f64> {
        self.diameter().map(|d| self.ball_volume_unchecked(d))
    }

    /// Radius of the geodesic ball whose volume is `vol`.
    pub fn schwarz_radius(&self, vol: f64) -> Result<f64, GeometryError> {
        if !(vol >= 0.0) || !vol.is_finite() {
            return Err(GeometryError::InvalidVolume(vol));
        }
        if vol == 0.0 {
            return Ok(0.0);
        }
        let mut lo = 0.0_f64;
        let mut hi = match self.diameter() {
            Some(d) => {
                let total = self.ball_volume_unchecked(d);
                if vol > total * (1.0 + 1e-12) {
                    return Err(GeometryError::VolumeRange { volume: vol, total });
                }
                if vol >= total {
                    return Ok(d);
                }
                d
            }
            None => {
                let mut guess = 1.0;
                while self.ball_volume_unchecked(guess) < vol {
                    lo = guess;
                    guess *= 2.0;
                }
                guess
            }
        };
        // Safeguarded Newton: d/dr ball_volume = omega * J(r).
        let omega = self.sphere_area();
        let mut r = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.ball_volume_unchecked(r) - vol;
            if f == 0.0 {
                return Ok(r);
            }
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let slope = omega * self.jacobian(r);
            let newton = r - f / slope;
            let next = if slope > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - r).abs() <= 1e-15 * r.max(f64::MIN_POSITIVE) || hi - lo <= 1e-15 * hi {
                return Ok(next);
            }
            r = next;
        }
        Ok(r)
    }
}
