use serde::{Deserialize, Serialize};

use super::SolveError;
use crate::geometry::SpaceForm;
use crate::quadrature;

/// Radial function sampled on an increasing grid, together with its flux
/// `W = J |u'|^(p-2) u'` where `J = s_kappa^(n-1)` is the volume element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub value: Vec<f64>,
    pub flux: Vec<f64>,
}

impl RadialProfile {
    pub fn new(r: Vec<f64>, value: Vec<f64>, flux: Vec<f64>) -> Result<Self, SolveError> {
        let profile = RadialProfile { r, value, flux };
        profile.validate()?;
        Ok(profile)
    }

    /// Checks equal lengths (at least 2), finiteness and strictly increasing radii.
    pub fn validate(&self) -> Result<(), SolveError> {
        let n = self.r.len();
        if n < 2 || self.value.len() != n || self.flux.len() != n {
            return Err(SolveError::InvalidProfile(format!(
                "need equal-length sequences with at least 2 samples (r: {}, value: {}, flux: {})",
                n,
                self.value.len(),
                self.flux.len()
            )));
        }
        if self.r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SolveError::InvalidProfile("radii must be strictly increasing".into()));
        }
        if self.value.iter().chain(&self.flux).chain(&self.r).any(|v| !v.is_finite()) {
            return Err(SolveError::InvalidProfile("non-finite sample".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn inner_radius(&self) -> f64 {
        self.r[0]
    }

    pub fn outer_radius(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// `int |u|^p dx` by the trapezoidal rule on the samples.
    pub fn trapezoid_mass(&self, sf: &SpaceForm, p: f64) -> f64 {
        let f = |i: usize| self.value[i].abs().powf(p) * sf.jacobian(self.r[i]);
        let mut sum = 0.0;
        for i in 1..self.r.len() {
            sum += 0.5 * (f(i - 1) + f(i)) * (self.r[i] - self.r[i - 1]);
        }
        sf.sphere_area() * sum
    }

    /// `int |u|^p dx` for the piecewise-linear interpolant of the samples.
    pub fn interpolated_mass(&self, sf: &SpaceForm, p: f64) -> f64 {
        let mut sum = 0.0;
        for i in 1..self.r.len() {
            let (r0, r1) = (self.r[i - 1], self.r[i]);
            let (u0, u1) = (self.value[i - 1], self.value[i]);
            let slope = (u1 - u0) / (r1 - r0);
            let seg = |r: f64| (u0 + slope * (r - r0)).abs().powf(p) * sf.jacobian(r);
            sum += quadrature::gk15(&seg, r0, r1).0;
        }
        sf.sphere_area() * sum
    }

    /// `int |grad u|^p dx` for the piecewise-linear interpolant: each segment
    /// has constant slope, so its energy is `|slope|^p` times the shell volume.
    pub fn interpolated_energy(&self, sf: &SpaceForm, p: f64) -> f64 {
        let mut sum = 0.0;
        let mut inner = sf.ball_volume_unchecked(self.r[0]);
        for i in 1..self.r.len() {
            let outer = sf.ball_volume_unchecked(self.r[i]);
            let slope = (self.value[i] - self.value[i - 1]) / (self.r[i] - self.r[i - 1]);
            sum += slope.abs().powf(p) * (outer - inner);
            inner = outer;
        }
        sum
    }

    /// Linear interpolation of the value at radius `r` (clamped to the ends).
    pub fn value_at(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= self.r[0] {
            return self.value[0];
        }
        if r >= self.r[n - 1] {
            return self.value[n - 1];
        }
        let i = self.r.partition_point(|&x| x <= r);
        let (r0, r1) = (self.r[i - 1], self.r[i]);
        let w = (r - r0) / (r1 - r0);
        self.value[i - 1] * (1.0 - w) + self.value[i] * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn linear_profile(samples: usize) -> RadialProfile {
        let r: Vec<f64> = (0..samples).map(|i| 1.0 + i as f64 / (samples - 1) as f64).collect();
        let value: Vec<f64> = r.iter().map(|x| 2.0 - x).collect();
        let flux = r.iter().map(|x| -x).collect();
        RadialProfile::new(r, value, flux).unwrap()
    }

    #[test]
    fn rejects_malformed() {
        assert!(RadialProfile::new(vec![0.0], vec![1.0], vec![0.0]).is_err());
        assert!(RadialProfile::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn linear_energy_and_mass() {
        // u = 2 - r on the planar annulus 1 < r < 2.
        let sf = SpaceForm::euclidean(2);
        let prof = linear_profile(9);
        let energy = prof.interpolated_energy(&sf, 2.0);
        assert!((energy - 3.0 * PI).abs() < 1e-12);
        // 2 pi int_1^2 (2-r)^2 r dr = 2 pi * 5/12
        let mass = prof.interpolated_mass(&sf, 2.0);
        assert!((mass - 2.0 * PI * 5.0 / 12.0).abs() < 1e-12);
        let trap = linear_profile(2001).trapezoid_mass(&sf, 2.0);
        assert!((trap - mass).abs() < 1e-6);
    }

    #[test]
    fn interpolation() {
        let prof = linear_profile(5);
        assert!((prof.value_at(1.3) - 0.7).abs() < 1e-15);
        assert_eq!(prof.value_at(0.0), 1.0);
        assert_eq!(prof.value_at(5.0), 0.0);
    }
}
