use super::{chunked_sum, CellClass, PlanarError, PlanarField};
use crate::geometry::SpaceForm;
use crate::radial::RadialProfile;

/// Number of levels in the rearrangement ladder.
pub const LADDER_LEVELS: usize = 256;

/// Schwarz rearrangement of a nonnegative field about a hole of volume
/// `hole_volume`, with the default ladder of [`LADDER_LEVELS`] levels.
pub fn schwarz_rearrange(field: &PlanarField, hole_volume: f64, sf: &SpaceForm) -> Result<RadialProfile, PlanarError> {
    schwarz_rearrange_with(field, hole_volume, sf, LADDER_LEVELS)
}

/// Rearrangement on the level ladder `t_k = k a0 / levels`, `a0 = max u`.
///
/// Level `t_k` (k >= 1) is reached at the radius of the ball whose volume is
/// [`superlevel_volume`] at `t_k` plus the hole volume. The zero level sits
/// at the radius of the continuous domain measure plus the hole, since the
/// discrete zero set of `u` lies on the boundary itself. The profile is
/// linear between ladder radii; coincident radii keep the highest level.
///
/// The returned flux column holds `J h'` with one-sided slopes (the
/// rearrangement does not know an exponent).
pub fn schwarz_rearrange_with(
    field: &PlanarField,
    hole_volume: f64,
    sf: &SpaceForm,
    levels: usize,
) -> Result<RadialProfile, PlanarError> {
    let domain = &field.domain;
    if sf.n != 2 {
        return Err(PlanarError::Parameter(format!("planar fields rearrange in dimension 2, got {}", sf.n)));
    }
    if sf.kappa != domain.metric.curvature() {
        return Err(PlanarError::Parameter(format!(
            "space form curvature {} does not match the grid metric {:?}",
            sf.kappa, domain.metric
        )));
    }
    if !(hole_volume >= 0.0) || !hole_volume.is_finite() {
        return Err(PlanarError::Parameter(format!("hole volume must be nonnegative, got {hole_volume}")));
    }
    if levels < 2 {
        return Err(PlanarError::Parameter("need at least 2 levels".into()));
    }
    if let Some((index, &value)) = field.values.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(PlanarError::NegativeField { index, value });
    }
    let a0 = field.max();
    if a0 == 0.0 {
        return Err(PlanarError::ZeroField);
    }

    let triangles = Triangles::new(field);
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(levels + 1);
    for k in (1..=levels).rev() {
        let t = a0 * k as f64 / levels as f64;
        points.push((sf.schwarz_radius(triangles.volume_above(t) + hole_volume)?, t));
    }
    points.push((sf.schwarz_radius(domain.measure() + hole_volume)?, 0.0));

    // Radii are nondecreasing along the descending ladder; merge ties.
    let mut r: Vec<f64> = Vec::with_capacity(points.len());
    let mut value: Vec<f64> = Vec::with_capacity(points.len());
    for (radius, t) in points {
        match r.last() {
            Some(&last) if radius <= last * (1.0 + 1e-14) => {}
            _ => {
                r.push(radius);
                value.push(t);
            }
        }
    }
    if r.len() < 2 {
        return Err(PlanarError::Parameter("rearranged profile collapsed to a point".into()));
    }
    let n = r.len();
    let flux = (0..n)
        .map(|i| {
            let (a, b) = if i + 1 < n { (i, i + 1) } else { (i - 1, i) };
            let slope = (value[b] - value[a]) / (r[b] - r[a]);
            slope * sf.volume_element(r[i]).unwrap_or(0.0)
        })
        .collect();
    Ok(RadialProfile::new(r, value, flux)?)
}

/// Metric measure of `{u > t}` for the piecewise-linear interpolant of the
/// field on the quadrant triangles of the active nodes (the average of the
/// two triangulations of the grid, as in the energy). A vertex that is
/// exterior takes the owner's value, mirroring the zero difference across
/// Neumann boundaries. The measure is continuous in `t`, so lattice effects
/// do not make the rearranged radii jitter; at `t -> 0+` it tends to the
/// summed active node weights.
pub fn superlevel_volume(field: &PlanarField, t: f64) -> f64 {
    Triangles::new(field).volume_above(t)
}

/// Quadrant triangles `(weight, vertex values)`, weight `w_M / 4` of the owner.
struct Triangles(Vec<(f64, [f64; 3])>);

impl Triangles {
    fn new(field: &PlanarField) -> Self {
        let domain = &field.domain;
        let nx = domain.nx;
        let u = &field.values;
        let value = |owner: usize, m: usize| {
            if domain.cell_class[m] == CellClass::Exterior {
                u[owner]
            } else {
                u[m]
            }
        };
        let mut tri = Vec::with_capacity(4 * domain.active_count());
        for k in (0..domain.len()).filter(|&k| domain.cell_class[k].is_active()) {
            // Active nodes sit at least two nodes inside the grid margin.
            let w = 0.25 * domain.mass_weight(k);
            let (xp, xm, yp, ym) = (value(k, k + 1), value(k, k - 1), value(k, k + nx), value(k, k - nx));
            for (a, b) in [(xp, yp), (xm, yp), (xm, ym), (xp, ym)] {
                tri.push((w, [u[k], a, b]));
            }
        }
        Triangles(tri)
    }

    fn volume_above(&self, t: f64) -> f64 {
        chunked_sum(self.0.len(), |i| {
            let (w, v) = self.0[i];
            w * fraction_above(v, t)
        })
    }
}

/// Area fraction of a triangle where the linear interpolant of the vertex
/// values exceeds `t`.
fn fraction_above(mut v: [f64; 3], t: f64) -> f64 {
    v.sort_by(f64::total_cmp);
    let [lo, mid, hi] = v;
    if t >= hi {
        0.0
    } else if t <= lo {
        1.0
    } else if t >= mid {
        (hi - t) * (hi - t) / ((hi - lo) * (hi - mid))
    } else {
        1.0 - (t - lo) * (t - lo) / ((mid - lo) * (hi - lo))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use crate::planar::{build_domain, BoundaryLayout, GridDomain, Metric, ShapeSpec};

    fn annulus(offset: f64, h: f64) -> Arc<GridDomain> {
        let shape = ShapeSpec::Annulus { outer: 1.0, inner: 0.3, offset };
        Arc::new(build_domain(&shape, BoundaryLayout::InnerNeumannOuterDirichlet, h, Metric::Flat).unwrap())
    }

    #[test]
    fn radial_field_is_fixed() {
        let d = annulus(0.0, 1.0 / 128.0);
        let profile = |r: f64| (1.0 - r * r).max(0.0);
        let field = PlanarField::from_fn(d.clone(), |x, y| profile(x.hypot(y))).unwrap();
        let sf = SpaceForm::euclidean(2);
        let h = schwarz_rearrange(&field, d.hole_measure(), &sf).unwrap();
        let a0 = field.max();
        let worst = h
            .r
            .iter()
            .zip(&h.value)
            .map(|(&r, &v)| (v - profile(r)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= a0 / 256.0 + 4.0 * d.h, "{worst}");
    }

    #[test]
    fn constant_field_gives_step() {
        let shape = ShapeSpec::Disk { radius: 1.0 };
        // All-Neumann, so no boundary node pulls the interpolant down to 0.
        let d = Arc::new(build_domain(&shape, BoundaryLayout::AllNeumann, 1.0 / 64.0, Metric::Flat).unwrap());
        let field = PlanarField::from_fn(d.clone(), |_, _| 2.0).unwrap();
        let h = schwarz_rearrange(&field, 0.0, &SpaceForm::euclidean(2)).unwrap();
        assert_eq!(h.r[0], 0.0);
        assert_eq!(h.value[0], 2.0);
        // Plateau at (just under) 2 out to the radius of the active volume, then 0 at the ball of volume V.
        let plateau = (d.active_count() as f64 * d.h * d.h / PI).sqrt();
        assert!((h.r[1] - plateau).abs() < 1e-12);
        assert!((h.value[1] - 2.0 * 255.0 / 256.0).abs() < 1e-12);
        assert!((h.outer_radius() - 1.0).abs() < 1e-4);
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn triangle_fractions() {
        let v = [0.0, 1.0, 2.0];
        assert_eq!(fraction_above(v, 2.0), 0.0);
        assert_eq!(fraction_above(v, 0.0), 1.0);
        assert!((fraction_above(v, 1.0) - 0.5).abs() < 1e-15);
        assert!((fraction_above(v, 1.5) - 0.125).abs() < 1e-15);
        assert!((fraction_above(v, 0.5) - 0.875).abs() < 1e-15);
        assert!((fraction_above([1.0, 1.0, 3.0], 2.0) - 0.25).abs() < 1e-15);
        assert_eq!(fraction_above([1.0, 1.0, 1.0], 1.0), 0.0);
    }

    #[test]
    fn volumes_match_on_ladder() {
        let d = annulus(0.4, 1.0 / 64.0);
        let field = PlanarField::from_fn(d.clone(), |x, y| (1.0 - x.hypot(y)).max(0.0) * (2.0 + x)).unwrap();
        let sf = SpaceForm::euclidean(2);
        let hole = d.hole_measure();
        let h = schwarz_rearrange(&field, hole, &sf).unwrap();
        for (&r, &t) in h.r.iter().zip(&h.value).filter(|(_, t)| **t > 0.0) {
            let star = sf.ball_volume(r).unwrap();
            assert!((star - superlevel_volume(&field, t) - hole).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn rejects_negative_and_mismatched_inputs() {
        let d = annulus(0.0, 1.0 / 32.0);
        let field = PlanarField::from_fn(d.clone(), |x, _| x).unwrap();
        assert!(matches!(
            schwarz_rearrange(&field, 0.1, &SpaceForm::euclidean(2)),
            Err(PlanarError::NegativeField { .. })
        ));
        let field = PlanarField::from_fn(d, |_, _| 1.0).unwrap();
        assert!(schwarz_rearrange(&field, 0.1, &SpaceForm::euclidean(3)).is_err());
        assert!(schwarz_rearrange(&field, 0.1, &SpaceForm::new(2, 1.0).unwrap()).is_err());
        assert!(schwarz_rearrange(&field, -1.0, &SpaceForm::euclidean(2)).is_err());
    }
}
