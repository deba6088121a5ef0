use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{chunked_sum, CellClass, Component, GridDomain, Metric, PlanarError};
use crate::geometry::AnnulusLayout;

/// Outer region with at most one hole. Disks and ellipses are centered at the
/// origin, rectangles span `[0, width] x [0, height]`, and holes are centered
/// at `(offset, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    Disk { radius: f64 },
    Rectangle { width: f64, height: f64 },
    Annulus { outer: f64, inner: f64, offset: f64 },
    DiskMinusSquare { radius: f64, half_side: f64, offset: f64 },
    EllipseMinusDisk { semi_x: f64, semi_y: f64, inner: f64, offset: f64 },
}

/// Boundary conditions per component. Shapes without a hole only use the
/// outer entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryLayout {
    InnerNeumannOuterDirichlet,
    InnerDirichletOuterNeumann,
    AllDirichlet,
    AllNeumann,
}

impl BoundaryLayout {
    pub fn outer_dirichlet(self) -> bool {
        matches!(self, BoundaryLayout::InnerNeumannOuterDirichlet | BoundaryLayout::AllDirichlet)
    }

    pub fn inner_dirichlet(self) -> bool {
        matches!(self, BoundaryLayout::InnerDirichletOuterNeumann | BoundaryLayout::AllDirichlet)
    }

    /// The matching radial layout, if there is one.
    pub fn annulus_layout(self) -> Option<AnnulusLayout> {
        match self {
            BoundaryLayout::InnerNeumannOuterDirichlet => Some(AnnulusLayout::InnerNeumannOuterDirichlet),
            BoundaryLayout::InnerDirichletOuterNeumann => Some(AnnulusLayout::InnerDirichletOuterNeumann),
            _ => None,
        }
    }
}

impl From<AnnulusLayout> for BoundaryLayout {
    fn from(layout: AnnulusLayout) -> Self {
        match layout {
            AnnulusLayout::InnerNeumannOuterDirichlet => BoundaryLayout::InnerNeumannOuterDirichlet,
            AnnulusLayout::InnerDirichletOuterNeumann => BoundaryLayout::InnerDirichletOuterNeumann,
        }
    }
}

fn circle_distance(x: f64, y: f64, cx: f64, radius: f64) -> f64 {
    (x - cx).hypot(y) - radius
}

/// Signed distance to the axis-aligned box with center `(cx, cy)`.
fn box_distance(x: f64, y: f64, cx: f64, cy: f64, hx: f64, hy: f64) -> f64 {
    let qx = (x - cx).abs() - hx;
    let qy = (y - cy).abs() - hy;
    let outside = qx.max(0.0).hypot(qy.max(0.0));
    outside + qx.max(qy).min(0.0)
}

/// First-order distance `F / |grad F|` for the implicit ellipse `F = 0`;
/// exact to second order near the curve, which is all classification needs.
fn ellipse_distance(x: f64, y: f64, a: f64, b: f64) -> f64 {
    let f = (x / a).powi(2) + (y / b).powi(2) - 1.0;
    let g = (2.0 * x / (a * a)).hypot(2.0 * y / (b * b));
    if g < 1e-300 {
        return -a.min(b);
    }
    f / g
}

impl ShapeSpec {
    pub fn has_hole(&self) -> bool {
        !matches!(self, ShapeSpec::Disk { .. } | ShapeSpec::Rectangle { .. })
    }

    /// Signed distance to the outer boundary, negative inside.
    pub fn outer_distance(&self, x: f64, y: f64) -> f64 {
        match *self {
            ShapeSpec::Disk { radius } => circle_distance(x, y, 0.0, radius),
            ShapeSpec::Rectangle { width, height } => {
                box_distance(x, y, 0.5 * width, 0.5 * height, 0.5 * width, 0.5 * height)
            }
            ShapeSpec::Annulus { outer, .. } => circle_distance(x, y, 0.0, outer),
            ShapeSpec::DiskMinusSquare { radius, .. } => circle_distance(x, y, 0.0, radius),
            ShapeSpec::EllipseMinusDisk { semi_x, semi_y, .. } => ellipse_distance(x, y, semi_x, semi_y),
        }
    }

    /// Signed distance to the hole boundary, negative inside the hole;
    /// `+inf` without a hole.
    pub fn hole_distance(&self, x: f64, y: f64) -> f64 {
        match *self {
            ShapeSpec::Disk { .. } | ShapeSpec::Rectangle { .. } => f64::INFINITY,
            ShapeSpec::Annulus { inner, offset, .. } => circle_distance(x, y, offset, inner),
            ShapeSpec::DiskMinusSquare { half_side, offset, .. } => {
                box_distance(x, y, offset, 0.0, half_side, half_side)
            }
            ShapeSpec::EllipseMinusDisk { inner, offset, .. } => circle_distance(x, y, offset, inner),
        }
    }

    fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            ShapeSpec::Disk { radius } => (-radius, -radius, radius, radius),
            ShapeSpec::Rectangle { width, height } => (0.0, 0.0, width, height),
            ShapeSpec::Annulus { outer, .. } => (-outer, -outer, outer, outer),
            ShapeSpec::DiskMinusSquare { radius, .. } => (-radius, -radius, radius, radius),
            ShapeSpec::EllipseMinusDisk { semi_x, semi_y, .. } => (-semi_x, -semi_y, semi_x, semi_y),
        }
    }

    /// Smallest width of the hole.
    fn hole_width(&self) -> Option<f64> {
        match *self {
            ShapeSpec::Disk { .. } | ShapeSpec::Rectangle { .. } => None,
            ShapeSpec::Annulus { inner, .. } | ShapeSpec::EllipseMinusDisk { inner, .. } => Some(2.0 * inner),
            ShapeSpec::DiskMinusSquare { half_side, .. } => Some(2.0 * half_side),
        }
    }

    fn hole_boundary(&self, samples: usize) -> Vec<(f64, f64)> {
        let t = (0..samples).map(|k| 2.0 * PI * k as f64 / samples as f64);
        match *self {
            ShapeSpec::Disk { .. } | ShapeSpec::Rectangle { .. } => Vec::new(),
            ShapeSpec::Annulus { inner, offset, .. } | ShapeSpec::EllipseMinusDisk { inner, offset, .. } => {
                t.map(|t| (offset + inner * t.cos(), inner * t.sin())).collect()
            }
            ShapeSpec::DiskMinusSquare { half_side, offset, .. } => t
                .map(|t| {
                    let (c, s) = (t.cos(), t.sin());
                    let scale = half_side / c.abs().max(s.abs());
                    (offset + scale * c, scale * s)
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), PlanarError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(PlanarError::Parameter(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            ShapeSpec::Disk { radius } => positive("radius", radius),
            ShapeSpec::Rectangle { width, height } => {
                positive("width", width)?;
                positive("height", height)
            }
            ShapeSpec::Annulus { outer, inner, offset } => {
                positive("outer radius", outer)?;
                positive("inner radius", inner)?;
                if !offset.is_finite() || inner + offset.abs() >= outer {
                    return Err(PlanarError::Geometry(format!(
                        "hole of radius {inner} at offset {offset} is not inside the disk of radius {outer}"
                    )));
                }
                Ok(())
            }
            ShapeSpec::DiskMinusSquare { radius, half_side, offset } => {
                positive("radius", radius)?;
                positive("half side", half_side)?;
                if !offset.is_finite() || offset.abs() + half_side * 2f64.sqrt() >= radius {
                    return Err(PlanarError::Geometry(format!(
                        "square of half side {half_side} at offset {offset} is not inside the disk of radius {radius}"
                    )));
                }
                Ok(())
            }
            ShapeSpec::EllipseMinusDisk { semi_x, semi_y, inner, offset } => {
                positive("semi axis", semi_x)?;
                positive("semi axis", semi_y)?;
                positive("inner radius", inner)?;
                if !offset.is_finite() || offset.abs() >= semi_x {
                    return Err(PlanarError::Geometry(format!("hole center {offset} is outside the ellipse")));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ShapeSpec::Disk { radius } => write!(f, "disk:{radius}"),
            ShapeSpec::Rectangle { width, height } => write!(f, "rectangle:{width},{height}"),
            ShapeSpec::Annulus { outer, inner, offset } => write!(f, "annulus:{outer},{inner},{offset}"),
            ShapeSpec::DiskMinusSquare { radius, half_side, offset } => {
                write!(f, "disk_minus_square:{radius},{half_side},{offset}")
            }
            ShapeSpec::EllipseMinusDisk { semi_x, semi_y, inner, offset } => {
                write!(f, "ellipse_minus_disk:{semi_x},{semi_y},{inner},{offset}")
            }
        }
    }
}

/// Parses `kind:a,b,...`, e.g. `annulus:1,0.3` or `disk_minus_square:1,0.2,0.3`.
/// Hole offsets are optional and default to 0.
impl FromStr for ShapeSpec {
    type Err = PlanarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = args
            .split(',')
            .filter(|a| !a.trim().is_empty())
            .map(|a| a.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| PlanarError::Parameter(format!("bad shape argument in {s:?}: {e}")))?;
        let arity = |lo: usize, hi: usize| {
            if nums.len() < lo || nums.len() > hi {
                Err(PlanarError::Parameter(format!("shape {kind} takes {lo} to {hi} numbers, got {}", nums.len())))
            } else {
                Ok(())
            }
        };
        let opt = |i: usize| nums.get(i).copied().unwrap_or(0.0);
        let shape = match kind.replace('-', "_").as_str() {
            "disk" => {
                arity(1, 1)?;
                ShapeSpec::Disk { radius: nums[0] }
            }
            "rectangle" | "square" => {
                arity(1, 2)?;
                ShapeSpec::Rectangle { width: nums[0], height: nums.get(1).copied().unwrap_or(nums[0]) }
            }
            "annulus" => {
                arity(2, 3)?;
                ShapeSpec::Annulus { outer: nums[0], inner: nums[1], offset: opt(2) }
            }
            "disk_minus_square" => {
                arity(2, 3)?;
                ShapeSpec::DiskMinusSquare { radius: nums[0], half_side: nums[1], offset: opt(2) }
            }
            "ellipse_minus_disk" => {
                arity(3, 4)?;
                ShapeSpec::EllipseMinusDisk { semi_x: nums[0], semi_y: nums[1], inner: nums[2], offset: opt(3) }
            }
            other => return Err(PlanarError::Parameter(format!("unknown shape kind {other:?}"))),
        };
        shape.validate()?;
        Ok(shape)
    }
}

/// Rasterizes `shape` on the grid `h Z^2`.
///
/// A node is active when it lies inside the domain; on a Dirichlet side it
/// must be more than `h/2` inside, so that the pinned zeros sit on average at
/// the true boundary. Non-active neighbours of active nodes on a Dirichlet
/// side become [`CellClass::DirichletBoundary`], the rest are exterior.
pub fn build_domain(
    shape: &ShapeSpec,
    layout: BoundaryLayout,
    h: f64,
    metric: Metric,
) -> Result<GridDomain, PlanarError> {
    shape.validate()?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(PlanarError::Parameter(format!("grid spacing must be positive, got {h}")));
    }
    if let Some(width) = shape.hole_width() {
        if width < 4.0 * h {
            return Err(PlanarError::Resolution(format!(
                "hole of width {width} spans fewer than 4 cells at h = {h}"
            )));
        }
        let worst = shape
            .hole_boundary(4096)
            .iter()
            .map(|&(x, y)| shape.outer_distance(x, y))
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > -2.0 * h {
            return Err(PlanarError::Geometry(format!(
                "hole comes within {} of the outer boundary (need at least 2 cells, {})",
                -worst,
                2.0 * h
            )));
        }
    }
    let (xmin, ymin, xmax, ymax) = shape.bounding_box();
    let i0 = (xmin / h).floor() as i64 - 2;
    let j0 = (ymin / h).floor() as i64 - 2;
    let nx = ((xmax / h).ceil() as i64 + 2 - i0 + 1) as usize;
    let ny = ((ymax / h).ceil() as i64 + 2 - j0 + 1) as usize;
    let (x0, y0) = (i0 as f64 * h, j0 as f64 * h);
    let len = nx * ny;

    let outer_dir = layout.outer_dirichlet();
    let inner_dir = layout.inner_dirichlet();
    // Tiny tolerance so nodes exactly on a Neumann boundary are excluded consistently.
    let neumann_tol = 1e-9 * h;
    // Which side a node fails, if any.
    let side: Vec<Component> = (0..len)
        .map(|k| {
            let (x, y) = (x0 + (k % nx) as f64 * h, y0 + (k / nx) as f64 * h);
            let d_out = shape.outer_distance(x, y);
            let inside_out = if outer_dir { d_out < -0.5 * h } else { d_out < -neumann_tol };
            if !inside_out {
                return Component::Outer;
            }
            let d_in = shape.hole_distance(x, y);
            let inside_in = if inner_dir { d_in > 0.5 * h } else { d_in > neumann_tol };
            if inside_in {
                Component::None
            } else {
                Component::Inner
            }
        })
        .collect();

    let neighbours = |k: usize| {
        let (i, j) = (k % nx, k / nx);
        let mut out = [usize::MAX; 4];
        if i > 0 {
            out[0] = k - 1;
        }
        if i + 1 < nx {
            out[1] = k + 1;
        }
        if j > 0 {
            out[2] = k - nx;
        }
        if j + 1 < ny {
            out[3] = k + nx;
        }
        out
    };

    let dirichlet_side = |c: Component| match c {
        Component::Outer => outer_dir,
        Component::Inner => inner_dir,
        Component::None => false,
    };
    let mut cell_class = vec![CellClass::Exterior; len];
    let mut hole_class = vec![Component::None; len];
    for k in 0..len {
        if side[k] == Component::None {
            cell_class[k] = CellClass::Interior;
            continue;
        }
        let touches_active = neighbours(k).iter().any(|&m| m != usize::MAX && side[m] == Component::None);
        if touches_active && dirichlet_side(side[k]) {
            cell_class[k] = CellClass::DirichletBoundary;
            hole_class[k] = side[k];
        }
    }
    for k in 0..len {
        if cell_class[k] != CellClass::Interior {
            continue;
        }
        for m in neighbours(k) {
            if m == usize::MAX || cell_class[m] == CellClass::Exterior {
                cell_class[k] = CellClass::NeumannBoundary;
                hole_class[k] = if m == usize::MAX { Component::Outer } else { side[m] };
                break;
            }
        }
    }

    let components = count_components(nx, ny, &cell_class);
    if components != 1 {
        return Err(PlanarError::Disconnected(components));
    }
    Ok(GridDomain { nx, ny, h, x0, y0, shape: *shape, layout, metric, cell_class, hole_class })
}

fn count_components(nx: usize, ny: usize, class: &[CellClass]) -> usize {
    let mut seen = vec![false; class.len()];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..class.len() {
        if seen[start] || !class[start].is_active() {
            continue;
        }
        components += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            let (i, j) = (k % nx, k / nx);
            let mut visit = |m: usize| {
                if !seen[m] && class[m].is_active() {
                    seen[m] = true;
                    queue.push_back(m);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < nx {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - nx);
            }
            if j + 1 < ny {
                visit(k + nx);
            }
        }
    }
    components
}

/// Metric area of `{sdf < 0}` over the grid's bounding box. Cells well inside
/// use a 2x2 Gauss rule for the density; cells near the curve are
/// sub-sampled 16x16.
pub(crate) fn region_measure<F: Fn(f64, f64) -> f64 + Sync>(domain: &GridDomain, sdf: F) -> f64 {
    const SUB: usize = 16;
    let h = domain.h;
    let cells_x = domain.nx - 1;
    let cells = cells_x * (domain.ny - 1);
    let density = |x: f64, y: f64| {
        let rho = domain.metric.conformal_factor(x, y);
        rho * rho
    };
    let g = 0.5 / 3f64.sqrt();
    chunked_sum(cells, |c| {
        let (i, j) = (c % cells_x, c / cells_x);
        let (xa, ya) = (domain.x0 + i as f64 * h, domain.y0 + j as f64 * h);
        let (xc, yc) = (xa + 0.5 * h, ya + 0.5 * h);
        let phi = sdf(xc, yc);
        if phi > h {
            0.0
        } else if phi < -h {
            let mut s = 0.0;
            for (dx, dy) in [(-g, -g), (g, -g), (-g, g), (g, g)] {
                s += density(xc + dx * h, yc + dy * h);
            }
            0.25 * s * h * h
        } else {
            let step = h / SUB as f64;
            let mut s = 0.0;
            for a in 0..SUB {
                for b in 0..SUB {
                    let (x, y) = (xa + (a as f64 + 0.5) * step, ya + (b as f64 + 0.5) * step);
                    if sdf(x, y) < 0.0 {
                        s += density(x, y);
                    }
                }
            }
            s * step * step
        }
    })
}
