//! Planar domains and the geometric quantities the bounds consume.
//!
//! A [`DomainSpec`] is a shape described about its own center, translated by
//! `offset`. All radii are measured from the origin, which must lie strictly
//! inside the domain.
//!
//! Curvature follows the clockwise arc-length convention: the curvature of a
//! convex boundary is non-positive and the total curvature is `-2 pi`.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::optimize::{golden_max, golden_min, nelder_mead, NelderMeadOptions};
use crate::{Error, Result};

/// Highest Fourier mode accepted for polar shapes.
pub const MAX_FOURIER_MODES: usize = 32;

/// Default sampling density for sup-type quantities.
pub const DEFAULT_RESOLUTION: usize = 4096;

pub const MIN_RESOLUTION: usize = 64;

// Samples used to check that a polar radius stays positive.
const POSITIVITY_SAMPLES: usize = 4096;

// Cells of the ray scan used for translated polar shapes.
const RAY_SCAN_CELLS: usize = 64;

type Vec2 = [f64; 2];

fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Disk {
        radius: f64,
    },
    /// Semi-axes `a >= b` along the x and y axes.
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `rho(t) = a0 + sum_k cos[k-1] cos(k t) + sin[k-1] sin(k t)`.
    PolarFourier {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

/// Value and first two derivatives of a closed curve at one parameter.
#[derive(Debug, Clone, Copy)]
struct Jet {
    p: Vec2,
    d1: Vec2,
    d2: Vec2,
}

impl Shape {
    fn polar(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Shape::Disk { radius } => (*radius, 0.0, 0.0),
            Shape::PolarFourier { a0, cos, sin } => {
                let (mut r, mut r1, mut r2) = (*a0, 0.0, 0.0);
                for (i, c) in cos.iter().enumerate() {
                    let k = (i + 1) as f64;
                    let (s, co) = (k * t).sin_cos();
                    r += c * co;
                    r1 -= c * k * s;
                    r2 -= c * k * k * co;
                }
                for (i, b) in sin.iter().enumerate() {
                    let k = (i + 1) as f64;
                    let (s, co) = (k * t).sin_cos();
                    r += b * s;
                    r1 += b * k * co;
                    r2 -= b * k * k * s;
                }
                (r, r1, r2)
            }
            Shape::Ellipse { .. } => unreachable!("ellipses use the affine parametrization"),
        }
    }

    fn jet(&self, t: f64) -> Jet {
        let (s, c) = t.sin_cos();
        match self {
            Shape::Ellipse { a, b } => Jet {
                p: [a * c, b * s],
                d1: [-a * s, b * c],
                d2: [-a * c, -b * s],
            },
            _ => {
                let (r, r1, r2) = self.polar(t);
                Jet {
                    p: [r * c, r * s],
                    d1: [r1 * c - r * s, r1 * s + r * c],
                    d2: [(r2 - r) * c - 2.0 * r1 * s, (r2 - r) * s + 2.0 * r1 * c],
                }
            }
        }
    }

    /// Parameter of a boundary point given relative to the shape center.
    fn param_of(&self, q: Vec2) -> f64 {
        match self {
            Shape::Ellipse { a, b } => (q[1] / b).atan2(q[0] / a),
            _ => q[1].atan2(q[0]),
        }
    }

    /// Strict interior test relative to the shape center.
    fn contains(&self, q: Vec2) -> bool {
        match self {
            Shape::Disk { radius } => norm(q) < *radius,
            Shape::Ellipse { a, b } => (q[0] / a).powi(2) + (q[1] / b).powi(2) < 1.0,
            Shape::PolarFourier { .. } => {
                let r = norm(q);
                r == 0.0 || r < self.polar(q[1].atan2(q[0])).0
            }
        }
    }

    fn max_extent(&self) -> f64 {
        match self {
            Shape::Disk { radius } => *radius,
            Shape::Ellipse { a, .. } => *a,
            Shape::PolarFourier { a0, cos, sin } => {
                a0 + cos.iter().map(|v| v.abs()).sum::<f64>()
                    + sin.iter().map(|v| v.abs()).sum::<f64>()
            }
        }
    }

    fn scaled(&self, alpha: f64) -> Shape {
        match self {
            Shape::Disk { radius } => Shape::Disk {
                radius: alpha * radius,
            },
            Shape::Ellipse { a, b } => Shape::Ellipse {
                a: alpha * a,
                b: alpha * b,
            },
            Shape::PolarFourier { a0, cos, sin } => Shape::PolarFourier {
                a0: alpha * a0,
                cos: cos.iter().map(|v| alpha * v).collect(),
                sin: sin.iter().map(|v| alpha * v).collect(),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidDomain(format!("{name} must be finite")))
            }
        };
        match self {
            Shape::Disk { radius } => {
                finite(*radius, "radius")?;
                if *radius <= 0.0 {
                    return Err(Error::InvalidDomain("disk radius must be positive".into()));
                }
            }
            Shape::Ellipse { a, b } => {
                finite(*a, "a")?;
                finite(*b, "b")?;
                if !(*b > 0.0 && a >= b) {
                    return Err(Error::InvalidDomain(format!(
                        "ellipse needs a >= b > 0, got a = {a}, b = {b}"
                    )));
                }
            }
            Shape::PolarFourier { a0, cos, sin } => {
                finite(*a0, "a0")?;
                for v in cos.iter().chain(sin) {
                    finite(*v, "Fourier coefficient")?;
                }
                if cos.len() > MAX_FOURIER_MODES || sin.len() > MAX_FOURIER_MODES {
                    return Err(Error::InvalidDomain(format!(
                        "at most {MAX_FOURIER_MODES} Fourier modes are supported"
                    )));
                }
                for j in 0..POSITIVITY_SAMPLES {
                    let t = TAU * j as f64 / POSITIVITY_SAMPLES as f64;
                    if self.polar(t).0 <= 0.0 {
                        return Err(Error::InvalidDomain(format!(
                            "polar radius is not positive at angle {t:.6}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A shape placed with its center at `offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub shape: Shape,
    #[serde(default)]
    pub offset: [f64; 2],
}

impl DomainSpec {
    pub fn new(shape: Shape, offset: [f64; 2]) -> Result<Self> {
        let spec = Self { shape, offset };
        spec.validate()?;
        Ok(spec)
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(Shape::Disk { radius }, [0.0, 0.0])
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::new(Shape::Ellipse { a, b }, [0.0, 0.0])
    }

    pub fn polar_fourier(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        Self::new(Shape::PolarFourier { a0, cos, sin }, [0.0, 0.0])
    }

    pub fn with_offset(mut self, offset: [f64; 2]) -> Result<Self> {
        self.offset = offset;
        self.validate()?;
        Ok(self)
    }

    /// Checks the shape parameters and that the origin is strictly inside.
    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if !(self.offset[0].is_finite() && self.offset[1].is_finite()) {
            return Err(Error::InvalidDomain("offset must be finite".into()));
        }
        if !self.contains([0.0, 0.0]) {
            return Err(Error::OriginOutside);
        }
        Ok(())
    }

    /// Strict interior test for a point in absolute coordinates.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        self.shape.contains(sub(x, self.offset))
    }

    /// The domain scaled by `alpha > 0` about the origin.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {alpha}"
            )));
        }
        Self::new(
            self.shape.scaled(alpha),
            [alpha * self.offset[0], alpha * self.offset[1]],
        )
    }

    fn jet(&self, t: f64) -> Jet {
        let mut j = self.shape.jet(t);
        j.p = add(j.p, self.offset);
        j
    }

    /// Boundary point at shape parameter `t`, absolute coordinates.
    pub fn boundary_point(&self, t: f64) -> [f64; 2] {
        self.jet(t).p
    }

    fn is_centered(&self) -> bool {
        self.offset == [0.0, 0.0]
    }

    /// True for a round disk centered at the origin, however it is described.
    pub fn is_centered_disk(&self) -> bool {
        self.is_centered()
            && match &self.shape {
                Shape::Disk { .. } => true,
                Shape::Ellipse { a, b } => a == b,
                Shape::PolarFourier { cos, sin, .. } => cos.iter().chain(sin).all(|v| *v == 0.0),
            }
    }

    /// Boundary point and its derivative in the shape parameter.
    pub(crate) fn param_point(&self, t: f64) -> (Vec2, Vec2) {
        let j = self.jet(t);
        (j.p, j.d1)
    }

    /// Clockwise-convention curvature at shape parameter `t`.
    pub(crate) fn curvature_at_param(&self, t: f64) -> f64 {
        let j = self.shape.jet(t);
        let speed = norm(j.d1);
        -cross(j.d1, j.d2) / (speed * speed * speed)
    }
}

/// `Omega - y`: shifts the domain so that `y` becomes the origin.
pub fn translate(spec: &DomainSpec, y: [f64; 2]) -> Result<DomainSpec> {
    DomainSpec::new(
        spec.shape.clone(),
        [spec.offset[0] - y[0], spec.offset[1] - y[1]],
    )
}

/// Distance from the origin to the boundary along direction `phi`.
pub fn polar_radius(spec: &DomainSpec, phi: f64) -> Result<f64> {
    let u = [phi.cos(), phi.sin()];
    let c = spec.offset;
    match &spec.shape {
        Shape::Disk { radius } => {
            let uc = dot(u, c);
            Ok(uc + (uc * uc - dot(c, c) + radius * radius).sqrt())
        }
        Shape::Ellipse { a, b } => {
            let (a2, b2) = (a * a, b * b);
            let qa = u[0] * u[0] / a2 + u[1] * u[1] / b2;
            let qb = u[0] * c[0] / a2 + u[1] * c[1] / b2;
            let qc = c[0] * c[0] / a2 + c[1] * c[1] / b2 - 1.0;
            Ok((qb + (qb * qb - qa * qc).sqrt()) / qa)
        }
        Shape::PolarFourier { .. } if spec.is_centered() => Ok(spec.shape.polar(phi).0),
        Shape::PolarFourier { .. } => ray_crossing(spec, u, phi),
    }
}

/// Root of `|s u - c| - rho(arg(s u - c))` on the ray; more than one sign
/// change means the domain is not star-shaped about the origin.
fn ray_crossing(spec: &DomainSpec, u: Vec2, phi: f64) -> Result<f64> {
    let c = spec.offset;
    let g = |s: f64| {
        let q = sub([s * u[0], s * u[1]], c);
        norm(q) - spec.shape.polar(q[1].atan2(q[0])).0
    };
    let s_max = 1.01 * (norm(c) + spec.shape.max_extent());
    let h = s_max / RAY_SCAN_CELLS as f64;
    let mut bracket = None;
    let mut crossings = 0;
    let mut g_lo = g(0.0);
    for i in 0..RAY_SCAN_CELLS {
        let lo = i as f64 * h;
        let g_hi = g(lo + h);
        if (g_lo < 0.0) != (g_hi < 0.0) {
            crossings += 1;
            bracket.get_or_insert((lo, lo + h, g_lo));
        }
        g_lo = g_hi;
    }
    let (mut lo, mut hi, mut g_lo) = match (crossings, bracket) {
        (1, Some(b)) => b,
        _ => return Err(Error::NotStarShaped { phi }),
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Boundary point in direction `phi` together with its shape parameter.
fn boundary_in_direction(spec: &DomainSpec, phi: f64) -> Result<(Vec2, f64)> {
    let s = polar_radius(spec, phi)?;
    let x = [s * phi.cos(), s * phi.sin()];
    let t = spec.shape.param_of(sub(x, spec.offset));
    Ok((x, t))
}

/// Curvature of the boundary point hit by the ray in direction `phi`, with
/// the convex-is-non-positive convention.
pub fn signed_curvature(spec: &DomainSpec, phi: f64) -> Result<f64> {
    let (_, t) = boundary_in_direction(spec, phi)?;
    Ok(spec.curvature_at_param(t))
}

/// `rho'(phi) / rho(phi)` for the polar description about the origin.
pub fn log_radius_derivative(spec: &DomainSpec, phi: f64) -> Result<f64> {
    let (x, t) = boundary_in_direction(spec, phi)?;
    let tangent = spec.shape.jet(t).d1;
    Ok(dot(x, tangent) / cross(x, tangent))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    pub area: f64,
    pub perimeter: f64,
    /// Smallest distance from the origin to the boundary.
    pub r_i: f64,
    /// Largest distance from the origin to the boundary.
    pub r_o: f64,
    pub kappa_star: f64,
    /// Minimal radius of curvature, `1 / kappa_star`.
    pub r_c: f64,
    /// `sup |rho'| / rho` about the origin.
    pub rho_star: f64,
    /// Radius of the largest inscribed disk.
    pub inradius: f64,
    pub incenter: [f64; 2],
    pub is_convex: bool,
    pub is_nearly_circular: bool,
    pub resolution: usize,
}

/// Uniform samples of the boundary in the shape parameter.
struct Samples {
    h: f64,
    t: Vec<f64>,
    jets: Vec<Jet>,
}

impl Samples {
    fn new(spec: &DomainSpec, n: usize) -> Self {
        let h = TAU / n as f64;
        let t: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
        let jets = t.iter().map(|&t| spec.jet(t)).collect();
        Self { h, t, jets }
    }

    fn len(&self) -> usize {
        self.t.len()
    }

    /// Refined extremum of `f` over the closed curve: best sample, then a
    /// golden-section search over the two neighbouring cells.
    fn extremum<F: Fn(f64) -> f64>(&self, f: F, maximize: bool) -> (f64, f64) {
        let mut best = 0;
        let mut best_v = f(self.t[0]);
        for (j, &t) in self.t.iter().enumerate().skip(1) {
            let v = f(t);
            if (maximize && v > best_v) || (!maximize && v < best_v) {
                best = j;
                best_v = v;
            }
        }
        let t0 = self.t[best];
        let (t, v) = if maximize {
            golden_max(&f, t0 - self.h, t0 + self.h, 1e-13)
        } else {
            golden_min(&f, t0 - self.h, t0 + self.h, 1e-13)
        };
        let better = if maximize { v > best_v } else { v < best_v };
        if better {
            (t, v)
        } else {
            (t0, best_v)
        }
    }
}

/// `(r_i, r_o)`: extreme distances from the origin to the boundary.
pub fn radii(spec: &DomainSpec, resolution: usize) -> (f64, f64) {
    let s = Samples::new(spec, resolution.max(MIN_RESOLUTION));
    let r = |t: f64| norm(spec.jet(t).p);
    (s.extremum(r, false).1, s.extremum(r, true).1)
}

fn area_of(s: &Samples) -> f64 {
    0.5 * s.h * s.jets.iter().map(|j| cross(j.p, j.d1)).sum::<f64>()
}

fn centroid(s: &Samples, area: f64) -> Vec2 {
    let mut m = [0.0, 0.0];
    for j in &s.jets {
        let w = cross(j.p, j.d1);
        m[0] += j.p[0] * w;
        m[1] += j.p[1] * w;
    }
    [m[0] * s.h / (3.0 * area), m[1] * s.h / (3.0 * area)]
}

/// Distance from `y` to the boundary; negative outside the domain.
fn signed_boundary_distance(spec: &DomainSpec, s: &Samples, y: Vec2) -> f64 {
    let (_, d) = s.extremum(|t| norm(sub(spec.jet(t).p, y)), false);
    if spec.contains(y) {
        d
    } else {
        -d
    }
}

/// Largest inscribed disk by multistart Nelder–Mead on the boundary distance.
fn inscribed_disk(spec: &DomainSpec, s: &Samples, area: f64) -> (Vec2, f64) {
    let c = centroid(s, area);
    let d0 = signed_boundary_distance(spec, s, c).max(1e-3 * area.sqrt());
    let mut starts = vec![c];
    for j in 0..8 {
        let a = TAU * j as f64 / 8.0;
        starts.push([c[0] + 0.5 * d0 * a.cos(), c[1] + 0.5 * d0 * a.sin()]);
    }
    let opts = NelderMeadOptions {
        initial_step: 0.25 * d0,
        x_tol: 1e-10 * area.sqrt().max(1e-300),
        max_evals: 4000,
    };
    let mut best = (c, signed_boundary_distance(spec, s, c));
    for y0 in starts {
        let m = nelder_mead(
            |y| -signed_boundary_distance(spec, s, [y[0], y[1]]),
            &y0,
            &opts,
        );
        if -m.value > best.1 {
            best = ([m.x[0], m.x[1]], -m.value);
        }
    }
    best
}

/// All geometric quantities of the domain, sampled at `resolution` points.
pub fn geometry_report(spec: &DomainSpec, resolution: usize) -> Result<GeometryReport> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "geometry resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    spec.validate()?;
    let s = Samples::new(spec, resolution);

    for (t, j) in s.t.iter().zip(&s.jets) {
        if cross(j.p, j.d1) <= 0.0 {
            return Err(Error::NotStarShaped {
                phi: spec.boundary_point(*t)[1].atan2(spec.boundary_point(*t)[0]),
            });
        }
    }

    let area = area_of(&s);
    let perimeter = s.h * s.jets.iter().map(|j| norm(j.d1)).sum::<f64>();
    let r = |t: f64| norm(spec.jet(t).p);
    let (_, r_i) = s.extremum(r, false);
    let (_, r_o) = s.extremum(r, true);

    let kappa = |t: f64| spec.curvature_at_param(t);
    let (_, kappa_star) = s.extremum(|t| kappa(t).abs(), true);
    let convex_tol = 1e-12 * kappa_star;
    let is_convex = s.t.iter().all(|&t| kappa(t) <= convex_tol);

    let log_slope = |t: f64| {
        let j = spec.jet(t);
        (dot(j.p, j.d1) / cross(j.p, j.d1)).abs()
    };
    let (_, rho_star) = s.extremum(log_slope, true);

    let (incenter, inradius) = inscribed_disk(spec, &s, area);

    Ok(GeometryReport {
        area,
        perimeter,
        r_i,
        r_o,
        kappa_star,
        r_c: 1.0 / kappa_star,
        rho_star,
        inradius,
        incenter,
        is_convex,
        is_nearly_circular: rho_star < 1.0,
        resolution: s.len(),
    })
}
