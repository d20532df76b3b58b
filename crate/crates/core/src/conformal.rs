//! Numerical conformal maps `f: D -> Omega` with `f(0) = 0` for domains that
//! are star-shaped about the origin.
//!
//! The primary solver finds the boundary correspondence `phi(theta)` as the
//! fixed point of Theodorsen's equation
//!
//! ```text
//! phi(theta) = theta + K[ ln rho(phi(.)) ](theta)
//! ```
//!
//! where `K` is conjugation on the circle, applied spectrally: a Fourier mode
//! `e^{i n theta}` is multiplied by `-i sgn(n)`. This is the statement that
//! `log(f(z)/z)` is analytic in the disk with real part `ln rho(phi)` and
//! imaginary part `phi - theta` on the boundary. The additive constant is
//! fixed by `mean(phi - theta) = 0`, which makes `c_1 = f'(0)` real and positive.
//!
//! The iteration is only guaranteed to converge when `sup |rho'|/rho < 1`.
//! Elongated domains are handled by [`wegmann_map`], a Newton method for the
//! correspondence in the shape's own parameter, and [`conformal_map`] picks
//! between the two and refines the grid until the analyticity gate passes.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::Arc;

use crate::geometry::{log_radius_derivative, polar_radius, signed_curvature, DomainSpec};
use crate::{Error, Result};

pub const DEFAULT_MODES: usize = 512;
pub const MIN_MODES: usize = 128;

/// Stop once the correspondence moves less than this in sup norm.
pub const ITERATION_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 500;

/// Accept a map only if its non-analytic Fourier content, relative to
/// `|c_1|`, is below this.
pub const ANALYTICITY_TOL: f64 = 1e-8;

/// Under-relaxation used when `sup |rho'|/rho >= 1`.
pub const DAMPING: f64 = 0.5;

/// How boundary points are addressed by the stored correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Correspondence in the polar angle about the origin.
    Theodorsen,
    /// Correspondence in the shape's own parameter, found by Newton steps on
    /// the boundary Riemann–Hilbert problem.
    Wegmann,
}

/// Boundary data of the map at one grid node `theta_j = 2 pi j / N`.
#[derive(Debug, Clone, Copy)]
pub struct BoundarySample {
    pub theta: f64,
    /// Boundary parameter `s(theta)`: the polar angle for Theodorsen maps,
    /// the shape parameter for Wegmann maps.
    pub param: f64,
    pub point: Complex64,
    /// `|d eta / ds|` at `param`.
    pub tangent: f64,
    /// `|f'(e^{i theta})|`.
    pub speed: f64,
    /// Curvature of the boundary at the image point.
    pub curvature: f64,
}

#[derive(Debug, Clone)]
pub struct ConformalMap {
    spec: DomainSpec,
    n_modes: usize,
    method: Method,
    /// `s(theta_j)`.
    correspondence: Vec<f64>,
    /// Fourier coefficients of `s - theta`, signed-frequency layout.
    drift_hat: Vec<Complex64>,
    /// `c_0 .. c_{N/2 - 1}`; `c_0` is pinned to zero.
    coefficients: Vec<Complex64>,
    samples: Vec<BoundarySample>,
    iterations: usize,
    iteration_residual: f64,
    analyticity_residual: f64,
    damped: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HardyNorm {
    /// `(sum n^2 |c_n|^2)^{1/2}`.
    pub value: f64,
    /// `((1/2pi) int |eta'(theta)|^2 dtheta)^{1/2}` with `|eta'|` built from
    /// the boundary parametrization and the differentiated correspondence.
    pub quadrature: f64,
    pub discrepancy: f64,
}

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    n: usize,
}

impl Spectral {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            n,
        }
    }

    /// Normalized forward transform: `hat[k] = (1/N) sum_j x_j e^{-2 pi i j k / N}`.
    fn analyze(&self, x: &mut [Complex64]) {
        self.forward.process(x);
        let s = 1.0 / self.n as f64;
        x.iter_mut().for_each(|v| *v *= s);
    }

    fn synthesize(&self, x: &mut [Complex64]) {
        self.inverse.process(x);
    }

    fn analyze_real(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.analyze(&mut buf);
        buf
    }

    /// Signed frequency of FFT bin `k`; the Nyquist bin maps to `-N/2`.
    fn freq(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    fn is_nyquist(&self, k: usize) -> bool {
        2 * k == self.n
    }

    /// Circle conjugate of real samples, with the spectrum of the result.
    fn conjugate(&self, real: &[f64]) -> (Vec<f64>, Vec<Complex64>) {
        let mut buf = self.analyze_real(real);
        for (k, v) in buf.iter_mut().enumerate() {
            let n = self.freq(k);
            *v = if n == 0 || self.is_nyquist(k) {
                Complex64::new(0.0, 0.0)
            } else {
                *v * Complex64::new(0.0, -(n.signum() as f64))
            };
        }
        let hat = buf.clone();
        self.synthesize(&mut buf);
        (buf.iter().map(|v| v.re).collect(), hat)
    }

    /// Derivative of periodic samples given their spectrum.
    fn derivative(&self, hat: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = hat
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if self.is_nyquist(k) {
                    Complex64::new(0.0, 0.0)
                } else {
                    *c * Complex64::new(0.0, self.freq(k) as f64)
                }
            })
            .collect();
        self.synthesize(&mut buf);
        buf.iter().map(|v| v.re).collect()
    }
}

/// Trigonometric interpolation of periodic samples onto a finer grid.
fn upsample(values: &[f64], n_new: usize) -> Vec<f64> {
    let n = values.len();
    let hat = Spectral::new(n).analyze_real(values);
    let mut wide = vec![Complex64::new(0.0, 0.0); n_new];
    for k in 0..n / 2 {
        wide[k] = hat[k];
        if k > 0 {
            wide[n_new - k] = hat[n - k];
        }
    }
    wide[n / 2] = 0.5 * hat[n / 2];
    wide[n_new - n / 2] = 0.5 * hat[n / 2];
    Spectral::new(n_new).synthesize(&mut wide);
    wide.iter().map(|v| v.re).collect()
}

fn sup_log_slope(spec: &DomainSpec, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let phi = TAU * j as f64 / n as f64;
        worst = worst.max(log_radius_derivative(spec, phi)?.abs());
    }
    Ok(worst)
}

fn check_modes(n_modes: usize) -> Result<()> {
    if !n_modes.is_power_of_two() || n_modes < MIN_MODES {
        return Err(Error::InvalidArgument(format!(
            "n_modes must be a power of two >= {MIN_MODES}, got {n_modes}"
        )));
    }
    Ok(())
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// Point, `|d eta / ds|` and curvature at boundary parameter `s`.
fn boundary_at(spec: &DomainSpec, method: Method, s: f64) -> Result<(Complex64, f64, f64)> {
    match method {
        Method::Theodorsen => {
            let r = polar_radius(spec, s)?;
            let slope = log_radius_derivative(spec, s)?;
            Ok((
                Complex64::from_polar(r, s),
                r * (1.0 + slope * slope).sqrt(),
                signed_curvature(spec, s)?,
            ))
        }
        Method::Wegmann => {
            let (p, d) = spec.param_point(s);
            Ok((
                Complex64::new(p[0], p[1]),
                d[0].hypot(d[1]),
                spec.curvature_at_param(s),
            ))
        }
    }
}

struct Solution {
    method: Method,
    correspondence: Vec<f64>,
    iterations: usize,
    residual: f64,
    damped: bool,
}

/// Assembles the map from a converged correspondence without gating it.
fn assemble(spec: &DomainSpec, sol: Solution) -> Result<ConformalMap> {
    let n = sol.correspondence.len();
    let fft = Spectral::new(n);
    let theta = grid(n);

    let drift: Vec<f64> = sol
        .correspondence
        .iter()
        .zip(&theta)
        .map(|(s, t)| s - t)
        .collect();
    let drift_hat = fft.analyze_real(&drift);

    let mut values = Vec::with_capacity(n);
    let mut extra = Vec::with_capacity(n);
    for &s in &sol.correspondence {
        let (p, tangent, curvature) = boundary_at(spec, sol.method, s)?;
        values.push(p);
        extra.push((tangent, curvature));
    }

    let mut hat = values.clone();
    fft.analyze(&mut hat);
    let c1 = hat[1].norm();
    let leak = hat[n / 2..]
        .iter()
        .chain(std::iter::once(&hat[0]))
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let mut coefficients = hat[..n / 2].to_vec();
    coefficients[0] = Complex64::new(0.0, 0.0);

    // e^{i theta} f'(e^{i theta}) = sum n c_n e^{i n theta}
    let mut deriv = vec![Complex64::new(0.0, 0.0); n];
    for (k, c) in coefficients.iter().enumerate() {
        deriv[k] = *c * k as f64;
    }
    fft.synthesize(&mut deriv);

    let samples = (0..n)
        .map(|j| BoundarySample {
            theta: theta[j],
            param: sol.correspondence[j],
            point: values[j],
            tangent: extra[j].0,
            speed: deriv[j].norm(),
            curvature: extra[j].1,
        })
        .collect();

    Ok(ConformalMap {
        spec: spec.clone(),
        n_modes: n,
        method: sol.method,
        correspondence: sol.correspondence,
        drift_hat,
        coefficients,
        samples,
        iterations: sol.iterations,
        iteration_residual: sol.residual,
        analyticity_residual: leak / c1,
        damped: sol.damped,
    })
}

fn gate(map: ConformalMap) -> Result<ConformalMap> {
    if map.analyticity_residual < ANALYTICITY_TOL {
        Ok(map)
    } else {
        Err(Error::MapRejected {
            residual: map.analyticity_residual,
            threshold: ANALYTICITY_TOL,
        })
    }
}

fn theodorsen_solve(spec: &DomainSpec, n: usize) -> Result<Solution> {
    let fft = Spectral::new(n);
    let theta = grid(n);
    let damped = sup_log_slope(spec, 4 * n)? >= 1.0;
    let omega = if damped { DAMPING } else { 1.0 };

    let mut psi = vec![0.0; n];
    let mut log_rho = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        for ((l, t), p) in log_rho.iter_mut().zip(&theta).zip(&psi) {
            *l = polar_radius(spec, t + p)?.ln();
        }
        let (target, _) = fft.conjugate(&log_rho);
        residual = 0.0;
        for (p, q) in psi.iter_mut().zip(&target) {
            let next = (1.0 - omega) * *p + omega * q;
            residual = f64::max(residual, (next - *p).abs());
            *p = next;
        }
        if residual < ITERATION_TOL {
            return Ok(Solution {
                method: Method::Theodorsen,
                correspondence: theta.iter().zip(&psi).map(|(t, p)| t + p).collect(),
                iterations,
                residual,
                damped,
            });
        }
    }
    Err(Error::NotConverged {
        what: "Theodorsen iteration",
        iterations,
        residual,
    })
}

/// Builds the conformal map of the unit disk onto `spec` on a grid of
/// `n_modes` boundary nodes by Theodorsen's iteration.
pub fn theodorsen_map(spec: &DomainSpec, n_modes: usize) -> Result<ConformalMap> {
    check_modes(n_modes)?;
    spec.validate()?;
    gate(assemble(spec, theodorsen_solve(spec, n_modes)?)?)
}

/// One Newton step: the real update `u` for the correspondence `s`.
///
/// With `eta = eta(s)` and `a = eta'(s)` on the grid, find `g` analytic in the
/// disk with `g(0) = 0`, `g'(0) > 0` and `g = eta + a u` for real `u`, i.e.
/// `Im(g / a) = Im(eta / a)`. Writing `a = e^{i theta} |b| e^{i q}` with `q`
/// of winding zero, `g = z e^{Q} w` where `Q = -K[q] + i q` turns this into a
/// prescribed imaginary part for `w`.
fn newton_update(curve: &Curve, fft: &Spectral, theta: &[f64], s: &[f64]) -> Vec<f64> {
    let n = s.len();
    let mut eta = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    for &t in s {
        let (p, d) = curve.at(t);
        eta.push(p);
        a.push(d);
    }
    let b: Vec<Complex64> = a
        .iter()
        .zip(theta)
        .map(|(a, t)| a * Complex64::from_polar(1.0, -t))
        .collect();
    let mut q = Vec::with_capacity(n);
    let mut prev = b[0].arg();
    q.push(prev);
    for bj in &b[1..] {
        let mut v = bj.arg();
        v += TAU * ((prev - v) / TAU).round();
        q.push(v);
        prev = v;
    }
    let (kq, _) = fft.conjugate(&q);
    let q_mean = q.iter().sum::<f64>() / n as f64;

    let v: Vec<f64> = (0..n)
        .map(|j| (eta[j] / a[j]).im * b[j].norm() * kq[j].exp())
        .collect();
    let v_mean = v.iter().sum::<f64>() / n as f64;
    let (kv, _) = fft.conjugate(&v);
    let c = -v_mean / q_mean.tan();

    (0..n)
        .map(|j| {
            let w = Complex64::new(c - kv[j], v[j]);
            let g = Complex64::from_polar(1.0, theta[j]) * Complex64::new(-kq[j], q[j]).exp() * w;
            ((g - eta[j]) / a[j]).re
        })
        .collect()
}

fn is_monotone(s: &[f64]) -> bool {
    s.windows(2).all(|w| w[1] > w[0]) && s[0] + TAU > s[s.len() - 1]
}

/// The boundary blended with a circle about the origin:
/// `(1 - lambda) R e^{it} + lambda eta(t)`. At `lambda = 0` the
/// correspondence is the identity.
struct Curve<'a> {
    spec: &'a DomainSpec,
    lambda: f64,
    radius: f64,
}

impl Curve<'_> {
    fn at(&self, t: f64) -> (Complex64, Complex64) {
        let (p, d) = self.spec.param_point(t);
        let e = Complex64::from_polar(self.radius, t);
        let l = self.lambda;
        (
            (1.0 - l) * e + l * Complex64::new(p[0], p[1]),
            (1.0 - l) * Complex64::i() * e + l * Complex64::new(d[0], d[1]),
        )
    }
}

/// Damps the top of the spectrum, where Newton steps on an under-resolved
/// grid grow.
fn smooth(fft: &Spectral, u: &[f64]) -> Vec<f64> {
    let mut hat = fft.analyze_real(u);
    let half = (fft.n / 2) as f64;
    for (k, v) in hat.iter_mut().enumerate() {
        let x = fft.freq(k).unsigned_abs() as f64 / half;
        *v *= (-36.0 * x.powi(16)).exp();
    }
    fft.synthesize(&mut hat);
    hat.iter().map(|v| v.re).collect()
}

struct NewtonRun {
    s: Vec<f64>,
    iterations: usize,
    residual: f64,
}

/// Residual below which a stalled Newton run is kept. Stalling there means
/// the grid does not resolve the correspondence; the analyticity gate then
/// asks for a finer one.
const STALL_ACCEPT: f64 = 1e-4;

/// Newton iteration on one curve. Stops when the residual drops below `tol`,
/// stops shrinking for three steps, or a full step would fold the
/// correspondence.
fn newton(
    curve: &Curve,
    fft: &Spectral,
    theta: &[f64],
    s: Vec<f64>,
    tol: f64,
    max_iterations: usize,
) -> std::result::Result<NewtonRun, f64> {
    let mut best = NewtonRun {
        s,
        iterations: 0,
        residual: f64::INFINITY,
    };
    let mut current = best.s.clone();
    let mut stalled = 0;
    for iterations in 1..=max_iterations {
        let u = smooth(fft, &newton_update(curve, fft, theta, &current));
        let residual = u.iter().fold(0.0, |m, v| f64::max(m, v.abs()));
        if !residual.is_finite() {
            break;
        }
        let next: Vec<f64> = current.iter().zip(&u).map(|(a, b)| a + b).collect();
        if !is_monotone(&next) {
            break;
        }
        current = next;
        if residual < best.residual {
            stalled = if residual < 0.9 * best.residual {
                0
            } else {
                stalled + 1
            };
            best = NewtonRun {
                s: current.clone(),
                iterations,
                residual,
            };
        } else {
            stalled += 1;
        }
        if residual < tol {
            return Ok(best);
        }
        if stalled >= 3 {
            break;
        }
    }
    if best.residual < STALL_ACCEPT.max(tol) {
        Ok(best)
    } else {
        Err(best.residual)
    }
}

/// Tolerance for the intermediate curves of the continuation.
const CONTINUATION_TOL: f64 = 1e-6;

/// Smallest continuation step before the solver gives up.
const MIN_CONTINUATION_STEP: f64 = 1.0 / 4096.0;

fn wegmann_solve(spec: &DomainSpec, n: usize, seed: Option<Vec<f64>>) -> Result<Solution> {
    let fft = Spectral::new(n);
    let theta = grid(n);
    let target = |lambda| Curve {
        spec,
        lambda,
        radius: (0..64)
            .map(|j| {
                let p = spec.param_point(TAU * j as f64 / 64.0).0;
                p[0].hypot(p[1])
            })
            .sum::<f64>()
            / 64.0,
    };
    let start = seed.unwrap_or_else(|| theta.clone());
    let mut total = 0;

    // A direct attempt first: it succeeds for mild shapes and seeded grids.
    match newton(&target(1.0), &fft, &theta, start, ITERATION_TOL, 30) {
        Ok(run) => {
            return Ok(Solution {
                method: Method::Wegmann,
                correspondence: run.s,
                iterations: run.iterations,
                residual: run.residual,
                damped: false,
            })
        }
        Err(_) => total += 30,
    }

    // Continuation from the circle, where the identity is exact.
    let mut s = theta.clone();
    let mut lambda: f64 = 0.0;
    let mut step: f64 = 0.25;
    let mut last = f64::INFINITY;
    while lambda < 1.0 {
        let next = (lambda + step).min(1.0);
        let tol = if next == 1.0 {
            ITERATION_TOL
        } else {
            CONTINUATION_TOL
        };
        match newton(&target(next), &fft, &theta, s.clone(), tol, 40) {
            Ok(run) => {
                total += run.iterations;
                s = run.s;
                lambda = next;
                last = run.residual;
                step = (2.0 * step).min(0.25);
            }
            Err(residual) => {
                total += 40;
                last = residual;
                step *= 0.5;
                if step < MIN_CONTINUATION_STEP {
                    return Err(Error::NotConverged {
                        what: "shape-parameter Newton continuation",
                        iterations: total,
                        residual: last,
                    });
                }
            }
        }
    }
    Ok(Solution {
        method: Method::Wegmann,
        correspondence: s,
        iterations: total,
        residual: last,
        damped: true,
    })
}

/// Builds the map by Newton iteration on the correspondence in the shape's
/// own parameter. Unlike [`theodorsen_map`] this does not need
/// `sup |rho'|/rho < 1`.
pub fn wegmann_map(spec: &DomainSpec, n_modes: usize) -> Result<ConformalMap> {
    check_modes(n_modes)?;
    spec.validate()?;
    gate(assemble(spec, wegmann_solve(spec, n_modes, None)?)?)
}

/// Largest grid [`conformal_map`] will refine to.
pub const MAX_MODES: usize = 1 << 17;

/// Analyticity residual [`conformal_map`] refines towards. Maps between this
/// and [`ANALYTICITY_TOL`] are only returned from the finest grid.
pub const REFINE_TARGET: f64 = 1e-11;

/// The map on the coarsest grid from `n_modes` up to [`MAX_MODES`] whose
/// analyticity residual reaches [`REFINE_TARGET`], gated as usual.
///
/// Starts with Theodorsen's iteration and switches to the shape-parameter
/// Newton solver if it fails to converge. Newton solves on a refined grid are
/// seeded from the previous one.
pub fn conformal_map(spec: &DomainSpec, n_modes: usize) -> Result<ConformalMap> {
    check_modes(n_modes)?;
    spec.validate()?;
    let mut n = n_modes.min(MAX_MODES);
    let mut newton_seed: Option<Vec<f64>> = None;
    let mut use_newton = false;
    loop {
        if !use_newton {
            match theodorsen_solve(spec, n) {
                Ok(sol) => {
                    let map = assemble(spec, sol)?;
                    if map.analyticity_residual < REFINE_TARGET || n >= MAX_MODES {
                        return gate(map);
                    }
                    n *= 2;
                    continue;
                }
                Err(Error::NotConverged { .. }) => use_newton = true,
                Err(e) => return Err(e),
            }
        }
        let sol = match wegmann_solve(spec, n, newton_seed.take()) {
            Ok(sol) => sol,
            // An unresolved grid can stall the continuation.
            Err(Error::NotConverged { .. }) if n < MAX_MODES => {
                n *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        let map = assemble(spec, sol)?;
        if map.analyticity_residual < REFINE_TARGET || n >= MAX_MODES {
            return gate(map);
        }
        let drift: Vec<f64> = map
            .correspondence
            .iter()
            .zip(grid(n))
            .map(|(s, t)| s - t)
            .collect();
        let wide = upsample(&drift, 2 * n);
        newton_seed = Some(wide.iter().zip(grid(2 * n)).map(|(d, t)| d + t).collect());
        n *= 2;
    }
}

impl ConformalMap {
    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// `s(theta_j)`; see [`BoundarySample::param`].
    pub fn correspondence(&self) -> &[f64] {
        &self.correspondence
    }

    /// Taylor coefficients `c_0 .. c_{N/2 - 1}` of `f`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn samples(&self) -> &[BoundarySample] {
        &self.samples
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn iteration_residual(&self) -> f64 {
        self.iteration_residual
    }

    /// Largest non-analytic Fourier mode of the boundary values, relative to
    /// `|c_1|`.
    pub fn analyticity_residual(&self) -> f64 {
        self.analyticity_residual
    }

    /// Whether the solver had to shorten its steps.
    pub fn damped(&self) -> bool {
        self.damped
    }

    /// `|f'(0)| = |c_1|`.
    pub fn derivative_at_origin(&self) -> f64 {
        self.coefficients[1].norm()
    }

    /// `pi sum n |c_n|^2`.
    pub fn area_from_coefficients(&self) -> f64 {
        std::f64::consts::PI
            * self
                .coefficients
                .iter()
                .enumerate()
                .map(|(n, c)| n as f64 * c.norm_sqr())
                .sum::<f64>()
    }

    /// `(1/2pi) int_0^{2pi} |f'(r e^{i theta})|^2 d theta = sum n^2 |c_n|^2 r^{2n-2}`.
    pub fn mean_square_derivative(&self, r: f64) -> f64 {
        let r2 = r * r;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (n, c) in self.coefficients.iter().enumerate().skip(1) {
            sum += (n * n) as f64 * c.norm_sqr() * pow;
            pow *= r2;
            if pow == 0.0 {
                break;
            }
        }
        sum
    }

    /// `int kappa(eta) |eta'| d theta` by the trapezoid rule; `-2 pi` for any
    /// Jordan domain under the clockwise convention.
    pub fn total_curvature(&self) -> f64 {
        let h = TAU / self.n_modes as f64;
        h * self
            .samples
            .iter()
            .map(|s| s.curvature * s.speed)
            .sum::<f64>()
    }

    /// `s(theta)` by trigonometric interpolation of the grid correspondence.
    pub fn correspondence_at(&self, theta: f64) -> f64 {
        let n = self.n_modes;
        let mut drift = 0.0;
        for (k, c) in self.drift_hat.iter().enumerate() {
            let freq = if k < n / 2 {
                k as f64
            } else if k == n / 2 {
                continue;
            } else {
                k as f64 - n as f64
            };
            drift += (c * Complex64::from_polar(1.0, freq * theta)).re;
        }
        theta + drift
    }
}

/// Image point, `|f'|` and boundary curvature at `e^{i theta}`.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryEval {
    pub point: Complex64,
    pub speed: f64,
    pub curvature: f64,
}

pub fn eval_boundary(map: &ConformalMap, theta: f64) -> Result<BoundaryEval> {
    let s = map.correspondence_at(theta);
    let (point, _, curvature) = boundary_at(&map.spec, map.method, s)?;
    let z = Complex64::from_polar(1.0, theta);
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for (n, c) in map.coefficients.iter().enumerate().skip(1) {
        deriv += *c * n as f64 * zpow;
        zpow *= z;
    }
    Ok(BoundaryEval {
        point,
        speed: deriv.norm(),
        curvature,
    })
}

/// `||f'||_{H^2}`, realized on the boundary since `f'` extends continuously.
pub fn hardy_norm_fprime(map: &ConformalMap) -> HardyNorm {
    let value = map.mean_square_derivative(1.0).sqrt();

    // Independent route: |eta'(theta)| = |d eta / ds| s'(theta).
    let fft = Spectral::new(map.n_modes);
    let ds = fft.derivative(&map.drift_hat);
    let mean_sq = map
        .samples
        .iter()
        .zip(&ds)
        .map(|(s, d)| (s.tangent * (1.0 + d)).powi(2))
        .sum::<f64>()
        / map.n_modes as f64;
    let quadrature = mean_sq.sqrt();
    HardyNorm {
        value,
        quadrature,
        discrepancy: (value - quadrature).abs(),
    }
}
