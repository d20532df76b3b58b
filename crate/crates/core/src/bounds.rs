//! Closed-form bounds on the principal eigenvalue and the chain that ties
//! them to the transplanted quotient.
//!
//! All bounds are in inverse length units. `mu_D` is the principal eigenvalue
//! of the unit disk.

use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::conformal::{conformal_map, hardy_norm_fprime, HardyNorm, Method, DEFAULT_MODES};
use crate::geometry::{
    geometry_report, radii, translate, DomainSpec, GeometryReport, DEFAULT_RESOLUTION,
};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::specfun::{self, mu_disk, phi};
use crate::transplant::{transplant_quotient, TransplantResult, DEFAULT_RADIAL_ORDER};
use crate::{Error, Result};

/// A strict link must clear this absolute margin.
pub const STRICT_MARGIN: f64 = 1e-6;

/// Tolerance for links that are equalities on the centered disk.
pub const EQUALITY_TOL: f64 = 1e-7;

/// The value that is often printed for `sqrt(lambda_1(D))`.
pub const QUOTED_SQRT_LAMBDA1: f64 = 1.5508;

/// `sqrt(2 pi / |Omega|)`, a strict lower bound for every domain.
pub fn lower_bound(geom: &GeometryReport) -> f64 {
    (TAU / geom.area).sqrt()
}

/// First zero of `J_0`; `lambda_1(D) = j01^2`.
pub fn j01() -> f64 {
    specfun::bessel_j_zero(0, 1).expect("J_0 changes sign below 3")
}

/// `sqrt(|dOmega| / (2 inradius |Omega|) * j01^2)` for convex domains.
pub fn easy_bound(geom: &GeometryReport) -> Result<f64> {
    if !geom.is_convex {
        return Err(Error::NotApplicable("the easy bound needs a convex domain"));
    }
    let j = j01();
    Ok((geom.perimeter / (2.0 * geom.inradius * geom.area) * j * j).sqrt())
}

fn decay(geom: &GeometryReport) -> Result<f64> {
    Ok(2.0 * (geom.r_o - geom.r_c) * phi(geom.r_i, geom.r_c)?)
}

/// `r_c exp(2 (r_o - r_c) Phi(r_i, r_c))`, an upper bound for `||f'||` on
/// convex domains.
pub fn kovalev_hardy(geom: &GeometryReport) -> Result<f64> {
    if !geom.is_convex {
        return Err(Error::NotApplicable(
            "the sup|f'| estimate needs a convex domain",
        ));
    }
    Ok(geom.r_c * decay(geom)?.exp())
}

/// `r_o sqrt((1 + rho*^2) / (1 - rho*^2))`, an upper bound for `||f'||` on
/// nearly circular domains.
pub fn gaier_hardy(geom: &GeometryReport) -> Result<f64> {
    if !geom.is_nearly_circular {
        return Err(Error::NotApplicable(
            "the rho* estimate needs sup |rho'|/rho < 1",
        ));
    }
    let q = geom.rho_star * geom.rho_star;
    Ok(geom.r_o * ((1.0 + q) / (1.0 - q)).sqrt())
}

fn envelope(geom: &GeometryReport) -> f64 {
    ((geom.area + PI * geom.r_i * geom.r_i) / TAU).sqrt()
}

/// `sqrt(2 pi / (|Omega| + pi r_i^2)) kappa* hardy mu_D`.
pub fn abstract_bound(geom: &GeometryReport, hardy: f64) -> f64 {
    geom.kappa_star * hardy * mu_disk() / envelope(geom)
}

pub fn functional_fc(geom: &GeometryReport) -> Result<f64> {
    if !geom.is_convex {
        return Err(Error::NotApplicable("F_c needs a convex domain"));
    }
    Ok(envelope(geom) * (-decay(geom)?).exp())
}

pub fn functional_fs(geom: &GeometryReport) -> Result<f64> {
    if !geom.is_nearly_circular {
        return Err(Error::NotApplicable("F_s needs sup |rho'|/rho < 1"));
    }
    let r = geom.rho_star;
    Ok(envelope(geom) * geom.r_c / geom.r_o * ((1.0 - r) / (1.0 + r)).sqrt())
}

/// `(mu_D / F_c, mu_D / F_s)`, each present when its functional is.
pub fn theorem_bounds(fc: Option<f64>, fs: Option<f64>) -> (Option<f64>, Option<f64>) {
    let mu = mu_disk();
    (fc.map(|v| mu / v), fs.map(|v| mu / v))
}

#[derive(Debug, Clone, Serialize)]
pub struct FcStar {
    /// Maximizing translation, in the coordinates of the input spec.
    pub y: [f64; 2],
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct FcStarOptions {
    pub resolution: usize,
    pub x_tol: f64,
    pub max_evals: usize,
}

impl Default for FcStarOptions {
    fn default() -> Self {
        Self {
            resolution: 1024,
            x_tol: 1e-10,
            max_evals: 4000,
        }
    }
}

/// `sup_y F_c(Omega - y)` over interior points `y`.
///
/// Area and curvature do not move with the domain, so each evaluation only
/// re-samples `r_i` and `r_o`. The search is seeded from the incenter and a
/// ring of eight points around it and refined by Nelder–Mead with restarts.
pub fn fc_star(spec: &DomainSpec, opts: &FcStarOptions) -> Result<FcStar> {
    let base = geometry_report(spec, opts.resolution)?;
    if !base.is_convex {
        return Err(Error::NotApplicable("F_c needs a convex domain"));
    }
    let fc_at = |y: [f64; 2]| -> Option<f64> {
        if !spec.contains(y) {
            return None;
        }
        let shifted = translate(spec, y).ok()?;
        let (r_i, r_o) = radii(&shifted, opts.resolution);
        let geom = GeometryReport {
            r_i,
            r_o,
            ..base.clone()
        };
        functional_fc(&geom).ok()
    };
    let objective = |y: &[f64]| fc_at([y[0], y[1]]).map_or(f64::INFINITY, |v| -v);

    let c = base.incenter;
    let ring = 0.5 * base.inradius;
    let mut seeds = vec![c];
    for j in 0..8 {
        let a = TAU * j as f64 / 8.0;
        seeds.push([c[0] + ring * a.cos(), c[1] + ring * a.sin()]);
    }
    let mut best = [0.0, 0.0];
    let mut best_v = objective(&best);
    for s in &seeds {
        let v = objective(s);
        if v < best_v {
            best = *s;
            best_v = v;
        }
    }

    let mut step = 0.25 * base.inradius;
    let mut evals = 0;
    let mut converged = false;
    for _ in 0..4 {
        let m = nelder_mead(
            objective,
            &best,
            &NelderMeadOptions {
                initial_step: step,
                x_tol: opts.x_tol,
                max_evals: opts.max_evals,
            },
        );
        evals += m.evals;
        let moved = ((m.x[0] - best[0]).powi(2) + (m.x[1] - best[1]).powi(2)).sqrt();
        if m.value <= best_v {
            best = [m.x[0], m.x[1]];
            best_v = m.value;
        }
        converged = m.converged;
        if converged && moved <= opts.x_tol {
            break;
        }
        step *= 0.1;
    }
    if !converged {
        return Err(Error::NotConverged {
            what: "F_c* search",
            iterations: evals,
            residual: -best_v,
        });
    }
    Ok(FcStar {
        y: best,
        value: -best_v,
        evals,
        converged,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainConfig {
    /// Boundary samples for geometric sup/inf quantities.
    pub resolution: usize,
    /// Initial number of map nodes; refined until the map is accepted.
    pub n_modes: usize,
    pub radial_order: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            n_modes: DEFAULT_MODES,
            radial_order: DEFAULT_RADIAL_ORDER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs < rhs` by at least [`STRICT_MARGIN`].
    Strict,
    /// `|lhs - rhs| <= EQUALITY_TOL`.
    Equal,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainLink {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub relation: Relation,
    pub ok: bool,
}

impl ChainLink {
    fn new(name: &'static str, lhs: f64, rhs: f64, relation: Relation) -> Self {
        let margin = rhs - lhs;
        let ok = match relation {
            Relation::Strict => margin > STRICT_MARGIN,
            Relation::Equal => margin.abs() <= EQUALITY_TOL,
        };
        Self {
            name,
            lhs,
            rhs,
            margin,
            relation,
            ok,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Applicability {
    pub convex: bool,
    pub nearly_circular: bool,
    pub centered_disk: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapDiagnostics {
    pub method: Method,
    pub n_modes: usize,
    pub iterations: usize,
    pub damped: bool,
    pub iteration_residual: f64,
    pub analyticity_residual: f64,
    /// `|c_1| = |f'(0)|`.
    pub c1: f64,
    pub area_from_coefficients: f64,
    pub total_curvature: f64,
}

/// Value of the easy bound's Dirichlet constant next to the often quoted
/// `1.5508`, which is `sqrt(j01)` rather than `sqrt(lambda_1) = j01`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LambdaAudit {
    pub j01: f64,
    pub j01_residual: f64,
    pub sqrt_lambda1: f64,
    pub quoted_sqrt_lambda1: f64,
    pub sqrt_j01: f64,
    pub discrepancy: bool,
}

pub fn lambda_audit() -> LambdaAudit {
    let j = j01();
    LambdaAudit {
        j01: j,
        j01_residual: specfun::bessel_j(0, j).expect("order 0 is in range").abs(),
        sqrt_lambda1: j,
        quoted_sqrt_lambda1: QUOTED_SQRT_LAMBDA1,
        sqrt_j01: j.sqrt(),
        discrepancy: (j - QUOTED_SQRT_LAMBDA1).abs() > 1e-4,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub geometry: GeometryReport,
    pub map: MapDiagnostics,
    pub hardy: HardyNorm,
    pub transplant: TransplantResult,
    pub lower: f64,
    pub easy: Option<f64>,
    pub transplant_bound: f64,
    #[serde(rename = "abstract")]
    pub abstract_bound: f64,
    pub kovalev_hardy: Option<f64>,
    pub gaier_hardy: Option<f64>,
    pub fc: Option<f64>,
    pub fs: Option<f64>,
    pub fc_bound: Option<f64>,
    pub fs_bound: Option<f64>,
    pub applicability: Applicability,
    pub links: Vec<ChainLink>,
    pub chain_ok: bool,
}

/// Computes every applicable bound and checks
///
/// ```text
/// lower < transplant <= abstract <= fc_bound, fs_bound
/// ||f'|| <= kovalev, gaier
/// ```
///
/// All `<=` links are equalities on the centered disk and strict elsewhere.
pub fn verify_chain(spec: &DomainSpec, config: &ChainConfig) -> Result<BoundsReport> {
    let geom = geometry_report(spec, config.resolution)?;
    let map = conformal_map(spec, config.n_modes)?;
    let hardy = hardy_norm_fprime(&map);
    let transplant = transplant_quotient(&map, config.radial_order)?;

    let applicability = Applicability {
        convex: geom.is_convex,
        nearly_circular: geom.is_nearly_circular,
        centered_disk: spec.is_centered_disk(),
    };
    let lower = lower_bound(&geom);
    let easy = easy_bound(&geom).ok();
    let abstract_value = abstract_bound(&geom, hardy.value);
    let kovalev = kovalev_hardy(&geom).ok();
    let gaier = gaier_hardy(&geom).ok();
    let fc = functional_fc(&geom).ok();
    let fs = functional_fs(&geom).ok();
    let (fc_bound, fs_bound) = theorem_bounds(fc, fs);

    let weak = if applicability.centered_disk {
        Relation::Equal
    } else {
        Relation::Strict
    };
    let mut links = vec![
        ChainLink::new(
            "lower < transplant",
            lower,
            transplant.bound,
            Relation::Strict,
        ),
        ChainLink::new(
            "transplant <= abstract",
            transplant.bound,
            abstract_value,
            weak,
        ),
    ];
    if let Some(k) = kovalev {
        links.push(ChainLink::new("hardy <= kovalev", hardy.value, k, weak));
    }
    if let Some(g) = gaier {
        links.push(ChainLink::new("hardy <= gaier", hardy.value, g, weak));
    }
    if let Some(b) = fc_bound {
        links.push(ChainLink::new(
            "abstract <= fc_bound",
            abstract_value,
            b,
            weak,
        ));
    }
    if let Some(b) = fs_bound {
        links.push(ChainLink::new(
            "abstract <= fs_bound",
            abstract_value,
            b,
            weak,
        ));
    }
    let chain_ok = links.iter().all(|l| l.ok);

    Ok(BoundsReport {
        map: MapDiagnostics {
            method: map.method(),
            n_modes: map.n_modes(),
            iterations: map.iterations(),
            damped: map.damped(),
            iteration_residual: map.iteration_residual(),
            analyticity_residual: map.analyticity_residual(),
            c1: map.derivative_at_origin(),
            area_from_coefficients: map.area_from_coefficients(),
            total_curvature: map.total_curvature(),
        },
        geometry: geom,
        hardy,
        transplant,
        lower,
        easy,
        transplant_bound: transplant.bound,
        abstract_bound: abstract_value,
        kovalev_hardy: kovalev,
        gaier_hardy: gaier,
        fc,
        fs,
        fc_bound,
        fs_bound,
        applicability,
        links,
        chain_ok,
    })
}
