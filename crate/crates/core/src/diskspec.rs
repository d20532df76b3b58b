//! Spectrum and eigenfunctions of the infinite-mass Dirac operator on a disk.
//!
//! Fiber `k >= 0` carries the spinors `(J_k(mu r) e^{ik theta}, i e^{i(k+1) theta} J_{k+1}(mu r))`
//! with `J_k(mu R) = J_{k+1}(mu R)`. Its positive eigenvalues are the secular
//! roots and its negative ones are `-x` with `J_k(x) + J_{k+1}(x) = 0`. Fiber
//! `-(k+1)` is never solved: the map `u -> sigma_1 conj(u)` sends an eigenfunction
//! of fiber `k` with eigenvalue `mu` to one of fiber `-(k+1)` with eigenvalue
//! `-mu`, so its spectrum is the mirror image.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::quadrature::GaussLegendre;
use crate::specfun::{self, jn, jn_prime, jn_signed, mu_disk};
use crate::{Error, Result};

pub const MAX_FIBER: usize = 50;
pub const MAX_PER_FIBER: usize = 20;

/// Order of the radial Gauss–Legendre rule.
pub const RADIAL_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskEigenpair {
    /// Angular fiber; negative fibers are mirrors of `-(k+1)`.
    pub k: i32,
    /// Branch index within the fiber and sign, starting at 1.
    pub m: usize,
    /// Eigenvalue, in inverse units of `radius`.
    pub mu: f64,
    pub radius: f64,
    #[serde(skip)]
    norm: f64,
}

impl DiskEigenpair {
    /// The non-negative fiber this pair is (or mirrors) and the eigenvalue it
    /// has there.
    fn base(&self) -> (usize, f64) {
        if self.k >= 0 {
            (self.k as usize, self.mu)
        } else {
            ((-self.k - 1) as usize, -self.mu)
        }
    }

    /// `J_k(mu R) - J_{k+1}(mu R)` on the base fiber.
    pub fn secular_residual(&self) -> f64 {
        let (k, mu) = self.base();
        let x = mu * self.radius;
        (jn_signed(k, x) - jn_signed(k + 1, x)).abs()
    }
}

fn validate_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "disk radius must be positive and finite, got {radius}"
        )))
    }
}

fn pair(k: i32, m: usize, mu: f64, radius: f64) -> DiskEigenpair {
    let (base_k, base_mu) = if k >= 0 {
        (k as usize, mu)
    } else {
        ((-k - 1) as usize, -mu)
    };
    // 2 pi int_0^R (J_k(mu r)^2 + J_{k+1}(mu r)^2) r dr
    let rule = GaussLegendre::new(RADIAL_ORDER);
    let mass = TAU
        * rule.integrate(0.0, radius, |r| {
            let x = base_mu * r;
            (jn_signed(base_k, x).powi(2) + jn_signed(base_k + 1, x).powi(2)) * r
        });
    DiskEigenpair {
        k,
        m,
        mu,
        radius,
        norm: mass.sqrt().recip(),
    }
}

/// Eigenvalues of the disk of the given radius on fibers `-(k_max+1) ..= k_max`,
/// `per_fiber` of each sign per fiber, sorted by value.
pub fn disk_spectrum(radius: f64, k_max: usize, per_fiber: usize) -> Result<Vec<DiskEigenpair>> {
    validate_radius(radius)?;
    if k_max > MAX_FIBER {
        return Err(Error::InvalidArgument(format!(
            "k_max must be at most {MAX_FIBER}, got {k_max}"
        )));
    }
    if per_fiber == 0 || per_fiber > MAX_PER_FIBER {
        return Err(Error::InvalidArgument(format!(
            "per_fiber must lie in 1..={MAX_PER_FIBER}, got {per_fiber}"
        )));
    }
    let fibers: Vec<Vec<DiskEigenpair>> = (0..=k_max)
        .into_par_iter()
        .map(|k| -> Result<Vec<DiskEigenpair>> {
            let mirror = -(k as i32) - 1;
            let mut out = Vec::with_capacity(4 * per_fiber);
            for m in 1..=per_fiber {
                let pos = specfun::secular_root(k, m)?.mu / radius;
                let neg = -specfun::conjugate_secular_root(k, m)? / radius;
                out.push(pair(k as i32, m, pos, radius));
                out.push(pair(k as i32, m, neg, radius));
                out.push(pair(mirror, m, -pos, radius));
                out.push(pair(mirror, m, -neg, radius));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<DiskEigenpair> = fibers.into_iter().flatten().collect();
    all.sort_by(|a, b| a.mu.total_cmp(&b.mu).then(a.k.cmp(&b.k)));
    Ok(all)
}

/// Smallest positive eigenvalue in a spectrum.
pub fn principal(spectrum: &[DiskEigenpair]) -> Option<&DiskEigenpair> {
    spectrum.iter().find(|p| p.mu > 0.0)
}

/// L²-normalized eigenfunction at polar coordinates `(r, theta)`.
pub fn disk_eigenfunction(pair: &DiskEigenpair, r: f64, theta: f64) -> Result<[Complex64; 2]> {
    if !(0.0..=pair.radius * (1.0 + 1e-12)).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "r = {r} lies outside the disk of radius {}",
            pair.radius
        )));
    }
    let (k, mu) = pair.base();
    let x = mu * r;
    let i = Complex64::i();
    let u1 = Complex64::from_polar(jn_signed(k, x), k as f64 * theta);
    let u2 = i * Complex64::from_polar(jn_signed(k + 1, x), (k + 1) as f64 * theta);
    let u = if pair.k >= 0 {
        [u1, u2]
    } else {
        [u2.conj(), u1.conj()]
    };
    Ok([u[0] * pair.norm, u[1] * pair.norm])
}

/// The disk Rayleigh quotient of the principal eigenfunction with an
/// `order`-point radial rule:
///
/// ```text
/// (mu^2 int (J_0'^2 + J_1'^2) r dr + int J_1^2 / r dr + J_0(mu)^2) / int (J_0^2 + J_1^2) r dr
/// ```
///
/// with all Bessel factors at `mu_D r` and integrals over `(0, 1)`.
pub fn rayleigh_quotient_disk(order: usize) -> f64 {
    let mu = mu_disk();
    let rule = GaussLegendre::new(order);
    let grad = rule.integrate(0.0, 1.0, |r| {
        let x = mu * r;
        (jn_prime(0, x).powi(2) + jn_prime(1, x).powi(2)) * r
    });
    let angular = rule.integrate(0.0, 1.0, |r| jn(1, mu * r).powi(2) / r);
    let boundary = jn(0, mu).powi(2);
    let mass = rule.integrate(0.0, 1.0, |r| {
        let x = mu * r;
        (jn(0, x).powi(2) + jn(1, x).powi(2)) * r
    });
    (mu * mu * grad + angular + boundary) / mass
}

/// [`rayleigh_quotient_disk`] at the default radial order; equals `mu_D^2`.
pub fn rayleigh_check_disk() -> f64 {
    rayleigh_quotient_disk(RADIAL_ORDER)
}

/// `sqrt(2 pi / |D_R|) = sqrt(2) / R`.
pub fn disk_lower_bound(radius: f64) -> f64 {
    (TAU / (PI * radius * radius)).sqrt()
}
