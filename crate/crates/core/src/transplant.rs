//! The disk ground state pulled back to a mapped domain and its Rayleigh
//! quotient `(N1 + N2 + N3) / D`, an upper bound for `mu_1(Omega)^2`.

use serde::Serialize;
use std::f64::consts::TAU;

use crate::conformal::ConformalMap;
use crate::quadrature::GaussLegendre;
use crate::specfun::{jn, jn_prime, mu_disk};
use crate::{Error, Result};

pub const DEFAULT_RADIAL_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransplantResult {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub d: f64,
    /// `sqrt((n1 + n2 + n3) / d)`.
    pub bound: f64,
    pub radial_order: usize,
    pub angular_nodes: usize,
    /// Share of `sum n^2 |c_n|^2` carried by the upper half of the retained
    /// coefficients; a proxy for the truncation error in `d`.
    pub coefficient_tail: f64,
}

/// `int_0^1 J_1(mu_D r)^2 / r dr`.
pub fn angular_radial_factor(rule: &GaussLegendre) -> f64 {
    let mu = mu_disk();
    rule.integrate(0.0, 1.0, |r| jn(1, mu * r).powi(2) / r)
}

/// `int_0^1 r (J_0^2 + J_1^2)(mu_D r) dr`.
pub fn mass_factor(rule: &GaussLegendre) -> f64 {
    let mu = mu_disk();
    rule.integrate(0.0, 1.0, |r| {
        let x = mu * r;
        r * (jn(0, x).powi(2) + jn(1, x).powi(2))
    })
}

pub fn transplant_quotient(map: &ConformalMap, radial_order: usize) -> Result<TransplantResult> {
    if radial_order < 8 {
        return Err(Error::InvalidArgument(format!(
            "radial order must be at least 8, got {radial_order}"
        )));
    }
    let mu = mu_disk();
    let rule = GaussLegendre::new(radial_order);

    let n1 = TAU
        * mu
        * mu
        * rule.integrate(0.0, 1.0, |r| {
            let x = mu * r;
            (jn_prime(0, x).powi(2) + jn_prime(1, x).powi(2)) * r
        });

    let h = TAU / map.n_modes() as f64;
    let bending: f64 = h * map
        .samples()
        .iter()
        .map(|s| (s.curvature * s.speed).powi(2))
        .sum::<f64>();
    let n2 = angular_radial_factor(&rule) * bending;

    let n3 = TAU * jn(0, mu).powi(2);

    let d = rule.integrate(0.0, 1.0, |r| {
        let x = mu * r;
        (jn(0, x).powi(2) + jn(1, x).powi(2)) * TAU * map.mean_square_derivative(r) * r
    });

    let weights: Vec<f64> = map
        .coefficients()
        .iter()
        .enumerate()
        .map(|(n, c)| (n * n) as f64 * c.norm_sqr())
        .collect();
    let total: f64 = weights.iter().sum();
    let coefficient_tail = weights[weights.len() / 2..].iter().sum::<f64>() / total;

    Ok(TransplantResult {
        n1,
        n2,
        n3,
        d,
        bound: ((n1 + n2 + n3) / d).sqrt(),
        radial_order,
        angular_nodes: map.n_modes(),
        coefficient_tail,
    })
}

/// `(|Omega| + pi |c_1|^2) int_0^1 H(r) dr` with `H(r) = r (J_0^2 + J_1^2)(mu_D r)`,
/// a lower bound for `D`.
pub fn denominator_lower_bound(area: f64, c1: f64, radial_order: usize) -> f64 {
    (area + std::f64::consts::PI * c1 * c1) * mass_factor(&GaussLegendre::new(radial_order))
}

/// `2 pi kappa_star^2 ||f'||^2 int_0^1 J_1^2 / r dr`, an upper bound for `N2`.
pub fn n2_upper_bound(kappa_star: f64, hardy: f64, radial_order: usize) -> f64 {
    TAU * (kappa_star * hardy).powi(2) * angular_radial_factor(&GaussLegendre::new(radial_order))
}

/// Smallest sampled value of `H'(r) = J_0(mu_D r)^2 - J_1(mu_D r)^2` on the
/// grid `r_j = j / samples`, `0 < j < samples`.
pub fn h_monotonicity_check(samples: usize) -> Result<f64> {
    if samples < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 samples, got {samples}"
        )));
    }
    let mu = mu_disk();
    Ok((1..samples)
        .map(|j| h_prime(j as f64 / samples as f64, mu))
        .fold(f64::INFINITY, f64::min))
}

/// `H'(r)`.
pub fn h_prime(r: f64, mu: f64) -> f64 {
    jn(0, mu * r).powi(2) - jn(1, mu * r).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{hardy_norm_fprime, theodorsen_map};
    use crate::diskspec::rayleigh_check_disk;
    use crate::geometry::{geometry_report, DomainSpec};

    #[test]
    fn unit_disk_is_the_equality_case() {
        let map = theodorsen_map(&DomainSpec::disk(1.0).unwrap(), 256).unwrap();
        let t = transplant_quotient(&map, 64).unwrap();
        assert!((t.bound - mu_disk()).abs() < 1e-7);
        assert!((t.bound.powi(2) - rayleigh_check_disk()).abs() < 1e-12);
        assert!((t.n3 - TAU * jn(0, mu_disk()).powi(2)).abs() == 0.0);
    }

    #[test]
    fn scaled_disk() {
        let map = theodorsen_map(&DomainSpec::disk(2.5).unwrap(), 128).unwrap();
        let t = transplant_quotient(&map, 64).unwrap();
        assert!((t.bound - mu_disk() / 2.5).abs() < 1e-7);
    }

    #[test]
    fn ellipse_radial_refinement() {
        let map = theodorsen_map(&DomainSpec::ellipse(1.1, 1.0 / 1.1).unwrap(), 512).unwrap();
        let coarse = transplant_quotient(&map, 64).unwrap();
        let fine = transplant_quotient(&map, 128).unwrap();
        assert!((coarse.bound - fine.bound).abs() < 1e-7);
        assert!(coarse.n1 > 0.0 && coarse.n2 > 0.0 && coarse.n3 > 0.0 && coarse.d > 0.0);
    }

    #[test]
    fn proof_estimates_hold() {
        let spec = DomainSpec::ellipse(1.3, 0.8).unwrap();
        let map = theodorsen_map(&spec, 512).unwrap();
        let g = geometry_report(&spec, 2048).unwrap();
        let hardy = hardy_norm_fprime(&map).value;
        let t = transplant_quotient(&map, 64).unwrap();
        let c1 = map.derivative_at_origin();
        assert!(t.d > denominator_lower_bound(g.area, c1, 64) * (1.0 + 1e-6));
        assert!(t.n2 < n2_upper_bound(g.kappa_star, hardy, 64));
        assert!(t.bound > (TAU / g.area).sqrt());
    }

    #[test]
    fn h_is_increasing_on_the_unit_interval() {
        let mu = mu_disk();
        assert!((h_prime(1e-9, mu) - 1.0).abs() < 1e-12);
        assert!(h_prime(1.0, mu).abs() < 1e-10);
        assert!(h_monotonicity_check(10_000).unwrap() > 0.0);
        assert!(h_monotonicity_check(10).is_err());
    }
}
