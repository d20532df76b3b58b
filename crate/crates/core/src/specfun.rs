//! Bessel functions of the first kind for integer order and the roots of the
//! disk secular equation `J_k(mu) = J_{k+1}(mu)`.
//!
//! # The secular equation on fiber `k`
//!
//! On the angular fiber `k >= 0` the disk operator acts on radial pairs
//! `(u_+, u_-)` as
//!
//! ```text
//! d_k = [ 0                        -i d/dr - i (k+1)/r ]
//!       [ -i d/dr + i k/r           0                  ]
//! ```
//!
//! with the boundary coupling `u_-(1) = i u_+(1)`. Take `u_+ = J_k(mu r)` and
//! `u_- = i J_{k+1}(mu r)`. The second row gives
//! `-i mu (J_k'(x) - (k/x) J_k(x)) = i mu J_{k+1}(x)` with `x = mu r`, which is
//! the recurrence `J_k' - (k/x) J_k = -J_{k+1}`. The first row gives
//! `mu (J_{k+1}'(x) + ((k+1)/x) J_{k+1}(x)) = mu J_k(x)`, which is the
//! recurrence `J_{k+1}' + ((k+1)/x) J_{k+1} = J_k`. Solutions regular at the
//! origin are therefore exactly these pairs (the `Y` branch is not square
//! integrable against `r dr` after differentiation), and the boundary
//! coupling reduces to `i J_{k+1}(mu) = i J_k(mu)`, i.e. `J_k(mu) = J_{k+1}(mu)`.
//! For `k = 0` this is the classical `J_0(mu) = J_1(mu)`.
//!
//! The same equation at negative `mu` gives the negative eigenvalues of the
//! fiber. By parity `J_n(-x) = (-1)^n J_n(x)` they are `mu = -x` with
//! `J_k(x) + J_{k+1}(x) = 0`; see [`conjugate_secular_root`].

use crate::{Error, Result};

/// Largest order accepted by the public Bessel entry points.
pub const MAX_ORDER: usize = 50;

/// Step of the sign-bracketing scan used by the root finders.
pub const SCAN_STEP: f64 = 0.05;

/// Upper end of the sign-bracketing scan.
pub const SCAN_CEILING: f64 = 200.0;

/// Width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-13;

// Below this argument the power series is evaluated directly; every term is
// then bounded by the first one, so there is no cancellation.
const SERIES_LIMIT: f64 = 2.0;

const RESCALE_AT: f64 = 1e250;

/// A positive root of `J_k(mu) = J_{k+1}(mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRoot {
    pub k: usize,
    /// 1-based branch index.
    pub m: usize,
    pub mu: f64,
}

impl SecularRoot {
    pub fn residual(&self) -> f64 {
        (jn(self.k, self.mu) - jn(self.k + 1, self.mu)).abs()
    }
}

fn check_args(k: usize, x: f64) -> Result<()> {
    if k > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "Bessel order {k} outside 0..={MAX_ORDER}"
        )));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    Ok(())
}

/// `J_k(x)` for `0 <= k <= 50` and finite `x >= 0`.
pub fn bessel_j(k: usize, x: f64) -> Result<f64> {
    check_args(k, x)?;
    Ok(jn(k, x))
}

/// `J_k'(x)`, from `J_0' = -J_1` and `J_k' = (J_{k-1} - J_{k+1}) / 2`.
pub fn bessel_j_prime(k: usize, x: f64) -> Result<f64> {
    check_args(k, x)?;
    Ok(jn_prime(k, x))
}

/// Unchecked `J_n(x)` for `x >= 0`. Internal callers need orders up to
/// `MAX_ORDER + 2`.
pub(crate) fn jn(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        series(n, x)
    } else {
        miller(n, x)
    }
}

pub(crate) fn jn_prime(n: usize, x: f64) -> f64 {
    if n == 0 {
        -jn(1, x)
    } else {
        0.5 * (jn(n - 1, x) - jn(n + 1, x))
    }
}

/// `J_n` evaluated at a signed argument via `J_n(-x) = (-1)^n J_n(x)`.
pub(crate) fn jn_signed(n: usize, x: f64) -> f64 {
    let v = jn(n, x.abs());
    if x < 0.0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Ascending power series `sum_m (-1)^m (x/2)^(2m+n) / (m! (m+n)!)`.
pub(crate) fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut m = 1usize;
    loop {
        term *= -q / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || m > 300 {
            break;
        }
        m += 1;
    }
    sum
}

/// Miller's backward recurrence normalized by `J_0 + 2 sum J_{2j} = 1`.
fn miller(n: usize, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2;

    let mut next = 0.0; // j_{k+1}
    let mut cur = 1e-30; // j_k
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        if k == n {
            result = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            next /= RESCALE_AT;
            norm /= RESCALE_AT;
            result /= RESCALE_AT;
        }
    }
    // `cur` now holds the unnormalized j_0.
    norm += cur;
    if n == 0 {
        result = cur;
    }
    result / norm
}

/// Locates the `m`-th sign change of `f` on `(0, ceiling]` with a uniform scan
/// and refines it by bisection. Returns `None` when the scan runs out.
pub(crate) fn nth_root<F: Fn(f64) -> f64>(f: F, m: usize, step: f64, ceiling: f64) -> Option<f64> {
    let mut found = 0;
    let mut lo = step;
    let mut f_lo = f(lo);
    while lo < ceiling {
        let hi = lo + step;
        let f_hi = f(hi);
        if f_lo == 0.0 {
            found += 1;
            if found == m {
                return Some(lo);
            }
        } else if f_lo * f_hi < 0.0 {
            found += 1;
            if found == m {
                return Some(bisect(&f, lo, hi, f_lo));
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    let f_hi = f(hi);
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

fn check_root_args(k: usize, m: usize) -> Result<()> {
    if k > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "fiber index {k} outside 0..={MAX_ORDER}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("branch index m starts at 1".into()));
    }
    Ok(())
}

/// The `m`-th positive root of `J_k(mu) - J_{k+1}(mu)`.
pub fn secular_root(k: usize, m: usize) -> Result<SecularRoot> {
    check_root_args(k, m)?;
    let mu = nth_root(|x| jn(k, x) - jn(k + 1, x), m, SCAN_STEP, SCAN_CEILING).ok_or(
        Error::NoBracket {
            k,
            m,
            ceiling: SCAN_CEILING,
        },
    )?;
    Ok(SecularRoot { k, m, mu })
}

/// The `m`-th positive root `x` of `J_k(x) + J_{k+1}(x)`; `-x` is then the
/// `m`-th negative eigenvalue of fiber `k` on the unit disk.
pub fn conjugate_secular_root(k: usize, m: usize) -> Result<f64> {
    check_root_args(k, m)?;
    nth_root(|x| jn(k, x) + jn(k + 1, x), m, SCAN_STEP, SCAN_CEILING).ok_or(Error::NoBracket {
        k,
        m,
        ceiling: SCAN_CEILING,
    })
}

/// The `m`-th positive zero `j_{k,m}` of `J_k`.
pub fn bessel_j_zero(k: usize, m: usize) -> Result<f64> {
    check_root_args(k, m)?;
    nth_root(|x| jn(k, x), m, SCAN_STEP, SCAN_CEILING).ok_or(Error::NoBracket {
        k,
        m,
        ceiling: SCAN_CEILING,
    })
}

/// Principal eigenvalue of the unit disk, the first root of `J_0 = J_1`.
pub fn mu_disk() -> f64 {
    use std::sync::OnceLock;
    static MU: OnceLock<f64> = OnceLock::new();
    *MU.get_or_init(|| {
        secular_root(0, 1)
            .expect("J_0 - J_1 changes sign below 2")
            .mu
    })
}

/// Relative gap below which [`phi`] switches to its diagonal expansion.
pub const PHI_SWITCH: f64 = 1e-8;

/// `(ln a - ln b) / (a - b)`, continued by `1/a` on the diagonal.
pub fn phi(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "phi needs positive finite arguments, got ({a}, {b})"
        )));
    }
    // Order the pair so the result is bitwise symmetric.
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let gap = hi - lo;
    if gap < PHI_SWITCH * hi {
        // 1/lo - (hi - lo)/(2 lo^2) + O(gap^2)
        Ok(1.0 / lo - gap / (2.0 * lo * lo))
    } else {
        Ok((hi.ln() - lo.ln()) / gap)
    }
}
