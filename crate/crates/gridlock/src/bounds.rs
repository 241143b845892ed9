//! Analytic price-of-anarchy bounds for polynomial congestion games and
//! their refinement by the personal-to-congestion cost ratio alpha-star.
//!
//! For load polynomials of degree at most `d`, the base bound evaluates
//!
//! ```text
//!         (k+1)^(2d+1) - k^(d+1) (k+2)^d
//!   ----------------------------------------------
//!   (k+1)^(d+1) - (k+2)^d + (k+1)^d - k^(d+1)
//! ```
//!
//! with `k = floor(root of (x+1)^d = x^(d+1))`. The refined bound for a
//! ratio `a = alpha_star` floors the root of `(1+a) x^(d+1) = (x+1)^d + a`
//! instead, adds `a ((k+1)^(d+1) - k^(d+1))` to the numerator, and uses
//! the denominator `(1+a)((k+1)^(d+1) - k^(d+1)) - (k+2)^d + (k+1)^d`;
//! it collapses to the base bound at `a = 0` and tends to 1 as `a` grows.
//!
//! Both bounds come from a smoothness argument: the pair
//!
//! ```text
//!   mu* = ((k+2)^d - (k+1)^d) / ((k+1)^(d+1) - k^(d+1))
//!   lambda* = (k+1)^d - mu* k^(d+1)
//! ```
//!
//! satisfies `y l(x+1) <= lambda* y l(y) + mu* x l(x)` for every monomial
//! `l` of degree at most `d` and all integer loads, and the bound equals
//! `(lambda* + a) / (1 - mu* + a)`. [`verify_smoothness`] checks that
//! constraint system exactly (rational arithmetic) on a finite load grid,
//! and [`g_profile`] tabulates the inner objective whose integer argmax
//! ties at `k` and `k+1`.
//!
//! `k`-dependent terms are computed as exact integers before the final
//! division. Roots are bisected to 1e-12 and Newton-polished; the
//! absolute residual stays below 1e-10 for the desk-scale degrees
//! (d <= 6) the toolkit targets.

use num::bigint::BigInt;
use num::{One, ToPrimitive};

use crate::rational::Rational;
use crate::{Error, Result};

/// Width tolerance for root bisection.
pub const ROOT_TOLERANCE: f64 = 1e-12;

fn check_degree(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDegree(0));
    }
    Ok(())
}

fn check_alpha(alpha_star: f64) -> Result<()> {
    if !(alpha_star.is_finite() && alpha_star >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha_star must be a finite non-negative real, got {alpha_star}"
        )));
    }
    Ok(())
}

/// `(1 + a) x^(d+1) - (x+1)^d - a`; its unique positive zero is the root
/// the bounds floor.
fn characteristic(d: u32, alpha_star: f64, x: f64) -> f64 {
    (1.0 + alpha_star) * x.powi(d as i32 + 1) - (x + 1.0).powi(d as i32) - alpha_star
}

fn characteristic_derivative(d: u32, alpha_star: f64, x: f64) -> f64 {
    (1.0 + alpha_star) * (d as f64 + 1.0) * x.powi(d as i32)
        - d as f64 * (x + 1.0).powi(d as i32 - 1)
}

/// Positive real solution of `(1 + alpha_star) x^(d+1) = (x+1)^d + alpha_star`.
///
/// Bracketed bisection on `[0, 2^d + 2]` refined to [`ROOT_TOLERANCE`],
/// then Newton-polished. Reduces to [`phi_root`] at `alpha_star = 0`.
pub fn psi_root(d: u32, alpha_star: f64) -> Result<f64> {
    check_degree(d)?;
    check_alpha(alpha_star)?;
    let mut lo = 0.0_f64;
    let mut hi = 2f64.powi(d as i32) + 2.0;
    debug_assert!(characteristic(d, alpha_star, lo) < 0.0);
    debug_assert!(characteristic(d, alpha_star, hi) > 0.0);
    for _ in 0..200 {
        if hi - lo <= ROOT_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if characteristic(d, alpha_star, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut root = 0.5 * (lo + hi);
    for _ in 0..3 {
        let f = characteristic(d, alpha_star, root);
        let df = characteristic_derivative(d, alpha_star, root);
        if df == 0.0 {
            break;
        }
        let next = root - f / df;
        if next.is_finite() && next > 0.0 {
            root = next;
        }
    }
    Ok(root)
}

/// Positive real solution of `(x+1)^d = x^(d+1)`.
pub fn phi_root(d: u32) -> Result<f64> {
    psi_root(d, 0.0)
}

/// Floor of the root, with a conservative tie rule: a root within 1e-9 of
/// an integer yields both adjacent candidates so callers can take the
/// larger bound.
fn floor_candidates(root: f64) -> Vec<u32> {
    let nearest = root.round();
    if (root - nearest).abs() < 1e-9 {
        let m = nearest as u32;
        if m >= 2 {
            vec![m - 1, m]
        } else {
            vec![m.max(1)]
        }
    } else {
        vec![(root.floor() as u32).max(1)]
    }
}

fn bigint_pow(base: u32, exp: u32) -> BigInt {
    num::pow::pow(BigInt::from(base), exp as usize)
}

/// The exact integer ingredients of the bound formulas at a given `k`:
/// the base numerator, `q = (k+1)^(d+1) - k^(d+1)` and
/// `p = (k+2)^d - (k+1)^d`.
fn integer_terms(d: u32, k: u32) -> (BigInt, BigInt, BigInt) {
    let numerator = bigint_pow(k + 1, 2 * d + 1) - bigint_pow(k, d + 1) * bigint_pow(k + 2, d);
    let q = bigint_pow(k + 1, d + 1) - bigint_pow(k, d + 1);
    let p = bigint_pow(k + 2, d) - bigint_pow(k + 1, d);
    (numerator, q, p)
}

fn to_float(value: &BigInt) -> f64 {
    value.to_f64().expect("bound terms fit in f64 range")
}

fn bound_at(d: u32, alpha_star: f64, k: u32) -> f64 {
    let (n0, q, p) = integer_terms(d, k);
    let numerator = to_float(&n0) + alpha_star * to_float(&q);
    let denominator = (1.0 + alpha_star) * to_float(&q) - to_float(&p);
    numerator / denominator
}

/// Base price-of-anarchy bound for degree-`d` polynomial load costs.
pub fn poa_bound_base(d: u32) -> Result<f64> {
    let root = phi_root(d)?;
    let bound = floor_candidates(root)
        .into_iter()
        .map(|k| bound_at(d, 0.0, k))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(bound)
}

/// Full output of the refined bound evaluation.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundResult {
    pub d: u32,
    pub alpha_star: f64,
    /// The positive root whose floor gives `k`.
    pub root: f64,
    pub k: u32,
    pub lambda_tilde: f64,
    pub mu_tilde: f64,
    /// The price-of-anarchy upper bound `(lambda~ + a) / (1 - mu~ + a)`.
    pub bound: f64,
}

/// Refined price-of-anarchy bound using the personal-cost ratio
/// `alpha_star`; equals the base bound at zero and decreases toward 1.
pub fn poa_bound_refined(d: u32, alpha_star: f64) -> Result<BoundResult> {
    let root = psi_root(d, alpha_star)?;
    let mut best: Option<BoundResult> = None;
    for k in floor_candidates(root) {
        let constants = constants_at(d, k);
        let result = BoundResult {
            d,
            alpha_star,
            root,
            k,
            lambda_tilde: crate::rational::to_f64(&constants.lambda_tilde),
            mu_tilde: crate::rational::to_f64(&constants.mu_tilde),
            bound: bound_at(d, alpha_star, k),
        };
        if best.as_ref().is_none_or(|b| result.bound > b.bound) {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one candidate k"))
}

/// The optimal smoothness pair, kept exact.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessConstants {
    pub k: u32,
    pub lambda_tilde: Rational,
    pub mu_tilde: Rational,
}

impl SmoothnessConstants {
    pub fn lambda_f64(&self) -> f64 {
        crate::rational::to_f64(&self.lambda_tilde)
    }

    pub fn mu_f64(&self) -> f64 {
        crate::rational::to_f64(&self.mu_tilde)
    }

    /// `(lambda~ + a) / (1 - mu~ + a)`, the bound this pair certifies.
    pub fn bound_value(&self, alpha_star: f64) -> f64 {
        (self.lambda_f64() + alpha_star) / (1.0 - self.mu_f64() + alpha_star)
    }
}

fn constants_at(d: u32, k: u32) -> SmoothnessConstants {
    let (_, q, p) = integer_terms(d, k);
    let mu_tilde = Rational::new(p, q);
    let lambda_tilde = Rational::from_integer(bigint_pow(k + 1, d))
        - &mu_tilde * Rational::from_integer(bigint_pow(k, d + 1));
    SmoothnessConstants {
        k,
        lambda_tilde,
        mu_tilde,
    }
}

/// The tie-point smoothness pair for `(d, alpha_star)`: exact
/// `mu~* = ((k+2)^d - (k+1)^d) / ((k+1)^(d+1) - k^(d+1))` and
/// `lambda~* = (k+1)^d - mu~* k^(d+1)` with `k` floored from the refined
/// root.
pub fn smoothness_constants(d: u32, alpha_star: f64) -> Result<SmoothnessConstants> {
    let root = psi_root(d, alpha_star)?;
    let mut best: Option<(f64, SmoothnessConstants)> = None;
    for k in floor_candidates(root) {
        let constants = constants_at(d, k);
        let bound = bound_at(d, alpha_star, k);
        if best.as_ref().is_none_or(|(b, _)| bound > *b) {
            best = Some((bound, constants));
        }
    }
    Ok(best.expect("at least one candidate k").1)
}

/// First failure of the load-grid smoothness constraint, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessViolation {
    /// Monomial degree `r` of the violated constraint.
    pub r: u32,
    pub x: u32,
    pub y: u32,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl std::fmt::Display for SmoothnessViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "y·(x+1)^r > lambda·y^(r+1) + mu·x^(r+1) at r={}, x={}, y={} ({} > {})",
            self.r,
            self.x,
            self.y,
            crate::rational::to_string(&self.lhs),
            crate::rational::to_string(&self.rhs)
        )
    }
}

/// Check `y (x+1)^r <= lambda y^(r+1) + mu x^(r+1)` exactly for every
/// monomial degree `r <= d` and all integer `x in [0, x_max]`,
/// `y in [1, y_max]` (`y = 0` holds trivially). Returns the first
/// violating triple in (r, x, y) scan order, or `None` when the grid is
/// clean.
pub fn verify_smoothness(
    d: u32,
    lambda_tilde: &Rational,
    mu_tilde: &Rational,
    x_max: u32,
    y_max: u32,
) -> Result<Option<SmoothnessViolation>> {
    check_degree(d)?;
    if x_max < 1 || y_max < 1 {
        return Err(Error::InvalidArgument(
            "x_max and y_max must be at least 1".into(),
        ));
    }
    // power tables: pow[z][e] = z^e for e <= d + 1
    let z_max = (x_max + 2).max(y_max) as usize;
    let mut pow = vec![vec![BigInt::one(); (d + 2) as usize]; z_max + 1];
    for (z, row) in pow.iter_mut().enumerate() {
        for e in 1..=(d + 1) as usize {
            row[e] = &row[e - 1] * BigInt::from(z);
        }
    }
    for r in 0..=d as usize {
        for x in 0..=x_max as usize {
            for y in 1..=y_max as usize {
                let lhs = Rational::from_integer(BigInt::from(y) * &pow[x + 1][r]);
                let rhs = lambda_tilde * Rational::from_integer(pow[y][r + 1].clone())
                    + mu_tilde * Rational::from_integer(pow[x][r + 1].clone());
                if lhs > rhs {
                    return Ok(Some(SmoothnessViolation {
                        r: r as u32,
                        x: x as u32,
                        y: y as u32,
                        lhs,
                        rhs,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Float-friendly wrapper around [`verify_smoothness`]; the inputs are
/// converted to rationals exactly, so the check is still exact for the
/// values supplied.
pub fn verify_smoothness_f64(
    d: u32,
    lambda_tilde: f64,
    mu_tilde: f64,
    x_max: u32,
    y_max: u32,
) -> Result<Option<SmoothnessViolation>> {
    let lambda = crate::rational::from_f64(lambda_tilde)
        .ok_or_else(|| Error::InvalidArgument(format!("non-finite lambda {lambda_tilde}")))?;
    let mu = crate::rational::from_f64(mu_tilde)
        .ok_or_else(|| Error::InvalidArgument(format!("non-finite mu {mu_tilde}")))?;
    verify_smoothness(d, &lambda, &mu, x_max, y_max)
}

/// Tabulation of `g(mu~, x) = ((x+1)^d - mu~ x^(d+1) + a) / (1 - mu~ + a)`
/// over integer `x`, with its argmax set.
#[derive(Clone, Debug)]
pub struct GProfile {
    pub rows: Vec<(u32, f64)>,
    /// All `x` attaining the maximum within a 1e-9 relative tie window.
    pub argmax: Vec<u32>,
    pub max_value: f64,
}

/// Evaluate the inner objective of the smoothness minimax over
/// `x in [0, x_max]`. Requires `mu_tilde` in the open interval
/// `(0, 1 + alpha_star)`.
pub fn g_profile(d: u32, alpha_star: f64, mu_tilde: f64, x_max: u32) -> Result<GProfile> {
    check_degree(d)?;
    check_alpha(alpha_star)?;
    if !(mu_tilde > 0.0 && mu_tilde < 1.0 + alpha_star) {
        return Err(Error::InvalidArgument(format!(
            "mu_tilde must lie in (0, 1 + alpha_star), got {mu_tilde}"
        )));
    }
    let denominator = 1.0 - mu_tilde + alpha_star;
    let mut rows = Vec::with_capacity(x_max as usize + 1);
    let mut max_value = f64::NEG_INFINITY;
    for x in 0..=x_max {
        let xf = x as f64;
        let value = ((xf + 1.0).powi(d as i32) - mu_tilde * xf.powi(d as i32 + 1) + alpha_star)
            / denominator;
        max_value = max_value.max(value);
        rows.push((x, value));
    }
    let tie = 1e-9 * max_value.abs().max(1.0);
    let argmax = rows
        .iter()
        .filter(|(_, v)| (max_value - v) <= tie)
        .map(|(x, _)| *x)
        .collect();
    Ok(GProfile {
        rows,
        argmax,
        max_value,
    })
}
