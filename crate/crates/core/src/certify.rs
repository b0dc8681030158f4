//! Interval certification of δ(w) for w ≥ 3.
//!
//! Keeping the two leading eigenfunction coefficients and eliminating the
//! second gives the scalar equation F(δ, w) = 0, exact up to a remainder
//! bounded by E(w). F is increasing in δ, so the solutions of F = ±E bracket
//! δ(w).
//!
//! The arithmetic is ordinary floating point. Special-function errors sit
//! around 1e-13 relative, far below the bracket widths involved.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dimension::delta_estimate;
use crate::error::{domain, Error, Result};
use crate::specfun::riemann_zeta_real;

/// Lower bound on |c₀|/‖f‖ for the leading eigenfunction.
pub const LEADING_COEFFICIENT_FLOOR: f64 = 0.31;
pub const BISECTION_TOLERANCE: f64 = 1e-10;
const MAX_PRIOR_ROUNDS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBound {
    pub w: f64,
    pub lower: f64,
    pub upper: f64,
    pub epsilon_used: f64,
    /// Lower bound on δ fed into the error functional.
    pub delta_prior: f64,
    /// Transfer-operator estimate that the interval must contain.
    pub delta_ladder: f64,
}

impl IntervalBound {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn binom2(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

fn check_w(w: f64) -> Result<()> {
    if !(w >= 3.0) {
        return domain(format!("certification needs w ≥ 3 (got {w})"));
    }
    Ok(())
}

/// F(δ, w) = 1 − 2ζ(2δ)/w^{2δ} − [4·C(2δ+1,2)ζ(2+2δ)²/w^{4+4δ}] / [1 − 2C(2δ+3,2)ζ(4+2δ)/w^{4+2δ}].
pub fn f_value(delta: f64, w: f64) -> Result<f64> {
    check_w(w)?;
    if !(delta > 0.5) {
        return domain(format!("F needs δ > 1/2 (got {delta})"));
    }
    let s2 = 2.0 * delta;
    let bracket = 1.0 - 2.0 * binom2(s2 + 3.0) * riemann_zeta_real(4.0 + s2)? / w.powf(4.0 + s2);
    if bracket <= 0.0 {
        return domain(format!("F denominator {bracket} is not positive at δ = {delta}, w = {w}"));
    }
    let z = riemann_zeta_real(2.0 + s2)?;
    let coupling = 4.0 * binom2(s2 + 1.0) * z * z / w.powf(4.0 + 2.0 * s2);
    Ok(1.0 - 2.0 * riemann_zeta_real(s2)? / w.powf(s2) - coupling / bracket)
}

/// The pieces of the error functional at δ = delta_prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBoundParts {
    /// 729ζ(3)ζ(4+2δ)(5−3x²) / (16 w^{9+2δ} √π (1−x²)²), x = 3/(2w²)
    pub e1: f64,
    /// 9ζ(3)ζ(7)·113x⁴ / (w^{3+2δ}√π), the second-coefficient contribution
    pub e2: f64,
    /// 3521/w^{11+2δ}, the rounded majorant of e2
    pub e2_majorant: f64,
    /// 7042ζ(2+2δ) / (w^{13+4δ}(1 − 2w^{−(4+2δ)}C(2δ+3,2)ζ(4+2δ)))
    pub e2_term: f64,
    pub total: f64,
}

pub fn error_bound_parts(w: f64, delta_prior: f64) -> Result<ErrorBoundParts> {
    check_w(w)?;
    if !(delta_prior > 0.5 && delta_prior < 1.0) {
        return domain(format!("delta_prior must lie in (1/2, 1) (got {delta_prior})"));
    }
    let s2 = 2.0 * delta_prior;
    let x = 3.0 / (2.0 * w * w);
    let x2 = x * x;
    let z3 = riemann_zeta_real(3.0)?;
    let z4 = riemann_zeta_real(4.0 + s2)?;
    let sqrt_pi = PI.sqrt();
    let e1 = 729.0 * z3 * z4 * (5.0 - 3.0 * x2) / (16.0 * w.powf(9.0 + s2) * sqrt_pi * (1.0 - x2).powi(2));
    let e2 = 9.0 * z3 * riemann_zeta_real(7.0)? * 113.0 * x2 * x2 / (w.powf(3.0 + s2) * sqrt_pi);
    let e2_majorant = 3521.0 / w.powf(11.0 + s2);
    let bracket = 1.0 - 2.0 * w.powf(-(4.0 + s2)) * binom2(s2 + 3.0) * z4;
    if bracket <= 0.0 {
        return domain(format!("error bound denominator {bracket} is not positive at w = {w}"));
    }
    let e2_term = 2.0 * 3521.0 * riemann_zeta_real(2.0 + s2)? / (w.powf(13.0 + 2.0 * s2) * bracket);
    let total = (e1 + e2_term) / LEADING_COEFFICIENT_FLOOR;
    Ok(ErrorBoundParts {
        e1,
        e2,
        e2_majorant,
        e2_term,
        total,
    })
}

/// Upper bound for |E(w)|, evaluated at the a-priori lower bound for δ.
/// The bound decreases in δ, so any δ ≥ delta_prior is covered.
pub fn error_bound(w: f64, delta_prior: f64) -> Result<f64> {
    Ok(error_bound_parts(w, delta_prior)?.total)
}

/// Solves F(δ, w) = target by bisection on (1/2, 1].
fn solve_f(w: f64, target: f64) -> Result<f64> {
    let g = |d: f64| f_value(d, w).map(|f| f - target);
    let (mut lo, mut hi) = (0.5 + 1e-6, 1.0);
    let (glo, ghi) = (g(lo)?, g(hi)?);
    if !(glo < 0.0 && ghi > 0.0) {
        return Err(Error::Certification(format!(
            "F − {target} does not change sign on (1/2, 1] at w = {w}"
        )));
    }
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn interval_for(w: f64, delta_prior: f64, delta_ladder: f64) -> Result<IntervalBound> {
    let mut prior = delta_prior;
    for _ in 0..MAX_PRIOR_ROUNDS {
        let eps = error_bound(w, prior)?;
        // outward rounding of the bisection tolerance
        let lower = solve_f(w, -eps)? - BISECTION_TOLERANCE;
        let upper = solve_f(w, eps)? + BISECTION_TOLERANCE;
        if prior > lower {
            // the prior claimed more than we can certify: fall back to the weaker claim
            prior = lower;
            continue;
        }
        if !(lower <= delta_ladder && delta_ladder <= upper) {
            return Err(Error::Certification(format!(
                "ladder estimate {delta_ladder} lies outside [{lower}, {upper}] at w = {w}"
            )));
        }
        return Ok(IntervalBound {
            w,
            lower,
            upper,
            epsilon_used: eps,
            delta_prior: prior,
            delta_ladder,
        });
    }
    Err(Error::Prior(format!(
        "prior did not stabilise below the certified lower bound at w = {w}"
    )))
}

/// Brackets δ(w) given an a-priori lower bound on it.
pub fn certify_interval(w: f64, delta_prior: f64) -> Result<IntervalBound> {
    check_w(w)?;
    interval_for(w, delta_prior, delta_estimate(w)?)
}

/// Bootstraps the prior from the transfer-operator estimate, then tightens it
/// once with the certified lower bound.
pub fn certify_default(w: f64) -> Result<IntervalBound> {
    check_w(w)?;
    let delta = delta_estimate(w)?;
    let first = interval_for(w, (delta - 0.05).max(0.51), delta)?;
    interval_for(w, first.lower, delta)
}
