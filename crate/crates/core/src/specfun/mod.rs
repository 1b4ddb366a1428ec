//! Log-gamma, digamma and trigamma for positive real arguments.
//!
//! All three use the same scheme: shift the argument upward with the
//! recurrence until it is at least [`ASYMPTOTIC_THRESHOLD`], then sum the
//! Bernoulli-number asymptotic series. On `x >= 10` the truncated series
//! is below one ulp, so the accuracy is set by the recurrence sums.
//!
//! Only `x > 0` is supported. Every argument produced by the occupation
//! functions is at least 1, so the reflection branch is never needed and
//! a non-positive argument is reported as a domain error instead.

pub mod quadrature;

use crate::error::{Error, Result};

/// Arguments below this are shifted up by recurrence before the series.
pub const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..8
const LN_GAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k), k = 1..8
const DIGAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

// B_{2k}, k = 1..8
const TRIGAMMA_SERIES: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn check_domain(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: x,
            domain: "x > 0",
        })
    }
}

/// Evaluates `sum_k coeffs[k] * w^k` for `k = 0..`, Horner style.
fn series(coeffs: &[f64], w: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * w + c)
}

/// Natural logarithm of the gamma function, `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_domain("ln_gamma", x)?;
    let mut x = x;
    let mut product = 1.0;
    while x < ASYMPTOTIC_THRESHOLD {
        product *= x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let tail = inv * series(&LN_GAMMA_SERIES, inv * inv);
    let stirling = (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + tail;
    Ok(stirling - product.ln())
}

/// Digamma function `ψ(x) = d ln Γ(x) / dx` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_domain("digamma", x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2 * series(&DIGAMMA_SERIES, inv2);
    Ok(x.ln() - 0.5 / x - tail - shift)
}

/// Trigamma function `ψ⁽¹⁾(x) = d² ln Γ(x) / dx²` for `x > 0`.
pub fn trigamma(x: f64) -> Result<f64> {
    check_domain("trigamma", x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let tail = inv * inv2 * series(&TRIGAMMA_SERIES, inv2);
    Ok(inv + 0.5 * inv2 + tail + shift)
}

/// Harmonic number `H_x = ψ(x + 1) + γ`, defined for real `x > -1`.
pub fn harmonic(x: f64) -> Result<f64> {
    Ok(digamma(x + 1.0)? + EULER_GAMMA)
}
