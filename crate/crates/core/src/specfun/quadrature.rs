//! Adaptive Gauss-Kronrod evaluation of the integral representations of
//! the occupation functions.
//!
//! This is an independent route to θ and θ⁽¹⁾ used to cross-check the
//! digamma/trigamma closed forms. It is slow and is not used by the
//! solvers.

use crate::error::{Error, Result};
use crate::stat_core::Statistics;

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Absolute error target for [`theta_integral_oracle`].
pub const ORACLE_TOLERANCE: f64 = 1e-11;

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = KRONROD_WEIGHTS[7] * fc;
    let mut gauss = GAUSS_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * KRONROD_NODES[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]` to absolute error
/// `tolerance` by repeatedly bisecting the worst segment.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tolerance: f64) -> Result<f64> {
    let mut segments = vec![gauss_kronrod(&f, a, b)];
    loop {
        let (total, estimate) = segments
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if estimate <= tolerance {
            return Ok(total);
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence {
                estimate,
                tolerance,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::QuadratureNonConvergence {
                estimate,
                tolerance,
            });
        }
        segments.push(gauss_kronrod(&f, s.a, mid));
        segments.push(gauss_kronrod(&f, mid, s.b));
    }
}

/// Integrand of the θ representation in the variable `t`, with the
/// removable singularity at `t = 0` written through `expm1`.
fn integrand(kind: Statistics, z: f64, n: f64, order: u8, t: f64) -> f64 {
    let body = match kind {
        Statistics::Bose => (-z * n * t).exp() * -(-(z - 1.0) * t).exp_m1() / t.exp_m1(),
        Statistics::Fermi => {
            if order == 0 {
                (-z * n * t).exp() * -(-z * (1.0 - 2.0 * n) * t).exp_m1() / t.exp_m1()
            } else {
                ((-z * n * t).exp() + (-z * (1.0 - n) * t).exp()) / t.exp_m1()
            }
        }
    };
    if order == 0 {
        body
    } else {
        -t * body
    }
}

/// Evaluates θ (`order = 0`) or θ⁽¹⁾ (`order = 1`) from its integral
/// representation over `t ∈ (0, ∞)`.
///
/// The range is split at `t = 1`; the tail is mapped onto `u = e^{-t}`.
pub fn theta_integral_oracle(kind: Statistics, z: f64, n: f64, order: u8) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(Error::Domain {
            function: "theta_integral_oracle",
            value: z,
            domain: "z >= 1",
        });
    }
    let in_domain = match kind {
        Statistics::Fermi => (0.0..=1.0).contains(&n),
        Statistics::Bose => n >= 0.0 && n.is_finite(),
    };
    if !in_domain {
        return Err(Error::Domain {
            function: "theta_integral_oracle",
            value: n,
            domain: "population in the statistics domain",
        });
    }
    if order > 1 {
        return Err(Error::Domain {
            function: "theta_integral_oracle",
            value: order as f64,
            domain: "order in {0, 1}",
        });
    }
    let f = |t: f64| {
        if t == 0.0 {
            // t -> 0 limits
            match (kind, order) {
                (Statistics::Bose, 0) => z - 1.0,
                (Statistics::Fermi, 0) => z * (1.0 - 2.0 * n),
                (Statistics::Bose, _) => 0.0,
                (Statistics::Fermi, _) => -2.0,
            }
        } else {
            integrand(kind, z, n, order, t)
        }
    };
    let head = integrate(f, 0.0, 1.0, 0.5 * ORACLE_TOLERANCE)?;
    let tail = integrate(
        |u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                integrand(kind, z, n, order, -u.ln()) / u
            }
        },
        0.0,
        (-1.0f64).exp(),
        0.5 * ORACLE_TOLERANCE,
    )?;
    Ok(head + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn decaying_exponential() {
        let v = integrate(|x| (-x).exp(), 0.0, 30.0, 1e-13).unwrap();
        assert!((v - (1.0 - (-30f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn oracle_trivial_zeros() {
        assert_eq!(
            theta_integral_oracle(Statistics::Bose, 1.0, 0.7, 0).unwrap(),
            0.0
        );
        let f = theta_integral_oracle(Statistics::Fermi, 1.0, 0.5, 0).unwrap();
        assert!(f.abs() < 1e-15);
    }

    #[test]
    fn oracle_bose_two_one() {
        // ψ(4) − ψ(3) = 1/3
        let v = theta_integral_oracle(Statistics::Bose, 2.0, 1.0, 0).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-9, "{v}");
        // ψ⁽¹⁾(4) − ψ⁽¹⁾(3) = −1/9
        let d = theta_integral_oracle(Statistics::Bose, 2.0, 1.0, 1).unwrap();
        assert!((d + 1.0 / 9.0).abs() < 1e-9, "{d}");
    }

    #[test]
    fn oracle_rejects_out_of_domain() {
        assert!(theta_integral_oracle(Statistics::Fermi, 4.0, 1.2, 0).is_err());
        assert!(theta_integral_oracle(Statistics::Bose, 0.5, 1.0, 0).is_err());
        assert!(theta_integral_oracle(Statistics::Bose, 2.0, 1.0, 2).is_err());
    }
}
