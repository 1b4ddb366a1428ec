//! Self-verification: oracle checks, invariants along the preset sweeps
//! and the preset regression table.

use rayon::prelude::*;

use super::presets::{FigurePreset, PresetSetup};
use super::report::{sweep_points, SweepConfig, SweepPoint, SystemConfig};
use crate::specfun::quadrature::theta_integral_oracle;
use crate::specfun::{digamma, ln_gamma, trigamma, EULER_GAMMA};
use crate::stat_core::{entropy_level, theta, theta_deriv, Statistics};
use crate::two_level::{cv_has_interior_maximum, TwoLevelParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} {}\n", c.name, c.detail));
        }
        let failed = self.failures();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed.len()
        ));
        for c in failed {
            out.push_str(&format!("failed: {}\n", c.name));
        }
        out
    }
}

/// Points used along each preset sweep.
pub const VERIFY_SWEEP_POINTS: usize = 120;

/// Runs every check against the given preset table.
pub fn run_verification(table: &[FigurePreset]) -> VerifyReport {
    let mut checks = Vec::new();
    checks.extend(special_function_checks());
    checks.extend(statistics_checks());
    for preset in table {
        checks.extend(preset_checks(preset));
    }
    checks.push(cv_peak_check());
    VerifyReport { checks }
}

fn worst<I: IntoIterator<Item = f64>>(errors: I) -> f64 {
    errors.into_iter().fold(0.0, |m: f64, e| if e.is_nan() { f64::INFINITY } else { m.max(e) })
}

fn bounded(name: &str, err: f64, tol: f64) -> CheckResult {
    CheckResult::new(name, err <= tol, format!("max_error={err:.3e} tolerance={tol:.0e}"))
}

fn special_function_checks() -> Vec<CheckResult> {
    use std::f64::consts::PI;
    let closed = [
        (digamma(1.0), -EULER_GAMMA),
        (digamma(0.5), -EULER_GAMMA - 2.0 * std::f64::consts::LN_2),
        (trigamma(1.0), PI * PI / 6.0),
        (trigamma(0.5), PI * PI / 2.0),
        (ln_gamma(5.0), 24f64.ln()),
        (ln_gamma(0.5), 0.5 * PI.ln()),
    ];
    let closed_err = worst(closed.iter().map(|(got, want)| match got {
        Ok(g) => (g - want).abs(),
        Err(_) => f64::INFINITY,
    }));
    let xs: Vec<f64> = (1..=200).map(|i| 0.25 * i as f64).collect();
    let rec_psi = worst(xs.iter().map(|&x| {
        (digamma(x + 1.0).unwrap_or(f64::NAN) - digamma(x).unwrap_or(f64::NAN) - 1.0 / x).abs()
    }));
    let rec_tri = worst(xs.iter().map(|&x| {
        (trigamma(x + 1.0).unwrap_or(f64::NAN) - trigamma(x).unwrap_or(f64::NAN) + 1.0 / (x * x)).abs()
    }));
    let h = 1e-4;
    let fd = worst(xs.iter().filter(|&&x| x >= 0.5).map(|&x| {
        let d = (digamma(x + h).unwrap_or(f64::NAN) - digamma(x - h).unwrap_or(f64::NAN)) / (2.0 * h);
        (d - trigamma(x).unwrap_or(f64::NAN)).abs()
    }));
    vec![
        bounded("specfun/closed-forms", closed_err, 1e-13),
        bounded("specfun/digamma-recurrence", rec_psi, 1e-11),
        bounded("specfun/trigamma-recurrence", rec_tri, 1e-10),
        bounded("specfun/digamma-derivative", fd, 1e-6),
    ]
}

fn statistics_checks() -> Vec<CheckResult> {
    let kinds = [Statistics::Fermi, Statistics::Bose];
    let mut cases = Vec::new();
    for &kind in &kinds {
        for z in [1.0, 1.5, 2.0, 7.0, 16.0, 63.5] {
            for k in 0..=4 {
                let n = match kind {
                    Statistics::Fermi => 0.25 * k as f64,
                    Statistics::Bose => 0.9 * k as f64,
                };
                cases.push((kind, z, n));
            }
        }
    }
    let oracle = worst(cases.par_iter().map(|&(kind, z, n)| {
        let closed0 = theta(kind, z, n);
        let closed1 = theta_deriv(kind, z, n);
        let q0 = theta_integral_oracle(kind, z, n, 0);
        let q1 = theta_integral_oracle(kind, z, n, 1);
        match (closed0, closed1, q0, q1) {
            (Ok(a), Ok(b), Ok(c), Ok(d)) => (a - c).abs().max((b - d).abs()),
            _ => f64::INFINITY,
        }
    }).collect::<Vec<_>>());

    let mut monotone = true;
    for &kind in &kinds {
        for z in [1.5, 4.0, 30.0] {
            let top = if kind == Statistics::Fermi { 1.0 } else { 10.0 };
            let ns: Vec<f64> = (0..=100).map(|i| top * i as f64 / 100.0).collect();
            let th: Vec<f64> = ns.iter().map(|&n| theta(kind, z, n).unwrap_or(f64::NAN)).collect();
            monotone &= th.windows(2).all(|w| w[1] < w[0]);
        }
    }

    // ln C(z, k) and ln C(k + z − 1, k) by summing logarithms
    let ln_binom = |a: u32, b: u32| -> f64 { (1..=b).map(|i| ((a - b + i) as f64 / i as f64).ln()).sum() };
    let mut integer_err: f64 = 0.0;
    for z in 1..=30u32 {
        for k in 0..=z {
            let n = k as f64 / z as f64;
            let f = entropy_level(Statistics::Fermi, z as f64, n).unwrap_or(f64::NAN);
            integer_err = integer_err.max((f - ln_binom(z, k)).abs());
        }
        for k in 0..=3 * z {
            let n = k as f64 / z as f64;
            let b = entropy_level(Statistics::Bose, z as f64, n).unwrap_or(f64::NAN);
            integer_err = integer_err.max((b - ln_binom(k + z - 1, k)).abs());
        }
    }

    vec![
        bounded("quadrature/theta-oracle", oracle, 1e-8),
        CheckResult::new("stat_core/theta-monotone", monotone, ""),
        bounded("stat_core/integer-entropy", integer_err, 1e-10),
    ]
}

/// Regression values plus, for sweep presets, the invariants along the
/// sweep.
pub fn preset_checks(preset: &FigurePreset) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut source = preset.source_values();
    let mut setup = preset.setup_values();
    source.sort_by(|a, b| a.0.cmp(&b.0));
    setup.sort_by(|a, b| a.0.cmp(&b.0));
    out.push(CheckResult::new(
        format!("preset/{}/parameters", preset.id),
        source == setup,
        format!("source='{}'", preset.source),
    ));
    for exp in &preset.expected {
        let name = format!("preset/{}/{}", preset.id, exp.key);
        let outcome = exp
            .value()
            .and_then(|want| Ok((want, exp.tolerance()?)))
            .and_then(|(want, tol)| Ok((want, tol, preset.evaluate(exp.quantity)?)));
        out.push(match outcome {
            Ok((want, tol, got)) => CheckResult::new(
                name,
                (got - want).abs() <= tol,
                format!("got={got:.6} expected={} tolerance={tol:.1e}", exp.printed),
            ),
            Err(e) => CheckResult::new(name, false, format!("error: {e}")),
        });
    }
    if let PresetSetup::Sweep {
        z1,
        z2,
        n,
        tau_min,
        tau_max,
    } = preset.setup
    {
        let cfg = SweepConfig {
            system: SystemConfig::new(preset.statistics, TwoLevelParams::new(z1, z2, n, 1.0)),
            tau_min,
            tau_max,
            points: VERIFY_SWEEP_POINTS,
            log: true,
            raw: false,
        };
        let prefix = format!("sweep/{}", preset.id);
        match (sweep_points(&cfg), cfg.system.system()) {
            (Ok(points), Ok(system)) => out.extend(sweep_invariants(&prefix, &points, &system)),
            (Err(e), _) | (_, Err(e)) => out.push(CheckResult::new(format!("{prefix}/solve"), false, format!("error: {e}"))),
        }
    }
    out
}

fn sweep_invariants(prefix: &str, points: &[SweepPoint], system: &crate::SystemSpec) -> Vec<CheckResult> {
    let n = system.n_total;
    let conservation = worst(points.iter().map(|p| (p.state.particle_number(system) - n).abs() / n.max(1.0)));
    let complementarity = worst(points.iter().map(|p| p.state.complementarity_residual(system)));
    let monotone = points
        .windows(2)
        .all(|w| w[1].state.entropy >= w[0].state.entropy - 1e-12 * w[0].state.entropy.max(1.0));
    let identity = worst(points.iter().filter_map(|p| {
        let r = &p.response;
        let (cp, a, g) = (r.cp?, r.alpha_p?, r.gamma_t?);
        let rhs = p.state.temperature * system.volume * a * a / g;
        Some((cp - r.cv - rhs).abs() / cp.max(1.0))
    }));
    let stable = points.iter().all(|p| {
        let r = &p.response;
        r.cv >= 0.0 && r.gamma_t.is_none_or(|g| g > 0.0) && r.cp.is_none_or(|cp| cp >= r.cv - 1e-9 * cp.max(1.0))
    });
    vec![
        bounded(&format!("{prefix}/conservation"), conservation, 1e-10),
        bounded(&format!("{prefix}/complementarity"), complementarity, 1e-10),
        CheckResult::new(format!("{prefix}/entropy-monotone"), monotone, ""),
        bounded(&format!("{prefix}/identity"), identity, 1e-8),
        CheckResult::new(format!("{prefix}/stability"), stable, ""),
    ]
}

fn cv_peak_check() -> CheckResult {
    let p = TwoLevelParams::new(16.0, 128.0, 34.0, 1.0);
    match cv_has_interior_maximum(&p, Statistics::Fermi, 400) {
        Ok(found) => CheckResult::new("sweep/fig7a/cv-interior-maximum", found, ""),
        Err(e) => CheckResult::new("sweep/fig7a/cv-interior-maximum", false, format!("error: {e}")),
    }
}
