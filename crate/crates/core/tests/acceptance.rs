//! Acceptance criteria 1 to 7.
//!
//! Prints one `PASS`/`FAIL` line per criterion, followed by the individual
//! comparisons, and exits non-zero if any criterion fails.

use std::process::ExitCode;

use levelstat::cli::report::{sweep_points, SweepConfig, SystemConfig};
use levelstat::specfun::quadrature::theta_integral_oracle;
use levelstat::stat_core::{entropy_level, theta, theta_deriv};
use levelstat::two_level::{
    capacity_jumps, char_temps, curve_root_in_eta, cv_has_interior_maximum, eta_transitions, limiting_entropy,
    zero_t_entropy, Curve, RegionClass,
};
use levelstat::{high_temperature_limit, solve_mu, Level, ResponseSet, Statistics, SystemSpec, TwoLevelParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use Statistics::{Bose, Fermi};

const SEED: u64 = 0x1e5e_1574;

#[derive(Default)]
struct Criterion {
    lines: Vec<String>,
    failed: usize,
    total: usize,
}

impl Criterion {
    fn record(&mut self, ok: bool, line: String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
        }
        self.lines.push(format!("    {} {line}", if ok { "ok  " } else { "MISS" }));
    }

    fn close(&mut self, name: &str, tol: f64, got: Option<f64>, want: f64) {
        match got {
            Some(g) => {
                let ok = (g - want).abs() <= tol;
                self.record(ok, format!("{name}: got {g:.6}, expected {want} ± {tol:.3e}"));
            }
            None => self.record(false, format!("{name}: not computed, expected {want}")),
        }
    }

    fn bound(&mut self, name: &str, err: f64, tol: f64) {
        self.record(err <= tol, format!("{name}: {err:.3e} (limit {tol:.0e})"));
    }

    fn flag(&mut self, name: &str, ok: bool, detail: String) {
        self.record(ok, format!("{name}: {detail}"));
    }

    fn passed(&self) -> bool {
        self.failed == 0 && self.total > 0
    }
}

fn params(z1: f64, z2: f64, n: f64) -> TwoLevelParams {
    TwoLevelParams::new(z1, z2, n, 1.0)
}

fn tau(p: &TwoLevelParams, kind: Statistics, curve: Curve) -> Option<f64> {
    char_temps(p, kind)
        .present()
        .into_iter()
        .find(|(name, _)| *name == curve.name())
        .map(|(_, t)| t / p.delta_eps)
}

fn characteristic_temperatures() -> Criterion {
    let mut c = Criterion::default();
    let tol = 0.005;
    let cases = [
        ("fig3a tau_B1", Bose, params(8.0, 96.0, 16.0), Curve::B1, 0.21),
        ("fig3b tau_B1", Bose, params(8.0, 256.0, 8.0), Curve::B1, 0.18),
        ("fig3b tau_B2", Bose, params(8.0, 256.0, 8.0), Curve::B2, 1.2),
        ("fig6a tau_F1", Fermi, params(16.0, 1.0, 14.0), Curve::F1, 0.36),
        ("fig6a tau_F4", Fermi, params(16.0, 1.0, 14.0), Curve::F4, 2.88),
        ("fig6b tau_F1", Fermi, params(16.0, 16.0, 14.0), Curve::F1, 0.19),
        ("fig6c tau_F1", Fermi, params(16.0, 1000.0, 14.0), Curve::F1, 0.11),
        ("fig6c tau_F2", Fermi, params(16.0, 1000.0, 14.0), Curve::F2, 1.19),
        ("fig7a tau_F3", Fermi, params(16.0, 128.0, 34.0), Curve::F3, 0.19),
        ("fig7b tau_F3", Fermi, params(16.0, 2400.0, 34.0), Curve::F3, 0.12),
        ("fig7b tau_F2", Fermi, params(16.0, 2400.0, 34.0), Curve::F2, 1.18),
    ];
    for (name, kind, p, curve, want) in cases {
        c.close(name, tol, tau(&p, kind, curve), want);
    }
    c
}

fn entropy_plateaus() -> Criterion {
    let mut c = Criterion::default();
    let tol = 0.05;
    let zero = [
        ("fig3a S_B1", Bose, params(8.0, 96.0, 16.0), 12.41),
        ("fig3b S_B1", Bose, params(8.0, 256.0, 8.0), 8.77),
        ("fig6a S_F1", Fermi, params(16.0, 1.0, 14.0), 4.8),
        ("fig6b S_F1", Fermi, params(16.0, 16.0, 14.0), 4.8),
        ("fig6c S_F1", Fermi, params(16.0, 1000.0, 14.0), 4.8),
        ("fig7a S_F1", Fermi, params(16.0, 128.0, 34.0), 49.7),
        ("fig7b S_F1", Fermi, params(16.0, 2400.0, 34.0), 103.6),
    ];
    for (name, kind, p, want) in zero {
        c.close(name, tol, zero_t_entropy(&p, kind).ok(), want);
    }
    let limit = [
        ("fig3a S_Binf", Bose, params(8.0, 96.0, 16.0), 43.74),
        ("fig3b S_B2", Bose, params(8.0, 256.0, 8.0), 33.87),
        ("fig6a S_F2", Fermi, params(16.0, 1.0, 14.0), 6.3),
        ("fig6b S_Finf", Fermi, params(16.0, 16.0, 14.0), 18.7),
        ("fig6c S_F2", Fermi, params(16.0, 1000.0, 14.0), 71.4),
        ("fig7a S_Finf", Fermi, params(16.0, 128.0, 34.0), 74.7),
        ("fig7b S_F2", Fermi, params(16.0, 2400.0, 34.0), 175.8),
    ];
    for (name, kind, p, want) in limit {
        c.close(name, tol, limiting_entropy(&p, kind).ok().map(|s| s.0), want);
    }
    c
}

#[derive(Clone, Copy)]
enum Jump {
    Cv,
    Cp,
    CpMinusCv,
}

fn capacity_jump_values() -> Criterion {
    let mut c = Criterion::default();
    let cases = [
        ("fig3a", Bose, params(8.0, 96.0, 16.0), Curve::B1, Jump::Cv, 13.84),
        ("fig3a", Bose, params(8.0, 96.0, 16.0), Curve::B1, Jump::Cp, 14.92),
        ("fig3b", Bose, params(8.0, 256.0, 8.0), Curve::B1, Jump::Cv, 17.99),
        ("fig3b", Bose, params(8.0, 256.0, 8.0), Curve::B1, Jump::Cp, 21.49),
        ("fig3b", Bose, params(8.0, 256.0, 8.0), Curve::B2, Jump::Cv, -0.43),
        ("fig3b", Bose, params(8.0, 256.0, 8.0), Curve::B2, Jump::Cp, -0.44),
        ("fig6a", Fermi, params(16.0, 1.0, 14.0), Curve::F1, Jump::Cv, 2.75),
        ("fig6a", Fermi, params(16.0, 1.0, 14.0), Curve::F1, Jump::Cp, 2.83),
        ("fig6a", Fermi, params(16.0, 1.0, 14.0), Curve::F4, Jump::Cv, -0.045),
        ("fig6a", Fermi, params(16.0, 1.0, 14.0), Curve::F4, Jump::CpMinusCv, -1.6e-4),
        ("fig6b", Fermi, params(16.0, 16.0, 14.0), Curve::F1, Jump::Cv, 12.14),
        ("fig6b", Fermi, params(16.0, 16.0, 14.0), Curve::F1, Jump::Cp, 13.02),
        ("fig6c", Fermi, params(16.0, 1000.0, 14.0), Curve::F1, Jump::Cv, 40.4),
        ("fig6c", Fermi, params(16.0, 1000.0, 14.0), Curve::F1, Jump::Cp, 46.2),
        ("fig6c", Fermi, params(16.0, 1000.0, 14.0), Curve::F2, Jump::Cv, -0.397),
        ("fig6c", Fermi, params(16.0, 1000.0, 14.0), Curve::F2, Jump::Cp, -0.400),
        ("fig7a", Fermi, params(16.0, 128.0, 34.0), Curve::F3, Jump::Cv, 15.10),
        ("fig7a", Fermi, params(16.0, 128.0, 34.0), Curve::F3, Jump::Cp, 15.45),
        ("fig7b", Fermi, params(16.0, 2400.0, 34.0), Curve::F3, Jump::Cv, 38.57),
        ("fig7b", Fermi, params(16.0, 2400.0, 34.0), Curve::F3, Jump::Cp, 40.01),
        ("fig7b", Fermi, params(16.0, 2400.0, 34.0), Curve::F2, Jump::Cv, -0.414),
        ("fig7b", Fermi, params(16.0, 2400.0, 34.0), Curve::F2, Jump::Cp, -0.415),
    ];
    for (fig, kind, p, curve, which, want) in cases {
        let want: f64 = want;
        let jump = capacity_jumps(&p, kind)
            .ok()
            .and_then(|js| js.into_iter().find(|j| j.name == curve.name()));
        let got = jump.and_then(|j| match which {
            Jump::Cv => Some(j.delta_cv()),
            Jump::Cp => j.delta_cp(),
            Jump::CpMinusCv => j.delta_cp().map(|cp| cp - j.delta_cv()),
        });
        let label = match which {
            Jump::Cv => "dC_V",
            Jump::Cp => "dC_p",
            Jump::CpMinusCv => "dC_p-dC_V",
        };
        let tol = (0.01 * want.abs()).max(0.01);
        c.close(&format!("{fig} {label} at {}", curve.name()), tol, got, want);
    }
    c
}

fn forbidden_edge(n: f64, phi: f64) -> Option<f64> {
    eta_transitions(Fermi, n, phi, 1e-3, 1e4, 2000)
        .into_iter()
        .find(|t| t.from == Some(RegionClass::FermiForbidden))
        .map(|t| t.eta)
}

fn region_geometry() -> Criterion {
    let mut c = Criterion::default();
    let grid = 0.01;
    let root = |curve, n, phi| curve_root_in_eta(curve, n, phi, 1e-3, 1e4);
    c.close("fig1 a: eta of B1 as phi -> 0", grid, root(Curve::B1, 2.0, 1e-6), 0.22);
    c.close("fig1 b: eta of B2 as phi -> 0", grid, root(Curve::B2, 2.0, 1e-6), 4.5);
    // z1 = N/φ ≥ 1 ends the plane at φ = N
    let phi_max = 2.0;
    c.close("fig1 c: phi", grid, Some(phi_max), 2.0);
    c.close("fig1 c: eta of B1", grid, root(Curve::B1, 2.0, phi_max), 1.0);
    c.close("fig1 c: eta of B2", grid, root(Curve::B2, 2.0, phi_max), 1.0);

    c.close("fig2 eta_1", 0.01, root(Curve::B1, 2.0, 0.25), 0.33);
    c.close("fig2 eta_2", 0.01, root(Curve::B2, 2.0, 0.25), 4.02);

    let rel = |want: f64| 0.01 * want;
    let fermi = [
        ("fig5a eta_1", Some(Curve::F1), 2.0, 0.125, 0.17),
        ("fig5a eta_2", Some(Curve::F2), 2.0, 0.125, 4.72),
        ("fig5b eta_4", Some(Curve::F4), 14.0, 0.875, 0.086),
        ("fig5b eta_2", Some(Curve::F2), 14.0, 0.875, 27.5),
        ("fig5c eta_b", None, 18.0, 1.125, 0.125),
        ("fig5c eta_4", Some(Curve::F4), 18.0, 1.125, 0.22),
        ("fig5c eta_2", Some(Curve::F2), 18.0, 1.125, 35.1),
        ("fig5d eta_b", None, 40.0, 2.5, 1.5),
        ("fig5d eta_3", Some(Curve::F3), 40.0, 2.5, 1.52),
        ("fig5d eta_2", Some(Curve::F2), 40.0, 2.5, 76.9),
    ];
    for (name, curve, n, phi, want) in fermi {
        let got = match curve {
            Some(curve) => root(curve, n, phi),
            None => forbidden_edge(n, phi),
        };
        c.close(name, rel(want), got, want);
    }
    c
}

fn high_t_populations() -> Criterion {
    let mut c = Criterion::default();
    let p = params(8.0, 96.0, 16.0);
    let occ = p
        .system(Bose)
        .and_then(|s| high_temperature_limit(&s))
        .map(|o| o.iter().map(|x| x.n).collect::<Vec<_>>())
        .unwrap_or_default();
    c.close("fig3a n_1inf", 0.005, occ.first().copied(), 0.08);
    c.close("fig3a n_2inf", 0.005, occ.get(1).copied(), 0.16);
    let total = match occ.as_slice() {
        [a, b] => 8.0 * a + 96.0 * b,
        _ => f64::NAN,
    };
    c.bound("8 n_1inf + 96 n_2inf - 16", (total - 16.0).abs(), 1e-9);
    c
}

/// Random system with 2 to 4 levels and an interior temperature.
fn random_system(rng: &mut StdRng) -> SystemSpec {
    loop {
        let kind = if rng.gen_bool(0.5) { Fermi } else { Bose };
        let count = rng.gen_range(2..=4);
        let mut xi = 0.0;
        let levels: Vec<Level> = (0..count)
            .map(|_| {
                xi += rng.gen_range(0.2..2.0);
                Level::new(xi, rng.gen_range(1.0..60.0f64).round().max(1.0) + rng.gen_range(0.0..1.0))
            })
            .collect();
        let capacity: f64 = levels.iter().map(|l| l.z).sum();
        let n = match kind {
            Fermi => rng.gen_range(0.05..0.95) * capacity,
            Bose => rng.gen_range(0.5..40.0),
        };
        let alpha = 2.0 / 3.0;
        let volume = rng.gen_range(0.5..2.0);
        if let Ok(s) = SystemSpec::new(kind, levels, n, volume, alpha) {
            return s;
        }
    }
}

/// A solved state with at least two active levels, away from switching
/// points.
fn random_interior_state(rng: &mut StdRng) -> (SystemSpec, f64) {
    loop {
        let system = random_system(rng);
        let t = 10f64.powf(rng.gen_range(-1.3..1.3));
        let Ok(state) = solve_mu(t, &system) else { continue };
        if state.active_count < 2 || state.reservoir.is_some() {
            continue;
        }
        let pins = state.pinning();
        let same = [t * (1.0 - 1e-3), t * (1.0 + 1e-3)]
            .iter()
            .all(|&u| solve_mu(u, &system).map(|s| s.pinning() == pins).unwrap_or(false));
        if same {
            return (system, t);
        }
    }
}

fn property_suite() -> Vec<Criterion> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut worst_complementarity: f64 = 0.0;
    let mut solved = 0usize;

    let mut a = Criterion::default();
    let z = 1e4;
    let mut err_f: f64 = 0.0;
    let mut err_b: f64 = 0.0;
    for i in 0..=200 {
        let nf = 0.05 + 0.9 * i as f64 / 200.0;
        let nb = 0.05 * (20.0f64 / 0.05).powf(i as f64 / 200.0);
        err_f = err_f.max((theta(Fermi, z, nf).unwrap_or(f64::NAN) - ((1.0 - nf) / nf).ln()).abs());
        err_b = err_b.max((theta(Bose, z, nb).unwrap_or(f64::NAN) - ((nb + 1.0) / nb).ln()).abs());
    }
    a.bound("fermi, z=1e4, n in [0.05, 0.95]", err_f, 2e-4);
    a.bound("bose, z=1e4, n in [0.05, 20]", err_b, 2e-4);

    let mut b = Criterion::default();
    let mut worst_fd: f64 = 0.0;
    for _ in 0..50 {
        let (system, t) = random_interior_state(&mut rng);
        let h = 1e-4 * t;
        let s = |u: f64| solve_mu(u, &system).map(|st| st.entropy).unwrap_or(f64::NAN);
        let state = solve_mu(t, &system).expect("resolved above");
        worst_complementarity = worst_complementarity.max(state.complementarity_residual(&system));
        solved += 3;
        let cv = ResponseSet::compute(&state, &system).cv;
        let fd = t * (s(t + h) - s(t - h)) / (2.0 * h);
        worst_fd = worst_fd.max((cv - fd).abs() / cv.abs());
    }
    b.bound("C_V vs T dS/dT, 50 states, relative", worst_fd, 1e-4);

    let mut c = Criterion::default();
    let mut worst_id: f64 = 0.0;
    for _ in 0..100 {
        let (system, t) = random_interior_state(&mut rng);
        let state = solve_mu(t, &system).expect("resolved above");
        worst_complementarity = worst_complementarity.max(state.complementarity_residual(&system));
        solved += 1;
        let r = ResponseSet::compute(&state, &system);
        let err = match (r.cp, r.alpha_p, r.gamma_t) {
            (Some(cp), Some(ap), Some(gt)) => {
                let rhs = t * system.volume * ap * ap / gt;
                ((cp - r.cv) - rhs).abs() / (cp - r.cv).abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
            }
            _ => f64::INFINITY,
        };
        worst_id = worst_id.max(err);
    }
    c.bound("C_p - C_V = T V alpha_p^2 / gamma_T, 100 states, relative", worst_id, 1e-8);

    let mut e = Criterion::default();
    for (id, kind, p) in [
        ("fig3a", Bose, params(8.0, 96.0, 16.0)),
        ("fig3b", Bose, params(8.0, 256.0, 8.0)),
        ("fig6a", Fermi, params(16.0, 1.0, 14.0)),
        ("fig6b", Fermi, params(16.0, 16.0, 14.0)),
        ("fig6c", Fermi, params(16.0, 1000.0, 14.0)),
        ("fig7a", Fermi, params(16.0, 128.0, 34.0)),
        ("fig7b", Fermi, params(16.0, 2400.0, 34.0)),
    ] {
        let cfg = SweepConfig {
            system: SystemConfig::new(kind, p),
            tau_min: 0.01,
            tau_max: 10.0,
            points: 400,
            log: true,
            raw: false,
        };
        match sweep_points(&cfg) {
            Ok(points) => {
                let system = cfg.system.system().expect("valid preset");
                for pt in &points {
                    worst_complementarity = worst_complementarity.max(pt.state.complementarity_residual(&system));
                }
                solved += points.len();
                let drops = points
                    .windows(2)
                    .filter(|w| w[1].state.entropy < w[0].state.entropy - 1e-12 * w[0].state.entropy.max(1.0))
                    .count();
                e.flag(&format!("{id} sweep, 400 points"), drops == 0, format!("{drops} decreases"));
            }
            Err(err) => e.flag(&format!("{id} sweep"), false, err.to_string()),
        }
    }

    let mut d = Criterion::default();
    d.bound(&format!("worst residual over {solved} solved states"), worst_complementarity, 1e-10);

    let mut f = Criterion::default();
    let ln_binom = |a: u32, b: u32| -> f64 { (1..=b).map(|i| ((a - b + i) as f64 / i as f64).ln()).sum() };
    let mut worst_int: f64 = 0.0;
    for z in 1..=30u32 {
        for k in 0..=z {
            let s = entropy_level(Fermi, z as f64, k as f64 / z as f64).unwrap_or(f64::NAN);
            worst_int = worst_int.max((s - ln_binom(z, k)).abs());
        }
        for k in 0..=60u32 {
            let s = entropy_level(Bose, z as f64, k as f64 / z as f64).unwrap_or(f64::NAN);
            worst_int = worst_int.max((s - ln_binom(k + z - 1, k)).abs());
        }
    }
    f.bound("ln C(z, N) and ln C(N+z-1, N), z <= 30", worst_int, 1e-10);

    let mut g = Criterion::default();
    let mut worst_q: f64 = 0.0;
    for _ in 0..200 {
        let kind = if rng.gen_bool(0.5) { Fermi } else { Bose };
        let z = rng.gen_range(1.0..64.0);
        let n = match kind {
            Fermi => rng.gen_range(0.0..1.0),
            Bose => rng.gen_range(0.0..20.0),
        };
        let pairs = [
            (theta(kind, z, n), theta_integral_oracle(kind, z, n, 0)),
            (theta_deriv(kind, z, n), theta_integral_oracle(kind, z, n, 1)),
        ];
        for (closed, quad) in pairs {
            let err = match (closed, quad) {
                (Ok(x), Ok(y)) => (x - y).abs(),
                _ => f64::INFINITY,
            };
            worst_q = worst_q.max(err);
        }
    }
    g.bound("theta and theta' vs quadrature, 200 inputs", worst_q, 1e-8);

    vec![a, b, c, d, e, f, g]
}

fn qualitative_peak() -> Criterion {
    let mut c = Criterion::default();
    let points = 400;
    match cv_has_interior_maximum(&params(16.0, 128.0, 34.0), Fermi, points) {
        Ok(found) => c.flag("z2=128 interior C_V maximum", found, format!("{found}")),
        Err(e) => c.flag("z2=128 interior C_V maximum", false, e.to_string()),
    }
    match cv_has_interior_maximum(&params(16.0, 16.0, 34.0), Fermi, points) {
        Ok(found) => c.flag("z2=16 monotone-decreasing C_V", !found, format!("interior maximum: {found}")),
        Err(e) => c.flag("z2=16 monotone-decreasing C_V", false, e.to_string()),
    }
    let scan: Vec<(u32, bool)> = (18..=60u32)
        .map(|z2| (z2, cv_has_interior_maximum(&params(16.0, z2 as f64, 34.0), Fermi, points).unwrap_or(false)))
        .collect();
    let first = scan.iter().find(|(_, peak)| *peak).map(|(z2, _)| *z2);
    let threshold = first.map(|z2| z2 as f64 - 0.5);
    let monotone_above = first.is_some_and(|f| scan.iter().filter(|(z2, _)| *z2 >= f).all(|(_, peak)| *peak));
    match threshold {
        Some(t) => c.flag(
            "threshold in z2 within [20, 45]",
            (20.0..=45.0).contains(&t) && monotone_above,
            format!("between {} and {}, stays peaked above: {monotone_above}", t - 0.5, t + 0.5),
        ),
        None => c.flag("threshold in z2 within [20, 45]", false, "no peak for z2 <= 60".into()),
    }
    c
}

fn main() -> ExitCode {
    let mut criteria = vec![
        ("1 characteristic temperatures", characteristic_temperatures()),
        ("2 entropy plateaus", entropy_plateaus()),
        ("3 heat-capacity jumps", capacity_jump_values()),
        ("4 region geometry", region_geometry()),
        ("5 high-temperature populations", high_t_populations()),
    ];
    let labels = [
        "6a classical limit",
        "6b C_V finite difference",
        "6c thermodynamic identity",
        "6d complementarity",
        "6e entropy monotone",
        "6f integer entropy",
        "6g quadrature oracle",
    ];
    let six = property_suite();
    let six_pass = six.iter().all(Criterion::passed);
    let mut six_lines = Vec::new();
    let (mut six_failed, mut six_total) = (0, 0);
    for (label, sub) in labels.iter().zip(&six) {
        six_lines.push(format!("    [{}] {label}", if sub.passed() { "pass" } else { "fail" }));
        six_lines.extend(sub.lines.iter().map(|l| format!("    {l}")));
        six_failed += sub.failed;
        six_total += sub.total;
    }
    criteria.push((
        "6 property suite",
        Criterion {
            lines: six_lines,
            failed: if six_pass { 0 } else { six_failed.max(1) },
            total: six_total,
        },
    ));
    criteria.push(("7 qualitative C_V peak", qualitative_peak()));

    let mut passed = 0;
    for (name, c) in &criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name} ({}/{} checks)", c.total - c.failed, c.total);
        for line in &c.lines {
            println!("{line}");
        }
        passed += usize::from(c.passed());
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
