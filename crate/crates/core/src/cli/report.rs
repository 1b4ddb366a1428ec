//! Sweeps, state reports, characteristic-temperature reports and region
//! scans rendered as text.

use rayon::prelude::*;

use super::format::{fmt_num, fmt_opt, CsvBuilder};
use crate::equilibrium::{ground_state, solve_mu, EquilibriumState};
use crate::error::{Error, Result};
use crate::stat_core::{Statistics, SystemSpec, DEFAULT_ALPHA};
use crate::thermo::ResponseSet;
use crate::two_level::{
    char_temps, classify_grid, classify_region, eta_transitions, jumps_at, limiting_entropy,
    region_boundaries, zero_t_entropy, Curve, PlaneGrid, RegionClass, TwoLevelParams,
};

/// A two-level system as configured on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub statistics: Statistics,
    pub params: TwoLevelParams,
    pub alpha: f64,
    pub volume: f64,
}

impl SystemConfig {
    pub fn new(statistics: Statistics, params: TwoLevelParams) -> Self {
        Self {
            statistics,
            params,
            alpha: DEFAULT_ALPHA,
            volume: 1.0,
        }
    }

    pub fn system(&self) -> Result<SystemSpec> {
        self.params.system_with(self.statistics, self.volume, self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub system: SystemConfig,
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    pub log: bool,
    /// Report μ, E, p and the coefficients in raw units and add a `T`
    /// column; otherwise energies are in units of Δε.
    pub raw: bool,
}

impl SweepConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.tau_min > 0.0 && self.tau_max > self.tau_min && self.tau_max.is_finite()) {
            return Err(Error::InvalidSystem(format!(
                "need 0 < tau-min < tau-max (got {} and {})",
                self.tau_min, self.tau_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidSystem(format!("need at least 2 points (got {})", self.points)));
        }
        Ok(())
    }

    pub fn taus(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    return self.tau_max;
                }
                let f = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.tau_min.ln() + f * (self.tau_max / self.tau_min).ln()).exp()
                } else {
                    self.tau_min + f * (self.tau_max - self.tau_min)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub tau: f64,
    pub state: EquilibriumState,
    pub response: ResponseSet,
}

pub fn solve_point(system: &SystemSpec, delta_eps: f64, tau: f64) -> Result<SweepPoint> {
    let state = if tau == 0.0 {
        ground_state(system)?
    } else {
        solve_mu(tau * delta_eps, system)?
    };
    let response = ResponseSet::compute(&state, system);
    Ok(SweepPoint { tau, state, response })
}

/// Solves every grid point, in parallel, keeping grid order.
pub fn sweep_points(cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    cfg.check()?;
    let system = cfg.system.system()?;
    let de = cfg.system.params.delta_eps;
    cfg.taus()
        .into_par_iter()
        .map(|tau| solve_point(&system, de, tau))
        .collect()
}

fn pinned_label(point: &SweepPoint, level: usize) -> &'static str {
    if point.state.reservoir == Some(level) {
        "reservoir"
    } else {
        point.state.occupancies[level].pinned.label()
    }
}

pub fn sweep_header(levels: usize, raw: bool) -> Vec<String> {
    let mut h = vec!["tau".to_string()];
    if raw {
        h.push("T".into());
    }
    h.push("mu".into());
    h.extend((1..=levels).map(|j| format!("n_{j}")));
    h.extend((1..=levels).map(|j| format!("pinned_{j}")));
    for c in ["S", "E", "p", "C_V", "C_p", "alpha_p", "gamma_T", "beta_V"] {
        h.push(c.into());
    }
    h
}

pub fn sweep_csv(cfg: &SweepConfig, points: &[SweepPoint]) -> String {
    let levels = 2;
    let de = cfg.system.params.delta_eps;
    // energy-like columns are divided by `e`, inverse-energy ones multiplied
    let e = if cfg.raw { 1.0 } else { de };
    let mut csv = CsvBuilder::new(
        if cfg.raw { "sweep-raw" } else { "sweep" },
        &sweep_header(levels, cfg.raw),
    );
    for pt in points {
        let r = &pt.response;
        let mut f = vec![fmt_num(pt.tau)];
        if cfg.raw {
            f.push(fmt_num(pt.state.temperature));
        }
        f.push(fmt_num(pt.state.mu / e));
        f.extend(pt.state.occupancies.iter().map(|o| fmt_num(o.n)));
        f.extend((0..levels).map(|j| pinned_label(pt, j).to_string()));
        f.push(fmt_num(pt.state.entropy));
        f.push(fmt_num(pt.state.energy / e));
        f.push(fmt_num(pt.state.pressure / e));
        f.push(fmt_num(r.cv));
        f.push(fmt_opt(r.cp));
        f.push(fmt_opt(r.alpha_p.map(|x| x * e)));
        f.push(fmt_opt(r.gamma_t.map(|x| x * e)));
        f.push(fmt_opt(r.beta_v.map(|x| x * e)));
        csv.row(&f);
    }
    csv.finish()
}

/// `key=value` report of one state.
pub fn state_report(cfg: &SystemConfig, tau: f64) -> Result<String> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidSystem(format!("tau must be >= 0 (got {tau})")));
    }
    let system = cfg.system()?;
    let pt = solve_point(&system, cfg.params.delta_eps, tau)?;
    let (st, r) = (&pt.state, &pt.response);
    let mut out = Vec::new();
    let mut kv = |k: &str, v: String| out.push(format!("{k}={v}"));
    kv("statistics", cfg.statistics.name().into());
    kv("tau", fmt_num(tau));
    kv("T", fmt_num(st.temperature));
    kv("mu", fmt_num(st.mu));
    kv("mu_indeterminate", st.mu_indeterminate().to_string());
    if let Some((lo, hi)) = st.mu_interval {
        kv("mu_min", fmt_num(lo));
        kv("mu_max", fmt_num(hi));
    }
    for (j, o) in st.occupancies.iter().enumerate() {
        kv(&format!("n_{}", j + 1), fmt_num(o.n));
        kv(&format!("pinned_{}", j + 1), pinned_label(&pt, j).into());
    }
    kv("active_count", st.active_count.to_string());
    kv("S", fmt_num(st.entropy));
    kv("E", fmt_num(st.energy));
    kv("p", fmt_num(st.pressure));
    kv("C_V", fmt_num(r.cv));
    kv("C_p", opt_or_undefined(r.cp));
    kv("alpha_p", opt_or_undefined(r.alpha_p));
    kv("gamma_T", opt_or_undefined(r.gamma_t));
    kv("beta_V", opt_or_undefined(r.beta_v));
    Ok(out.join("\n") + "\n")
}

fn opt_or_undefined(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_else(|| "undefined".into())
}

fn tau_key(name: &str) -> String {
    name.replacen("T_", "tau_", 1)
}

/// Characteristic temperatures, region label, entropies and jumps.
pub fn char_temps_report(cfg: &SystemConfig) -> Result<String> {
    let p = &cfg.params;
    let kind = cfg.statistics;
    p.check()?;
    let mut out = Vec::new();
    let mut kv = |k: &str, v: String| out.push(format!("{k}={v}"));
    kv("statistics", kind.name().into());
    kv("z1", fmt_num(p.z1));
    kv("z2", fmt_num(p.z2));
    kv("n", fmt_num(p.n_total));
    kv("delta_eps", fmt_num(p.delta_eps));
    kv("phi", fmt_num(p.phi()));
    kv("eta", fmt_num(p.eta()));
    let region = classify_region(p, kind);
    kv("region", region.label().into());
    let temps = char_temps(p, kind);
    for &curve in Curve::for_statistics(kind) {
        let name = curve.name();
        let t = temps.all().into_iter().find(|(n, _)| *n == name).and_then(|(_, t)| t);
        kv(name, t.map(fmt_num).unwrap_or_else(|| "absent".into()));
        kv(&tau_key(name), t.map(|t| fmt_num(t / p.delta_eps)).unwrap_or_else(|| "absent".into()));
    }
    if p.is_forbidden(kind) {
        return Ok(out.join("\n") + "\n");
    }
    kv("S_0", fmt_num(zero_t_entropy(p, kind)?));
    let (s, tag) = limiting_entropy(p, kind)?;
    kv("S_limit", fmt_num(s));
    kv("S_limit_kind", tag.label().into());
    for j in jumps_at(&cfg.system()?, &temps)? {
        kv(&format!("jump_{}_dC_V", j.name), fmt_num(j.delta_cv()));
        kv(&format!("jump_{}_dC_p", j.name), opt_or_undefined(j.delta_cp()));
    }
    Ok(out.join("\n") + "\n")
}

/// Cells, Φ = 0 boundary polylines and, optionally, the label changes
/// along one φ-line, in a single `record,phi,eta,label` table.
pub fn regions_csv(kind: Statistics, n_total: f64, grid: &PlaneGrid, transitions_at: Option<f64>) -> Result<String> {
    if !(n_total > 0.0 && n_total.is_finite()) {
        return Err(Error::InvalidSystem(format!("N must be > 0 (got {n_total})")));
    }
    let mut csv = CsvBuilder::new(
        "regions",
        &["record", "phi", "eta", "label"].map(String::from),
    );
    for cell in classify_grid(kind, n_total, grid)? {
        if let Some(r) = cell.region {
            csv.row(&["cell".into(), fmt_num(cell.phi), fmt_num(cell.eta), r.label().to_string()]);
        }
    }
    for curve in region_boundaries(kind, n_total, grid)? {
        for (phi, eta) in curve.points {
            csv.row(&["boundary".into(), fmt_num(phi), fmt_num(eta), curve.curve.name().to_string()]);
        }
    }
    if let Some(phi) = transitions_at {
        for t in eta_transitions(kind, n_total, phi, grid.eta_min, grid.eta_max, 4 * grid.eta_points.max(100)) {
            let label = |r: Option<RegionClass>| r.map(|r| r.label()).unwrap_or("none");
            csv.row(&[
                "transition".into(),
                fmt_num(phi),
                fmt_num(t.eta),
                format!("{}->{}", label(t.from), label(t.to)),
            ]);
        }
    }
    Ok(csv.finish())
}

/// Characteristic temperatures along η at fixed `z1` and `N`.
pub fn eta_scan_csv(kind: Statistics, z1: f64, n_total: f64, etas: &[f64]) -> Result<String> {
    let curves = Curve::for_statistics(kind);
    let mut header = vec!["eta".to_string(), "z2".to_string()];
    header.extend(curves.iter().map(|c| tau_key(c.name())));
    header.push("region".into());
    let mut csv = CsvBuilder::new("eta-scan", &header);
    let rows: Vec<Vec<String>> = etas
        .par_iter()
        .map(|&eta| {
            let p = TwoLevelParams::new(z1, eta * z1, n_total, 1.0);
            let t = char_temps(&p, kind);
            let mut row = vec![fmt_num(eta), fmt_num(p.z2)];
            for c in curves {
                let v = t.all().into_iter().find(|(n, _)| *n == c.name()).and_then(|(_, v)| v);
                row.push(fmt_opt(v));
            }
            row.push(if p.check().is_ok() {
                classify_region(&p, kind).label().to_string()
            } else {
                String::new()
            });
            row
        })
        .collect();
    for r in rows {
        csv.row(&r);
    }
    Ok(csv.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3a() -> SystemConfig {
        SystemConfig::new(Statistics::Bose, TwoLevelParams::new(8.0, 96.0, 16.0, 1.0))
    }

    #[test]
    fn sweep_is_ordered_and_deterministic() {
        let cfg = SweepConfig {
            system: fig3a(),
            tau_min: 0.05,
            tau_max: 5.0,
            points: 64,
            log: true,
            raw: false,
        };
        let a = sweep_csv(&cfg, &sweep_points(&cfg).unwrap());
        let b = sweep_csv(&cfg, &sweep_points(&cfg).unwrap());
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines.len(), 2 + 64);
        assert!(lines[1].starts_with("tau,mu,n_1,n_2,pinned_1,pinned_2,S,E,p,C_V,C_p"));
        assert!(lines[2].starts_with("0.05,"));
        assert!(lines.last().unwrap().starts_with("5,"));
    }

    #[test]
    fn raw_columns_scale() {
        let mut sys = fig3a();
        sys.params = TwoLevelParams::new(8.0, 96.0, 16.0, 2.0);
        let mk = |raw| SweepConfig {
            system: sys,
            tau_min: 0.5,
            tau_max: 1.0,
            points: 2,
            log: false,
            raw,
        };
        let cfg = mk(false);
        let pts = sweep_points(&cfg).unwrap();
        let scaled = sweep_csv(&cfg, &pts);
        let raw = sweep_csv(&mk(true), &pts);
        let e_scaled: f64 = scaled.lines().nth(2).unwrap().split(',').nth(7).unwrap().parse().unwrap();
        let e_raw: f64 = raw.lines().nth(2).unwrap().split(',').nth(8).unwrap().parse().unwrap();
        assert!((e_raw - 2.0 * e_scaled).abs() < 1e-9 * e_raw);
    }

    #[test]
    fn state_report_frozen() {
        let r = state_report(&fig3a(), 0.1).unwrap();
        assert!(r.contains("n_1=2\n"));
        assert!(r.contains("n_2=0\n"));
        assert!(r.contains("pinned_2=empty\n"));
        assert!(r.contains("C_V=0\n"));
    }

    #[test]
    fn char_temps_report_lists_absent() {
        let r = char_temps_report(&fig3a()).unwrap();
        assert!(r.contains("region=B-II\n"));
        assert!(r.contains("T_B2=absent\n"));
        assert!(r.contains("jump_T_B1_dC_V=13.84"));
    }

    #[test]
    fn eta_scan_columns() {
        let csv = eta_scan_csv(Statistics::Fermi, 16.0, 14.0, &[0.0625, 1.0]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "eta,z2,tau_F1,tau_F2,tau_F3,tau_F4,region");
        assert!(lines[2].starts_with("0.0625,1,0.36"));
        assert!(lines[2].ends_with(",F-III_A'"));
    }
}
