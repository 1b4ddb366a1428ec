//! Two-level systems: characteristic temperatures, region classification
//! on the `(φ, η)` plane, plateau entropies and heat-capacity jumps.
//!
//! With `φ = N/z1` and `η = z2/z1`, each characteristic temperature is
//! `Δε / Φ(n₂, n₁)` with `Φ(n₂, n₁) = θ₂(n₂) − θ₁(n₁)`, and it exists
//! when its arguments are admissible populations and `Φ > 0`.

use rayon::prelude::*;

use crate::equilibrium::{high_temperature_limit, solve_mu};
use crate::error::{Error, Result};
use crate::specfun::ln_gamma;
use crate::stat_core::{entropy_level, phi, Level, Statistics, SystemSpec, DEFAULT_ALPHA};
use crate::thermo::ResponseSet;

/// Relative offset used for the one-sided limits at a switching point.
pub const ONE_SIDED_OFFSET: f64 = 1e-8;

/// Absolute tolerance of η and φ roots on the region plane.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    pub z1: f64,
    pub z2: f64,
    pub n_total: f64,
    /// Energy of the lower level.
    pub eps1: f64,
    /// `ε₂ − ε₁ > 0`.
    pub delta_eps: f64,
}

impl TwoLevelParams {
    /// Lower level at `ε₁ = Δε`, upper at `2Δε`.
    pub fn new(z1: f64, z2: f64, n_total: f64, delta_eps: f64) -> Self {
        Self {
            z1,
            z2,
            n_total,
            eps1: delta_eps,
            delta_eps,
        }
    }

    pub fn with_eps1(mut self, eps1: f64) -> Self {
        self.eps1 = eps1;
        self
    }

    /// Parameters at a point of the `(φ, η)` plane for fixed `N`.
    pub fn from_plane(n_total: f64, phi: f64, eta: f64, delta_eps: f64) -> Self {
        let z1 = n_total / phi;
        Self::new(z1, eta * z1, n_total, delta_eps)
    }

    pub fn eta(&self) -> f64 {
        self.z2 / self.z1
    }

    pub fn phi(&self) -> f64 {
        self.n_total / self.z1
    }

    pub fn check(&self) -> Result<()> {
        let ok = self.z1 >= 1.0
            && self.z2 >= 1.0
            && self.n_total > 0.0
            && self.delta_eps > 0.0
            && self.eps1.is_finite()
            && self.n_total.is_finite()
            && self.z1.is_finite()
            && self.z2.is_finite()
            && self.delta_eps.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSystem(format!(
                "two-level parameters need z1, z2 >= 1, N > 0, delta_eps > 0 (got {self:?})"
            )))
        }
    }

    pub fn is_forbidden(&self, kind: Statistics) -> bool {
        kind == Statistics::Fermi && self.n_total > self.z1 + self.z2
    }

    /// Unit volume and the default exponent.
    pub fn system(&self, kind: Statistics) -> Result<SystemSpec> {
        self.system_with(kind, 1.0, DEFAULT_ALPHA)
    }

    /// Level energies `ε₁` and `ε₁ + Δε` hold at the given volume.
    pub fn system_with(&self, kind: Statistics, volume: f64, alpha: f64) -> Result<SystemSpec> {
        self.check()?;
        let scale = volume.powf(alpha);
        let levels = vec![
            Level::new(self.eps1 * scale, self.z1),
            Level::new((self.eps1 + self.delta_eps) * scale, self.z2),
        ];
        SystemSpec::new(kind, levels, self.n_total, volume, alpha)
    }
}

/// Characteristic temperatures in energy units; `None` when absent.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CharTemps {
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub f3: Option<f64>,
    pub f4: Option<f64>,
}

impl CharTemps {
    /// Present temperatures with their names, in the order
    /// `T_B1, T_B2, T_F1, T_F2, T_F3, T_F4`.
    pub fn present(&self) -> Vec<(&'static str, f64)> {
        self.all()
            .into_iter()
            .filter_map(|(name, t)| t.map(|t| (name, t)))
            .collect()
    }

    pub fn all(&self) -> [(&'static str, Option<f64>); 6] {
        [
            ("T_B1", self.b1),
            ("T_B2", self.b2),
            ("T_F1", self.f1),
            ("T_F2", self.f2),
            ("T_F3", self.f3),
            ("T_F4", self.f4),
        ]
    }

    /// Onset of the transfer to the upper level.
    pub fn onset(&self) -> Option<f64> {
        self.b1.or(self.f1).or(self.f3)
    }

    /// Temperature above which the state stops changing.
    pub fn completion(&self) -> Option<f64> {
        self.b2.or(self.f2).or(self.f4)
    }
}

/// The Φ curves whose zero sets bound the regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    B1,
    B2,
    F1,
    F2,
    F3,
    F4,
}

impl Curve {
    pub const BOSE: [Curve; 2] = [Curve::B1, Curve::B2];
    pub const FERMI: [Curve; 4] = [Curve::F1, Curve::F2, Curve::F3, Curve::F4];

    pub fn for_statistics(kind: Statistics) -> &'static [Curve] {
        match kind {
            Statistics::Bose => &Self::BOSE,
            Statistics::Fermi => &Self::FERMI,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Curve::B1 => "T_B1",
            Curve::B2 => "T_B2",
            Curve::F1 => "T_F1",
            Curve::F2 => "T_F2",
            Curve::F3 => "T_F3",
            Curve::F4 => "T_F4",
        }
    }

    /// `(n₂, n₁)` arguments of Φ, or `None` when they are not admissible.
    fn arguments(self, p: &TwoLevelParams) -> Option<(f64, f64)> {
        let (z1, z2, n) = (p.z1, p.z2, p.n_total);
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        match self {
            Curve::B1 => Some((0.0, n / z1)),
            Curve::B2 => Some((n / z2, 0.0)),
            Curve::F1 => (n <= z1).then_some((0.0, n / z1)),
            Curve::F2 => unit(n / z2).then_some((n / z2, 0.0)),
            Curve::F3 => (n > z1 && unit((n - z1) / z2)).then_some(((n - z1) / z2, 1.0)),
            Curve::F4 => unit((n - z2) / z1).then_some((1.0, (n - z2) / z1)),
        }
    }

    fn statistics(self) -> Statistics {
        match self {
            Curve::B1 | Curve::B2 => Statistics::Bose,
            _ => Statistics::Fermi,
        }
    }

    /// Φ at the curve's arguments.
    pub fn denominator(self, p: &TwoLevelParams) -> Option<f64> {
        let (n2, n1) = self.arguments(p)?;
        phi(self.statistics(), p.z1, p.z2, n2, n1).ok()
    }
}

pub fn char_temps(params: &TwoLevelParams, kind: Statistics) -> CharTemps {
    let mut out = CharTemps::default();
    if params.check().is_err() || params.is_forbidden(kind) {
        return out;
    }
    for &curve in Curve::for_statistics(kind) {
        let t = curve
            .denominator(params)
            .filter(|&d| d > 0.0)
            .map(|d| params.delta_eps / d);
        match curve {
            Curve::B1 => out.b1 = t,
            Curve::B2 => out.b2 = t,
            Curve::F1 => out.f1 = t,
            Curve::F2 => out.f2 = t,
            Curve::F3 => out.f3 = t,
            Curve::F4 => out.f4 = t,
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionClass {
    BoseI,
    BoseII,
    BoseIII,
    FermiIA,
    FermiIIA,
    FermiIIIA,
    FermiIIIAPrime,
    FermiIB,
    FermiIIB,
    FermiIIIB,
    FermiIIIBPrime,
    FermiForbidden,
}

impl RegionClass {
    pub fn label(self) -> &'static str {
        match self {
            RegionClass::BoseI => "B-I",
            RegionClass::BoseII => "B-II",
            RegionClass::BoseIII => "B-III",
            RegionClass::FermiIA => "F-I_A",
            RegionClass::FermiIIA => "F-II_A",
            RegionClass::FermiIIIA => "F-III_A",
            RegionClass::FermiIIIAPrime => "F-III_A'",
            RegionClass::FermiIB => "F-I_B",
            RegionClass::FermiIIB => "F-II_B",
            RegionClass::FermiIIIB => "F-III_B",
            RegionClass::FermiIIIBPrime => "F-III_B'",
            RegionClass::FermiForbidden => "F-Forbidden",
        }
    }

    /// True for the regions where the state never changes with T.
    pub fn is_frozen(self) -> bool {
        matches!(
            self,
            RegionClass::BoseI | RegionClass::FermiIA | RegionClass::FermiIB
        )
    }

    /// True for the regions with a completion temperature.
    pub fn has_completion(self) -> bool {
        matches!(
            self,
            RegionClass::BoseIII
                | RegionClass::FermiIIIA
                | RegionClass::FermiIIIAPrime
                | RegionClass::FermiIIIB
                | RegionClass::FermiIIIBPrime
        )
    }
}

impl std::fmt::Display for RegionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify_region(params: &TwoLevelParams, kind: Statistics) -> RegionClass {
    if params.is_forbidden(kind) {
        return RegionClass::FermiForbidden;
    }
    let t = char_temps(params, kind);
    match kind {
        Statistics::Bose => match (t.b1, t.b2) {
            (None, _) => RegionClass::BoseI,
            (Some(_), None) => RegionClass::BoseII,
            (Some(_), Some(_)) => RegionClass::BoseIII,
        },
        Statistics::Fermi => {
            let case_a = params.n_total <= params.z1;
            let onset = if case_a { t.f1 } else { t.f3 };
            match (case_a, onset, t.f2, t.f4) {
                (true, None, ..) => RegionClass::FermiIA,
                (true, Some(_), Some(_), _) => RegionClass::FermiIIIA,
                (true, Some(_), None, Some(_)) => RegionClass::FermiIIIAPrime,
                (true, Some(_), None, None) => RegionClass::FermiIIA,
                (false, None, ..) => RegionClass::FermiIB,
                (false, Some(_), Some(_), _) => RegionClass::FermiIIIB,
                (false, Some(_), None, Some(_)) => RegionClass::FermiIIIBPrime,
                (false, Some(_), None, None) => RegionClass::FermiIIB,
            }
        }
    }
}

/// Axis ranges of a `(φ, η)` scan; both axes are sampled inclusively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneGrid {
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_points: usize,
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_points: usize,
    /// Geometric spacing along η.
    pub eta_log: bool,
}

impl PlaneGrid {
    pub fn check(&self) -> Result<()> {
        let ok = self.phi_min > 0.0
            && self.phi_max >= self.phi_min
            && self.eta_min > 0.0
            && self.eta_max > self.eta_min
            && self.phi_points >= 1
            && self.eta_points >= 2;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSystem(format!("invalid plane grid {self:?}")))
        }
    }

    pub fn phis(&self) -> Vec<f64> {
        linspace(self.phi_min, self.phi_max, self.phi_points)
    }

    pub fn etas(&self) -> Vec<f64> {
        if self.eta_log {
            let (a, b) = (self.eta_min.ln(), self.eta_max.ln());
            linspace(a, b, self.eta_points).into_iter().map(f64::exp).collect()
        } else {
            linspace(self.eta_min, self.eta_max, self.eta_points)
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// One grid cell; `region` is `None` where a degeneracy would fall below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub phi: f64,
    pub eta: f64,
    pub region: Option<RegionClass>,
}

fn region_at(kind: Statistics, n_total: f64, phi: f64, eta: f64) -> Option<RegionClass> {
    let p = TwoLevelParams::from_plane(n_total, phi, eta, 1.0);
    p.check().ok()?;
    Some(classify_region(&p, kind))
}

/// Classifies every grid node, row-major in φ then η.
pub fn classify_grid(kind: Statistics, n_total: f64, grid: &PlaneGrid) -> Result<Vec<RegionCell>> {
    grid.check()?;
    let etas = grid.etas();
    let nodes: Vec<(f64, f64)> = grid
        .phis()
        .into_iter()
        .flat_map(|p| etas.iter().map(move |&e| (p, e)))
        .collect();
    Ok(nodes
        .into_par_iter()
        .map(|(phi, eta)| RegionCell {
            phi,
            eta,
            region: region_at(kind, n_total, phi, eta),
        })
        .collect())
}

/// A Φ = 0 locus traced across the grid, sorted by φ.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub curve: Curve,
    pub points: Vec<(f64, f64)>,
}

/// Bisection for a sign change of `f` on `[a, b]`.
fn bisect<F: Fn(f64) -> Option<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return None;
    }
    let positive_at_a = fa > 0.0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Some(m);
        }
        if (fm > 0.0) == positive_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// The η interval on a φ-line where the curve's Φ arguments are admissible
/// and both degeneracies are at least 1, clipped to `[lo, hi]`.
fn curve_eta_window(curve: Curve, n_total: f64, phi: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    if n_total / phi < 1.0 {
        return None;
    }
    // z2 = η N / φ ≥ 1
    let mut a = lo.max(phi / n_total);
    let mut b = hi;
    match curve {
        Curve::B1 | Curve::B2 => {}
        Curve::F1 => {
            if phi > 1.0 {
                return None;
            }
        }
        // n₂ = φ/η ≤ 1
        Curve::F2 => a = a.max(phi),
        // N > z1 and n₂ = (φ − 1)/η ≤ 1
        Curve::F3 => {
            if phi <= 1.0 {
                return None;
            }
            a = a.max(phi - 1.0);
        }
        // 0 ≤ φ − η ≤ 1
        Curve::F4 => {
            a = a.max(phi - 1.0);
            b = b.min(phi);
        }
    }
    (a < b).then_some((a, b))
}

/// Root in η of the curve's Φ on the line of fixed `(φ, N)`.
///
/// Φ is monotone in η along such a line, so there is at most one root.
pub fn curve_root_in_eta(curve: Curve, n_total: f64, phi: f64, eta_lo: f64, eta_hi: f64) -> Option<f64> {
    let (a, b) = curve_eta_window(curve, n_total, phi, eta_lo, eta_hi)?;
    let f = |eta: f64| curve.denominator(&TwoLevelParams::from_plane(n_total, phi, eta, 1.0));
    bisect(f, a, b, BOUNDARY_TOLERANCE)
}

/// Traces each Φ = 0 curve along the φ-lines of the grid. Lines without a
/// crossing inside the η range contribute no point.
pub fn region_boundaries(kind: Statistics, n_total: f64, grid: &PlaneGrid) -> Result<Vec<BoundaryCurve>> {
    grid.check()?;
    let phis = grid.phis();
    Ok(Curve::for_statistics(kind)
        .iter()
        .map(|&curve| {
            let points = phis
                .par_iter()
                .filter_map(|&phi| {
                    curve_root_in_eta(curve, n_total, phi, grid.eta_min, grid.eta_max).map(|eta| (phi, eta))
                })
                .collect();
            BoundaryCurve { curve, points }
        })
        .collect())
}

/// A change of region label along a line of fixed `(φ, N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaTransition {
    pub eta: f64,
    pub from: Option<RegionClass>,
    pub to: Option<RegionClass>,
}

/// Scans the region label along η on a geometric grid of `samples` points
/// and refines each change by bisection.
pub fn eta_transitions(
    kind: Statistics,
    n_total: f64,
    phi: f64,
    eta_lo: f64,
    eta_hi: f64,
    samples: usize,
) -> Vec<EtaTransition> {
    let label = |eta: f64| region_at(kind, n_total, phi, eta);
    let grid = PlaneGrid {
        phi_min: phi,
        phi_max: phi,
        phi_points: 1,
        eta_min: eta_lo,
        eta_max: eta_hi,
        eta_points: samples.max(2),
        eta_log: true,
    };
    let etas = grid.etas();
    let labels: Vec<_> = etas.par_iter().map(|&e| label(e)).collect();
    let mut out = Vec::new();
    for i in 1..etas.len() {
        if labels[i] == labels[i - 1] {
            continue;
        }
        let (mut a, mut b) = (etas[i - 1], etas[i]);
        let from = labels[i - 1];
        while b - a > BOUNDARY_TOLERANCE * b.max(1.0) {
            let m = 0.5 * (a + b);
            if label(m) == from {
                a = m;
            } else {
                b = m;
            }
        }
        out.push(EtaTransition {
            eta: 0.5 * (a + b),
            from,
            to: labels[i],
        });
    }
    out
}

/// Entropy of the `T → 0` state in closed form.
pub fn zero_t_entropy(params: &TwoLevelParams, kind: Statistics) -> Result<f64> {
    params.check()?;
    let (z1, z2, n) = (params.z1, params.z2, params.n_total);
    let s = match kind {
        Statistics::Bose => ln_gamma(n + z1)? - ln_gamma(n + 1.0)? - ln_gamma(z1)?,
        Statistics::Fermi if params.is_forbidden(kind) => {
            return Err(Error::InfeasibleParticleNumber {
                n_total: n,
                capacity: z1 + z2,
            })
        }
        Statistics::Fermi if n <= z1 => ln_gamma(z1 + 1.0)? - ln_gamma(n + 1.0)? - ln_gamma(z1 + 1.0 - n)?,
        Statistics::Fermi => ln_gamma(z2 + 1.0)? - ln_gamma(n + 1.0 - z1)? - ln_gamma(z1 + z2 + 1.0 - n)?,
    };
    Ok(s.max(0.0))
}

/// How the high-temperature entropy is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyLimit {
    /// Constant above the completion temperature.
    PlateauAtCompletion,
    /// Approached as `T → ∞`.
    LimitAtInfinity,
    /// No characteristic temperature; the `T = 0` state persists.
    Frozen,
}

impl EntropyLimit {
    pub fn label(self) -> &'static str {
        match self {
            EntropyLimit::PlateauAtCompletion => "plateau-at-T2",
            EntropyLimit::LimitAtInfinity => "limit-at-infinity",
            EntropyLimit::Frozen => "frozen",
        }
    }
}

pub fn limiting_entropy(params: &TwoLevelParams, kind: Statistics) -> Result<(f64, EntropyLimit)> {
    let system = params.system(kind)?;
    let t = char_temps(params, kind);
    let (z1, z2, n) = (params.z1, params.z2, params.n_total);
    if t.onset().is_none() {
        return Ok((zero_t_entropy(params, kind)?, EntropyLimit::Frozen));
    }
    let plateau = match kind {
        Statistics::Bose => t.b2.map(|_| entropy_level(kind, z2, n / z2)),
        Statistics::Fermi => {
            if t.f2.is_some() {
                Some(entropy_level(kind, z2, n / z2))
            } else if t.f4.is_some() {
                Some(entropy_level(kind, z1, (n - z2) / z1))
            } else {
                None
            }
        }
    };
    if let Some(s) = plateau {
        return Ok((s?, EntropyLimit::PlateauAtCompletion));
    }
    let occ = high_temperature_limit(&system)?;
    let s = occ
        .iter()
        .zip(&system.levels)
        .map(|(o, l)| entropy_level(kind, l.z, o.n))
        .sum::<Result<f64>>()?;
    Ok((s, EntropyLimit::LimitAtInfinity))
}

/// Heat-capacity discontinuity at one characteristic temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityJump {
    pub name: &'static str,
    pub temperature: f64,
    pub cv_below: f64,
    pub cv_above: f64,
    pub cp_below: Option<f64>,
    pub cp_above: Option<f64>,
}

impl CapacityJump {
    pub fn delta_cv(&self) -> f64 {
        self.cv_above - self.cv_below
    }

    pub fn delta_cp(&self) -> Option<f64> {
        Some(self.cp_above? - self.cp_below?)
    }
}

/// `C(T(1 + δ)) − C(T(1 − δ))` at each present characteristic temperature.
pub fn capacity_jumps(params: &TwoLevelParams, kind: Statistics) -> Result<Vec<CapacityJump>> {
    jumps_at(&params.system(kind)?, &char_temps(params, kind))
}

/// Jumps of an already built two-level system at the given temperatures.
pub fn jumps_at(system: &SystemSpec, temps: &CharTemps) -> Result<Vec<CapacityJump>> {
    temps
        .present()
        .into_iter()
        .map(|(name, t)| {
            let below = ResponseSet::compute(&solve_mu(t * (1.0 - ONE_SIDED_OFFSET), system)?, system);
            let above = ResponseSet::compute(&solve_mu(t * (1.0 + ONE_SIDED_OFFSET), system)?, system);
            Ok(CapacityJump {
                name,
                temperature: t,
                cv_below: below.cv,
                cv_above: above.cv,
                cp_below: below.cp,
                cp_above: above.cp,
            })
        })
        .collect()
}

/// Whether `C_V` between the onset and the completion temperature (or
/// `100 Δε` without one) peaks strictly inside that range on a geometric
/// grid of `points` temperatures, rather than falling from its value just
/// above the onset.
pub fn cv_has_interior_maximum(params: &TwoLevelParams, kind: Statistics, points: usize) -> Result<bool> {
    let system = params.system(kind)?;
    let temps = char_temps(params, kind);
    let Some(onset) = temps.onset() else {
        return Ok(false);
    };
    let lo = onset * (1.0 + 1e-6);
    let hi = temps
        .completion()
        .map_or(100.0 * params.delta_eps, |t| t * (1.0 - 1e-6));
    if !(hi > lo) || points < 3 {
        return Ok(false);
    }
    let cv = (0..points)
        .into_par_iter()
        .map(|i| {
            let t = lo * (hi / lo).powf(i as f64 / (points - 1) as f64);
            Ok(ResponseSet::compute(&solve_mu(t, &system)?, &system).cv)
        })
        .collect::<Result<Vec<f64>>>()?;
    let peak = cv
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(peak > 0 && peak + 1 < cv.len())
}
