//! Equilibrium populations and chemical potential.
//!
//! Each level obeys `θ_j(n_j) = (ε_j − μ)/T` when that value lies inside
//! the range of `θ_j`. Otherwise the level is pinned: empty when
//! `(ε_j − μ)/T ≥ θ_j(0)`, full (fermions) when `(ε_j − μ)/T ≤ θ_j(1)`.
//! Because θ is bounded on a finite level, these are ordinary states, not
//! limits. A pinned level does not respond to temperature, and this is
//! what produces the sharp onset and completion temperatures.
//!
//! The solve works in the reduced variable `s = (ε_ref − μ)/T`, where
//! `ε_ref` is the lowest level energy. Every target is then
//! `(ε_j − ε_ref)/T + s`, and the ground-level target never suffers
//! cancellation at low temperature.

use crate::error::{Error, Result};
use crate::stat_core::{
    entropy_level, theta, theta_deriv, LevelOccupancy, Pinning, Statistics, SystemSpec,
};

/// Absolute tolerance on `θ_j(n_j) − target` for interior levels.
pub const THETA_TOLERANCE: f64 = 1e-12;

/// Relative tolerance on particle conservation, scaled by `max(1, N)`.
pub const CONSERVATION_TOLERANCE: f64 = 1e-10;

const MAX_ITERATIONS: usize = 400;

/// A solved equilibrium state.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumState {
    /// Zero for the analytic ground state.
    pub temperature: f64,
    /// Chemical potential. When [`Self::mu_interval`] is set, this is the
    /// interval midpoint (or its finite end, for a half-line).
    pub mu: f64,
    /// Set when every level is pinned and μ is only known to lie in an
    /// interval.
    pub mu_interval: Option<(f64, f64)>,
    pub occupancies: Vec<LevelOccupancy>,
    /// A Bose level of degeneracy 1 that sits at `μ = ε_j` and absorbs the
    /// particles the other levels cannot hold.
    pub reservoir: Option<usize>,
    pub entropy: f64,
    pub energy: f64,
    pub pressure: f64,
    /// Number of interior (unpinned) levels.
    pub active_count: usize,
}

impl EquilibriumState {
    pub fn mu_indeterminate(&self) -> bool {
        self.mu_interval.is_some()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.occupancies.iter().map(|o| o.n).collect()
    }

    pub fn pinning(&self) -> Vec<Pinning> {
        self.occupancies.iter().map(|o| o.pinned).collect()
    }

    /// `Σ z_j n_j`.
    pub fn particle_number(&self, system: &SystemSpec) -> f64 {
        system
            .levels
            .iter()
            .zip(&self.occupancies)
            .map(|(l, o)| l.z * o.n)
            .sum()
    }

    /// Largest violation of the equilibrium conditions.
    ///
    /// Interior levels contribute `|θ_j − (ε_j − μ)/T|`; pinned levels
    /// contribute how far their target falls on the wrong side of the
    /// boundary value of θ. Zero-temperature states return 0.
    pub fn complementarity_residual(&self, system: &SystemSpec) -> f64 {
        if self.temperature == 0.0 {
            return 0.0;
        }
        let energies = system.energies();
        let mut worst: f64 = 0.0;
        for (j, occ) in self.occupancies.iter().enumerate() {
            let target = (energies[j] - self.mu) / self.temperature;
            let z = system.levels[j].z;
            let violation = match occ.pinned {
                Pinning::Interior => (occ.theta - target).abs(),
                Pinning::AtEmpty => {
                    let edge = theta(system.statistics, z, 0.0).unwrap_or(f64::NAN);
                    (edge - target).max(0.0)
                }
                Pinning::AtFull => {
                    let edge = theta(system.statistics, z, 1.0).unwrap_or(f64::NAN);
                    (target - edge).max(0.0)
                }
            };
            worst = worst.max(violation);
        }
        worst
    }
}

enum Inversion {
    Resolved(f64, Pinning),
    /// Bose level whose population would be unbounded.
    Diverges,
    /// Bose `z = 1` level exactly at its own energy; any population fits.
    Indifferent,
}

/// Classical starting point for the inversion.
fn classical_guess(kind: Statistics, target: f64) -> f64 {
    match kind {
        Statistics::Fermi => 1.0 / (target.exp() + 1.0),
        Statistics::Bose => 1.0 / target.exp_m1(),
    }
}

fn invert(kind: Statistics, z: f64, target: f64) -> Result<Inversion> {
    let at_empty = theta(kind, z, 0.0)?;
    if target >= at_empty {
        if kind == Statistics::Bose && z == 1.0 && target == 0.0 {
            return Ok(Inversion::Indifferent);
        }
        return Ok(Inversion::Resolved(0.0, Pinning::AtEmpty));
    }
    let (mut lo, mut hi) = match kind {
        Statistics::Fermi => {
            if target <= theta(kind, z, 1.0)? {
                return Ok(Inversion::Resolved(1.0, Pinning::AtFull));
            }
            (0.0, 1.0)
        }
        Statistics::Bose => {
            // θ_B decreases to 0 as n grows, so a non-positive target has
            // no finite preimage.
            if target <= 0.0 || z == 1.0 {
                return Ok(Inversion::Diverges);
            }
            let mut hi = classical_guess(kind, target).max(1.0);
            while theta(kind, z, hi)? > target {
                hi *= 2.0;
                if !hi.is_finite() {
                    return Err(Error::BracketFailure("Bose population inversion"));
                }
            }
            (0.0, hi)
        }
    };
    let mut n = classical_guess(kind, target).clamp(lo, hi);
    if !(n > lo && n < hi) {
        n = 0.5 * (lo + hi);
    }
    for _ in 0..MAX_ITERATIONS {
        let residual = theta(kind, z, n)? - target;
        if residual == 0.0 {
            break;
        }
        if residual > 0.0 {
            lo = n;
        } else {
            hi = n;
        }
        let slope = z * theta_deriv(kind, z, n)?;
        let mut next = n - residual / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - n).abs();
        n = next;
        if step <= 2.0 * f64::EPSILON * n.abs() || hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(Inversion::Resolved(n, Pinning::Interior))
}

/// Population of one level for a given reduced target `(ε − μ)/T`.
///
/// Returns the population with its pinning flag. Bose targets with no
/// finite preimage are reported as [`Error::BoseDivergence`] with
/// placeholder energies; use [`populations_at`] for level-specific
/// reporting.
pub fn invert_theta(kind: Statistics, z: f64, target: f64) -> Result<(f64, Pinning)> {
    match invert(kind, z, target)? {
        Inversion::Resolved(n, p) => Ok((n, p)),
        Inversion::Diverges | Inversion::Indifferent => Err(Error::BoseDivergence {
            level: 0,
            mu: f64::NAN,
            energy: f64::NAN,
        }),
    }
}

/// Populations of every level at fixed `μ` and `T`.
///
/// A Bose level of degeneracy 1 exactly at `μ = ε_j` is reported empty;
/// its population is fixed only by particle conservation, which
/// [`solve_mu`] handles.
pub fn populations_at(mu: f64, temperature: f64, system: &SystemSpec) -> Result<Vec<LevelOccupancy>> {
    if !(temperature > 0.0) {
        return Err(Error::InvalidSystem(format!("temperature {temperature} must be > 0")));
    }
    let kind = system.statistics;
    system
        .levels
        .iter()
        .zip(system.energies())
        .enumerate()
        .map(|(j, (level, energy))| {
            let target = (energy - mu) / temperature;
            match invert(kind, level.z, target)? {
                Inversion::Resolved(n, p) => LevelOccupancy::evaluate(kind, level.z, n, p),
                Inversion::Indifferent => LevelOccupancy::evaluate(kind, level.z, 0.0, Pinning::AtEmpty),
                Inversion::Diverges => Err(Error::BoseDivergence {
                    level: j,
                    mu,
                    energy,
                }),
            }
        })
        .collect()
}

struct Reduced {
    shift: f64,
    occupancies: Vec<LevelOccupancy>,
    reservoir: Option<usize>,
    shift_interval: Option<(f64, f64)>,
}

/// Occupancies for a given reduced shift; `offsets[j] + shift` is the
/// target of level `j`. Indifferent levels are reported empty.
fn occupancies_for(system: &SystemSpec, offsets: &[f64], shift: f64) -> Result<Vec<LevelOccupancy>> {
    let kind = system.statistics;
    system
        .levels
        .iter()
        .zip(offsets)
        .enumerate()
        .map(|(j, (level, off))| match invert(kind, level.z, off + shift)? {
            Inversion::Resolved(n, p) => LevelOccupancy::evaluate(kind, level.z, n, p),
            Inversion::Indifferent => LevelOccupancy::evaluate(kind, level.z, 0.0, Pinning::AtEmpty),
            Inversion::Diverges => Err(Error::BoseDivergence {
                level: j,
                mu: f64::NAN,
                energy: f64::NAN,
            }),
        })
        .collect()
}

fn excess(system: &SystemSpec, occ: &[LevelOccupancy]) -> f64 {
    let held: f64 = system
        .levels
        .iter()
        .zip(occ)
        .map(|(l, o)| l.z * o.n)
        .sum();
    held - system.n_total
}

/// `d(Σ z n)/ds = Σ_interior 1/θ⁽¹⁾`.
fn excess_slope(occ: &[LevelOccupancy]) -> f64 {
    occ.iter()
        .filter(|o| o.pinned == Pinning::Interior && o.theta1 != 0.0)
        .map(|o| 1.0 / o.theta1)
        .sum()
}

/// Finds the shift `s` at which `Σ z_j n_j(offsets_j + s) = N`.
///
/// The held particle number is nonincreasing in `s`; the root is located
/// by Newton steps kept inside a bisection bracket.
fn solve_reduced(system: &SystemSpec, offsets: &[f64]) -> Result<Reduced> {
    let kind = system.statistics;
    let n_total = system.n_total;
    let tolerance = CONSERVATION_TOLERANCE * n_total.max(1.0);
    let target_tolerance = 1e-3 * tolerance;

    let mut upper_edges = Vec::with_capacity(offsets.len());
    let mut lower_edges = Vec::with_capacity(offsets.len());
    for (level, off) in system.levels.iter().zip(offsets) {
        upper_edges.push(theta(kind, level.z, 0.0)? - off);
        if kind == Statistics::Fermi {
            lower_edges.push(theta(kind, level.z, 1.0)? - off);
        }
    }
    let fold_max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let fold_min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);

    // Above s_hi every level is empty.
    let mut s_hi = fold_max(&upper_edges) + 1.0;
    let mut s_lo;
    let mut reservoir = None;

    match kind {
        Statistics::Fermi => {
            s_lo = fold_min(&lower_edges) - 1.0;
        }
        Statistics::Bose => {
            let lowest = offsets.iter().copied().fold(f64::INFINITY, f64::min);
            let divergent = system
                .levels
                .iter()
                .zip(offsets)
                .any(|(l, &off)| off == lowest && l.z > 1.0);
            if divergent {
                // Walk down towards the divergence at s = -lowest.
                let mut gap = (s_hi + lowest).min(1.0);
                let mut guard = 0;
                loop {
                    let occ = occupancies_for(system, offsets, gap - lowest)?;
                    if excess(system, &occ) >= 0.0 {
                        break;
                    }
                    s_hi = gap - lowest;
                    gap *= 0.5;
                    guard += 1;
                    if guard > 2000 || gap == 0.0 {
                        return Err(Error::BracketFailure("Bose chemical potential"));
                    }
                }
                s_lo = gap - lowest;
            } else {
                // Only degeneracy-1 levels at the bottom: they stay empty
                // for s > -lowest and absorb any residue at s = -lowest.
                s_lo = -lowest;
                let occ = occupancies_for(system, offsets, s_lo)?;
                let missing = -excess(system, &occ);
                if missing > 0.0 {
                    let j = offsets
                        .iter()
                        .position(|&off| off == lowest)
                        .expect("lowest offset exists");
                    let mut occupancies = occ;
                    let n = missing / system.levels[j].z;
                    occupancies[j] = LevelOccupancy {
                        n,
                        pinned: Pinning::Interior,
                        theta: 0.0,
                        theta1: 0.0,
                    };
                    reservoir = Some(j);
                    return Ok(Reduced {
                        shift: s_lo,
                        occupancies,
                        reservoir,
                        shift_interval: None,
                    });
                }
            }
        }
    }

    let mut s = 0.5 * (s_lo + s_hi);
    let mut occ = occupancies_for(system, offsets, s)?;
    let mut g = excess(system, &occ);
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        if g.abs() <= target_tolerance {
            converged = true;
            break;
        }
        if g > 0.0 {
            s_lo = s;
        } else {
            s_hi = s;
        }
        let slope = excess_slope(&occ);
        let mut next = if slope != 0.0 { s - g / slope } else { f64::NAN };
        if !(next > s_lo && next < s_hi) {
            next = 0.5 * (s_lo + s_hi);
        }
        if next == s || s_hi - s_lo <= 4.0 * f64::EPSILON * s_hi.abs().max(s_lo.abs()) {
            break;
        }
        s = next;
        occ = occupancies_for(system, offsets, s)?;
        g = excess(system, &occ);
    }
    if !converged && g.abs() > tolerance {
        return Err(Error::BracketFailure("particle conservation"));
    }

    let shift_interval = if occ.iter().all(|o| o.pinned != Pinning::Interior) {
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for (j, o) in occ.iter().enumerate() {
            match o.pinned {
                Pinning::AtEmpty => lower = lower.max(upper_edges[j]),
                Pinning::AtFull => upper = upper.min(lower_edges[j]),
                Pinning::Interior => {}
            }
        }
        Some((lower, upper))
    } else {
        None
    };

    Ok(Reduced {
        shift: s,
        occupancies: occ,
        reservoir,
        shift_interval,
    })
}

/// Entropy, energy and pressure of a set of level occupancies.
pub fn state_observables(system: &SystemSpec, occupancies: &[LevelOccupancy]) -> Result<(f64, f64, f64)> {
    let mut entropy = 0.0;
    let mut energy = 0.0;
    for ((level, occ), eps) in system.levels.iter().zip(occupancies).zip(system.energies()) {
        entropy += entropy_level(system.statistics, level.z, occ.n)?;
        energy += level.z * occ.n * eps;
    }
    let pressure = system.alpha / system.volume * energy;
    Ok((entropy, energy, pressure))
}

fn midpoint_or_finite_end(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo,
        (false, true) => hi,
        (false, false) => 0.0,
    }
}

/// Equilibrium state at temperature `T > 0` for fixed particle number.
pub fn solve_mu(temperature: f64, system: &SystemSpec) -> Result<EquilibriumState> {
    system.validate()?;
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::InvalidSystem(format!(
            "temperature {temperature} must be finite and > 0"
        )));
    }
    let energies = system.energies();
    let reference = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let offsets: Vec<f64> = energies.iter().map(|e| (e - reference) / temperature).collect();
    let reduced = solve_reduced(system, &offsets)?;

    let to_mu = |s: f64| reference - temperature * s;
    let (mu, mu_interval) = match reduced.shift_interval {
        Some((s_lo, s_hi)) => {
            let (lo, hi) = (to_mu(s_hi), to_mu(s_lo));
            (midpoint_or_finite_end(lo, hi), Some((lo, hi)))
        }
        None => (to_mu(reduced.shift), None),
    };
    let (entropy, energy, pressure) = state_observables(system, &reduced.occupancies)?;
    let active_count = reduced
        .occupancies
        .iter()
        .filter(|o| o.pinned == Pinning::Interior)
        .count();
    Ok(EquilibriumState {
        temperature,
        mu,
        mu_interval,
        occupancies: reduced.occupancies,
        reservoir: reduced.reservoir,
        entropy,
        energy,
        pressure,
        active_count,
    })
}

/// Populations in the limit `T → ∞`, where every interior level shares a
/// common value of θ.
///
/// Levels whose θ range does not contain that common value stay pinned,
/// so systems with a completion temperature return their pinned
/// high-temperature state.
pub fn high_temperature_limit(system: &SystemSpec) -> Result<Vec<LevelOccupancy>> {
    system.validate()?;
    let offsets = vec![0.0; system.levels.len()];
    Ok(solve_reduced(system, &offsets)?.occupancies)
}

/// Exact `T = 0` state: levels filled in order of energy, fermions capped
/// at one particle per state.
///
/// Levels sharing an energy split their particles at a common θ.
pub fn ground_state(system: &SystemSpec) -> Result<EquilibriumState> {
    system.validate()?;
    let kind = system.statistics;
    let energies = system.energies();
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));

    let mut populations = vec![0.0; energies.len()];
    let mut pinned = vec![Pinning::AtEmpty; energies.len()];
    let mut remaining = system.n_total;
    let mut mu = None;
    let mut exact_fill_at = None;

    let mut i = 0;
    while i < order.len() {
        let e = energies[order[i]];
        let group: Vec<usize> = order[i..]
            .iter()
            .copied()
            .take_while(|&j| energies[j] == e)
            .collect();
        i += group.len();
        if remaining <= 0.0 {
            continue;
        }
        let capacity: f64 = group.iter().map(|&j| system.levels[j].z).sum();
        if kind == Statistics::Fermi && remaining >= capacity {
            for &j in &group {
                populations[j] = 1.0;
                pinned[j] = Pinning::AtFull;
            }
            remaining -= capacity;
            if remaining == 0.0 {
                exact_fill_at = Some(e);
            }
            continue;
        }
        // Partially filled group: share particles at a common θ.
        let sub = SystemSpec {
            statistics: kind,
            levels: group.iter().map(|&j| system.levels[j]).collect(),
            n_total: remaining,
            volume: system.volume,
            alpha: system.alpha,
        };
        let shared = if group.len() == 1 {
            vec![remaining / sub.levels[0].z]
        } else {
            high_temperature_limit(&sub)?.iter().map(|o| o.n).collect()
        };
        for (k, &j) in group.iter().enumerate() {
            populations[j] = shared[k];
            pinned[j] = if shared[k] > 0.0 {
                Pinning::Interior
            } else {
                Pinning::AtEmpty
            };
        }
        remaining = 0.0;
        mu = Some(e);
    }

    let mu_interval = match (mu, exact_fill_at) {
        (Some(_), _) => None,
        (None, Some(e)) => {
            let next = energies
                .iter()
                .copied()
                .filter(|&x| x > e)
                .fold(f64::INFINITY, f64::min);
            Some((e, next))
        }
        (None, None) => None,
    };
    let mu = match mu_interval {
        Some((lo, hi)) => midpoint_or_finite_end(lo, hi),
        None => mu.unwrap_or(f64::NAN),
    };

    let occupancies = system
        .levels
        .iter()
        .zip(populations.iter().zip(&pinned))
        .map(|(l, (&n, &p))| LevelOccupancy::evaluate(kind, l.z, n, p))
        .collect::<Result<Vec<_>>>()?;
    let (entropy, energy, pressure) = state_observables(system, &occupancies)?;
    let active_count = pinned.iter().filter(|&&p| p == Pinning::Interior).count();
    Ok(EquilibriumState {
        temperature: 0.0,
        mu,
        mu_interval,
        occupancies,
        reservoir: None,
        entropy,
        energy,
        pressure,
        active_count,
    })
}
