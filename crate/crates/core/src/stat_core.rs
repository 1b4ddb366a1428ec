//! System model and per-level statistical functions.
//!
//! A level `j` has energy `ε_j = ξ_j V^{-α}` and degeneracy `z_j`; its
//! population `n_j = N_j / z_j` is the mean number of particles per state.
//! Equilibrium requires `θ_j(n_j) = (ε_j − μ) / T` on every level that is
//! not pinned at a boundary.
//!
//! `theta_*_deriv` returns the trigamma difference exactly as it enters the
//! response sums. The derivative of θ with respect to `n` carries an extra
//! factor `z`: `∂θ/∂n = z · theta_deriv`. Callers building `Σ 1/θ⁽¹⁾` must
//! use `theta_deriv` directly, without the `z`.
//!
//! Units: `k_B = 1`, temperatures are energies.

use crate::error::{Error, Result};
use crate::specfun::{digamma, ln_gamma, trigamma};

/// Quantum statistics of the particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Fermi,
    Bose,
}

impl Statistics {
    pub fn name(self) -> &'static str {
        match self {
            Statistics::Fermi => "fermi",
            Statistics::Bose => "bose",
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fermi" | "f" => Ok(Statistics::Fermi),
            "bose" | "b" => Ok(Statistics::Bose),
            other => Err(format!("unknown statistics '{other}' (expected fermi or bose)")),
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One degenerate energy level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    /// Energy coefficient ξ, so that `ε = ξ V^{-α}`.
    pub xi: f64,
    /// Degeneracy, real and at least 1.
    pub z: f64,
}

impl Level {
    pub fn new(xi: f64, z: f64) -> Self {
        Self { xi, z }
    }

    /// Level energy `ξ V^{-α}`.
    pub fn energy(&self, volume: f64, alpha: f64) -> f64 {
        energy_of_level(self, volume, alpha)
    }
}

/// Default volume exponent, `ε ∝ V^{-2/3}` for a box or a sphere.
pub const DEFAULT_ALPHA: f64 = 2.0 / 3.0;

/// A system of non-interacting particles on a finite set of levels.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub statistics: Statistics,
    pub levels: Vec<Level>,
    /// Total (mean) particle number; may be fractional.
    pub n_total: f64,
    pub volume: f64,
    pub alpha: f64,
}

impl SystemSpec {
    /// Builds and validates a system.
    pub fn new(
        statistics: Statistics,
        levels: Vec<Level>,
        n_total: f64,
        volume: f64,
        alpha: f64,
    ) -> Result<Self> {
        let spec = Self {
            statistics,
            levels,
            n_total,
            volume,
            alpha,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Two levels with energies `eps1 < eps2` at unit volume and α = 2/3.
    pub fn two_level(
        statistics: Statistics,
        z1: f64,
        z2: f64,
        n_total: f64,
        eps1: f64,
        eps2: f64,
    ) -> Result<Self> {
        Self::new(
            statistics,
            vec![Level::new(eps1, z1), Level::new(eps2, z2)],
            n_total,
            1.0,
            DEFAULT_ALPHA,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::InvalidSystem("no levels".into()));
        }
        for (j, level) in self.levels.iter().enumerate() {
            if !(level.z >= 1.0) || !level.z.is_finite() {
                return Err(Error::InvalidSystem(format!(
                    "level {j}: degeneracy {} must be a finite value >= 1",
                    level.z
                )));
            }
            if !level.xi.is_finite() {
                return Err(Error::InvalidSystem(format!("level {j}: energy is not finite")));
            }
        }
        if !(self.volume > 0.0) || !self.volume.is_finite() {
            return Err(Error::InvalidSystem(format!("volume {} must be > 0", self.volume)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidSystem(format!("alpha {} must be > 0", self.alpha)));
        }
        if !(self.n_total > 0.0) || !self.n_total.is_finite() {
            return Err(Error::InvalidSystem(format!(
                "particle number {} must be > 0",
                self.n_total
            )));
        }
        if self.statistics == Statistics::Fermi {
            let capacity = self.capacity();
            if self.n_total > capacity {
                return Err(Error::InfeasibleParticleNumber {
                    n_total: self.n_total,
                    capacity,
                });
            }
        }
        Ok(())
    }

    /// `Σ z_j`, the Fermi capacity.
    pub fn capacity(&self) -> f64 {
        self.levels.iter().map(|l| l.z).sum()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|l| l.energy(self.volume, self.alpha))
            .collect()
    }
}

/// Whether a level sits in the interior of its population range or is
/// pinned at a boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pinning {
    Interior,
    AtEmpty,
    /// Fermi only, `n = 1`.
    AtFull,
}

impl Pinning {
    pub fn label(self) -> &'static str {
        match self {
            Pinning::Interior => "interior",
            Pinning::AtEmpty => "empty",
            Pinning::AtFull => "full",
        }
    }
}

/// Resolved state of one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelOccupancy {
    pub n: f64,
    pub pinned: Pinning,
    pub theta: f64,
    pub theta1: f64,
}

impl LevelOccupancy {
    pub fn evaluate(kind: Statistics, z: f64, n: f64, pinned: Pinning) -> Result<Self> {
        Ok(Self {
            n,
            pinned,
            theta: theta(kind, z, n)?,
            theta1: theta_deriv(kind, z, n)?,
        })
    }
}

/// `ε = ξ V^{-α}`.
pub fn energy_of_level(level: &Level, volume: f64, alpha: f64) -> f64 {
    level.xi * volume.powf(-alpha)
}

/// `dε/dV = −α ε / V`.
pub fn energy_slope(energy: f64, volume: f64, alpha: f64) -> f64 {
    -alpha * energy / volume
}

/// `d²ε/dV² = α (α + 1) ε / V²`.
pub fn energy_curvature(energy: f64, volume: f64, alpha: f64) -> f64 {
    alpha * (alpha + 1.0) * energy / (volume * volume)
}

fn check_z(function: &'static str, z: f64) -> Result<()> {
    if z >= 1.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: z,
            domain: "z >= 1",
        })
    }
}

fn check_bose_n(function: &'static str, n: f64) -> Result<()> {
    if n >= 0.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: n,
            domain: "n >= 0",
        })
    }
}

fn check_fermi_n(function: &'static str, n: f64) -> Result<()> {
    if (0.0..=1.0).contains(&n) {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: n,
            domain: "0 <= n <= 1",
        })
    }
}

/// `θ_B(n) = ψ(zn + z) − ψ(zn + 1)`.
pub fn theta_bose(z: f64, n: f64) -> Result<f64> {
    check_z("theta_bose", z)?;
    check_bose_n("theta_bose", n)?;
    if z == 1.0 {
        return Ok(0.0);
    }
    let zn = z * n;
    Ok(digamma(zn + z)? - digamma(zn + 1.0)?)
}

/// `ψ⁽¹⁾(zn + z) − ψ⁽¹⁾(zn + 1)`; negative for `z > 1`.
pub fn theta_bose_deriv(z: f64, n: f64) -> Result<f64> {
    check_z("theta_bose_deriv", z)?;
    check_bose_n("theta_bose_deriv", n)?;
    if z == 1.0 {
        return Ok(0.0);
    }
    let zn = z * n;
    Ok(trigamma(zn + z)? - trigamma(zn + 1.0)?)
}

/// `θ_F(n) = ψ(z(1 − n) + 1) − ψ(zn + 1)`.
///
/// Evaluated on `n ≤ 1/2` and reflected, so `θ_F(1 − n) = −θ_F(n)` holds
/// bit for bit.
pub fn theta_fermi(z: f64, n: f64) -> Result<f64> {
    check_z("theta_fermi", z)?;
    check_fermi_n("theta_fermi", n)?;
    let (lower, sign) = if n <= 0.5 { (n, 1.0) } else { (1.0 - n, -1.0) };
    let value = digamma(z * (1.0 - lower) + 1.0)? - digamma(z * lower + 1.0)?;
    Ok(sign * value)
}

/// `−ψ⁽¹⁾(z(1 − n) + 1) − ψ⁽¹⁾(zn + 1)`; always negative.
pub fn theta_fermi_deriv(z: f64, n: f64) -> Result<f64> {
    check_z("theta_fermi_deriv", z)?;
    check_fermi_n("theta_fermi_deriv", n)?;
    let lower = if n <= 0.5 { n } else { 1.0 - n };
    Ok(-trigamma(z * (1.0 - lower) + 1.0)? - trigamma(z * lower + 1.0)?)
}

pub fn theta(kind: Statistics, z: f64, n: f64) -> Result<f64> {
    match kind {
        Statistics::Fermi => theta_fermi(z, n),
        Statistics::Bose => theta_bose(z, n),
    }
}

pub fn theta_deriv(kind: Statistics, z: f64, n: f64) -> Result<f64> {
    match kind {
        Statistics::Fermi => theta_fermi_deriv(z, n),
        Statistics::Bose => theta_bose_deriv(z, n),
    }
}

/// Nonequilibrium entropy of one level, the log of the gamma-function
/// statistical weight.
pub fn entropy_level(kind: Statistics, z: f64, n: f64) -> Result<f64> {
    check_z("entropy_level", z)?;
    let s = match kind {
        Statistics::Bose => {
            check_bose_n("entropy_level", n)?;
            if n == 0.0 || z == 1.0 {
                return Ok(0.0);
            }
            let zn = z * n;
            ln_gamma(zn + z)? - ln_gamma(zn + 1.0)? - ln_gamma(z)?
        }
        Statistics::Fermi => {
            check_fermi_n("entropy_level", n)?;
            let lower = if n <= 0.5 { n } else { 1.0 - n };
            if lower == 0.0 {
                return Ok(0.0);
            }
            ln_gamma(z + 1.0)? - ln_gamma(z * lower + 1.0)? - ln_gamma(z * (1.0 - lower) + 1.0)?
        }
    };
    Ok(s.max(0.0))
}

/// `dS_j/dn_j = z θ(z, n)`.
pub fn entropy_level_deriv(kind: Statistics, z: f64, n: f64) -> Result<f64> {
    Ok(z * theta(kind, z, n)?)
}

/// Two-level difference `Φ(n₂, n₁) = θ₂(n₂) − θ₁(n₁)`, with `z2` inside
/// the upper-level function and `z1` inside the lower one.
pub fn phi(kind: Statistics, z1: f64, z2: f64, n2: f64, n1: f64) -> Result<f64> {
    Ok(theta(kind, z2, n2)? - theta(kind, z1, n1)?)
}
