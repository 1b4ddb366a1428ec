//! Equilibrium thermodynamics of non-interacting fermions and bosons on a
//! finite set of degenerate levels, for any (possibly small or fractional)
//! particle number.
//!
//! Factorials in the combinatorial weights are continued through the gamma
//! function, so per-level populations satisfy `θ_j(n_j) = (ε_j − μ)/T`
//! with digamma-based occupation functions `θ_j`. Populations can pin at
//! empty (or, for fermions, full) levels. This produces the characteristic
//! onset and completion temperatures and the heat-capacity jumps of
//! two-level systems.
//!
//! Module map:
//!
//! - [`specfun`]: `ln Γ`, ψ, ψ⁽¹⁾ and a quadrature oracle for θ
//! - [`stat_core`]: system model, θ, θ⁽¹⁾, level entropy, Φ
//! - [`equilibrium`]: chemical-potential solve with pinning
//! - [`thermo`]: response sums, heat capacities, thermal coefficients
//! - [`two_level`]: characteristic temperatures, regions, plateaus, jumps
//! - [`cli`]: sweeps, region scans, figure presets, self-verification

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod specfun;
pub mod stat_core;
pub mod thermo;
pub mod two_level;

pub use equilibrium::{ground_state, high_temperature_limit, solve_mu, EquilibriumState};
pub use error::{Error, Result};
pub use stat_core::{Level, LevelOccupancy, Pinning, Statistics, SystemSpec};
pub use thermo::{ResponseSet, ResponseSums};
pub use two_level::{CharTemps, RegionClass, TwoLevelParams};
