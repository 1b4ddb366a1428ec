//! Response sums and thermodynamic coefficients at fixed particle number.
//!
//! With `w_j = 1/θ⁽¹⁾_j` over the interior levels:
//!
//! ```text
//! A  = Σ w        A1 = Σ w θ        A2 = Σ w θ²
//! B  = Σ w ε'     B1 = Σ w θ ε'     D  = Σ_all z n ε'' + Σ w ε'² / T
//! ```
//!
//! where `ε' = dε/dV` and `ε'' = d²ε/dV²`. Pinned levels do not move
//! (`dn = 0`), so they enter only through the `z n ε''` part of `D`.
//!
//! The combinations that appear in the coefficients are evaluated in
//! pairwise form, e.g. `A1² − A·A2 = −Σ_{j<k} w_j w_k (θ_j − θ_k)²`.
//! Since every `w_j < 0`, this makes `C_V ≥ 0` hold exactly and gives
//! zero for a single interior level.
//!
//! Sign chain: `θ⁽¹⁾ < 0` gives `A < 0` and `A1² − A·A2 ≤ 0`, so
//! `C_V = (A1² − A·A2)/A ≥ 0` without inserting absolute values.

use crate::equilibrium::EquilibriumState;
use crate::error::{Error, Result};
use crate::stat_core::{energy_curvature, energy_slope, Pinning, SystemSpec};

/// Response sums for a solved state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseSums {
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
    pub b1: f64,
    pub d: f64,
    /// `A1² − A·A2`.
    pub gram: f64,
    /// `A·B1 − A1·B`.
    pub cross: f64,
    /// `B² − A·D·T`.
    pub stiffness: f64,
    pub temperature: f64,
    /// Present when a Bose reservoir level pins μ to its energy; holds the
    /// finite limits of the combinations as that level's `1/θ⁽¹⁾ → −∞`.
    pub reservoir: Option<ReservoirLimit>,
}

/// Limits used when a degeneracy-1 Bose level sits at `μ = ε_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirLimit {
    /// `−A2` over the other interior levels.
    pub cv: f64,
    /// `Σ w θ (ε' − ε'_r)` over the other interior levels.
    pub cross: f64,
    /// `Σ w (ε' − ε'_r)² + T Σ_all z n ε''`.
    pub stiffness: f64,
}

impl ResponseSums {
    /// True when no level can exchange particles.
    pub fn is_frozen(&self) -> bool {
        self.a == 0.0 && self.reservoir.is_none()
    }
}

struct ActiveTerm {
    w: f64,
    theta: f64,
    slope: f64,
}

/// Builds `A, A1, A2, B, B1, D` and the pairwise combinations.
pub fn response_sums(state: &EquilibriumState, system: &SystemSpec) -> ResponseSums {
    let temperature = state.temperature;
    let energies = system.energies();
    let (v, alpha) = (system.volume, system.alpha);

    let mut d0 = 0.0;
    let mut active = Vec::new();
    let mut reservoir_slope = None;
    for (j, occ) in state.occupancies.iter().enumerate() {
        let eps = energies[j];
        d0 += system.levels[j].z * occ.n * energy_curvature(eps, v, alpha);
        if state.reservoir == Some(j) {
            reservoir_slope = Some(energy_slope(eps, v, alpha));
            continue;
        }
        if occ.pinned == Pinning::Interior && temperature > 0.0 && occ.theta1 != 0.0 {
            active.push(ActiveTerm {
                w: 1.0 / occ.theta1,
                theta: occ.theta,
                slope: energy_slope(eps, v, alpha),
            });
        }
    }

    let mut s = ResponseSums {
        a: 0.0,
        a1: 0.0,
        a2: 0.0,
        b: 0.0,
        b1: 0.0,
        d: d0,
        gram: 0.0,
        cross: 0.0,
        stiffness: 0.0,
        temperature,
        reservoir: None,
    };
    for t in &active {
        s.a += t.w;
        s.a1 += t.w * t.theta;
        s.a2 += t.w * t.theta * t.theta;
        s.b += t.w * t.slope;
        s.b1 += t.w * t.theta * t.slope;
        s.d += t.w * t.slope * t.slope / temperature;
    }
    let mut spread = 0.0;
    for (i, p) in active.iter().enumerate() {
        for q in &active[i + 1..] {
            let ww = p.w * q.w;
            s.gram -= ww * (p.theta - q.theta).powi(2);
            s.cross += ww * (q.slope - p.slope) * (q.theta - p.theta);
            spread += ww * (p.slope - q.slope).powi(2);
        }
    }
    s.stiffness = -spread - s.a * temperature * d0;

    if let Some(r_slope) = reservoir_slope {
        let mut cross = 0.0;
        let mut stiffness = temperature * d0;
        for t in &active {
            cross += t.w * t.theta * (t.slope - r_slope);
            stiffness += t.w * (t.slope - r_slope).powi(2);
        }
        s.reservoir = Some(ReservoirLimit {
            cv: -s.a2,
            cross,
            stiffness,
        });
    }
    s
}

/// `(C_V, C_p)` at fixed particle number.
///
/// `C_V = (A1² − A·A2)/A` and
/// `C_p = C_V − (A·B1 − A1·B)² / (A·(B² − A·D·T))`. A frozen state has
/// both equal to zero.
pub fn heat_capacities(sums: &ResponseSums) -> Result<(f64, f64)> {
    if let Some(r) = sums.reservoir {
        if r.stiffness == 0.0 {
            return Err(Error::SingularResponse("reservoir stiffness vanishes"));
        }
        return Ok((r.cv, r.cv + r.cross * r.cross / r.stiffness));
    }
    if sums.is_frozen() {
        return Ok((0.0, 0.0));
    }
    let cv = sums.gram / sums.a + 0.0;
    if sums.stiffness == 0.0 {
        return Err(Error::SingularResponse("B² − A·D·T vanishes"));
    }
    let cp = cv - sums.cross * sums.cross / (sums.a * sums.stiffness) + 0.0;
    Ok((cv, cp))
}

/// `(α_pN, γ_TN, β_VN)`: volumetric expansion, isothermal
/// compressibility, isochoric thermal pressure coefficient.
pub fn thermo_coefficients(sums: &ResponseSums, volume: f64, pressure: f64) -> Result<(f64, f64, f64)> {
    let t = sums.temperature;
    let beta_of = |num: f64, den: f64| {
        if pressure == 0.0 {
            Err(Error::SingularResponse("β_V undefined at zero pressure"))
        } else {
            Ok(num / (pressure * den))
        }
    };
    if let Some(r) = sums.reservoir {
        if r.stiffness == 0.0 {
            return Err(Error::SingularResponse("reservoir stiffness vanishes"));
        }
        let alpha_p = r.cross / (volume * r.stiffness);
        let gamma_t = t / (volume * r.stiffness);
        return Ok((alpha_p, gamma_t, beta_of(r.cross, t)?));
    }
    if sums.is_frozen() {
        // A, B → 0 in −A T / (V (B² − A D T)) leaves 1/(V D).
        if sums.d == 0.0 {
            return Err(Error::SingularResponse("D vanishes in a frozen state"));
        }
        return Ok((0.0, 1.0 / (volume * sums.d), beta_of(0.0, 1.0)?));
    }
    if sums.stiffness == 0.0 {
        return Err(Error::SingularResponse("B² − A·D·T vanishes"));
    }
    let alpha_p = -sums.cross / (volume * sums.stiffness) + 0.0;
    let gamma_t = -sums.a * t / (volume * sums.stiffness);
    let beta_v = beta_of(sums.cross, t * sums.a)? + 0.0;
    Ok((alpha_p, gamma_t, beta_v))
}

/// All response quantities of a state. Entries that are undefined for
/// the state (a vanishing denominator) are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseSet {
    pub sums: ResponseSums,
    pub cv: f64,
    pub cp: Option<f64>,
    pub alpha_p: Option<f64>,
    pub gamma_t: Option<f64>,
    pub beta_v: Option<f64>,
}

impl ResponseSet {
    pub fn compute(state: &EquilibriumState, system: &SystemSpec) -> Self {
        let sums = response_sums(state, system);
        let (cv, cp) = match heat_capacities(&sums) {
            Ok((cv, cp)) => (cv, Some(cp)),
            Err(_) => {
                let cv = match sums.reservoir {
                    Some(r) => r.cv,
                    None if sums.is_frozen() => 0.0,
                    None => sums.gram / sums.a,
                };
                (cv, None)
            }
        };
        let (alpha_p, gamma_t, beta_v) = match thermo_coefficients(&sums, system.volume, state.pressure) {
            Ok((a, g, b)) => (Some(a), Some(g), Some(b)),
            Err(_) => {
                // β_V alone fails at p = 0; keep the others when defined.
                let p = if state.pressure == 0.0 { 1.0 } else { state.pressure };
                match thermo_coefficients(&sums, system.volume, p) {
                    Ok((a, g, _)) => (Some(a), Some(g), None),
                    Err(_) => (None, None, None),
                }
            }
        };
        Self {
            sums,
            cv,
            cp,
            alpha_p,
            gamma_t,
            beta_v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{ground_state, solve_mu};
    use crate::stat_core::Statistics;

    fn two(kind: Statistics, z1: f64, z2: f64, n: f64) -> SystemSpec {
        SystemSpec::two_level(kind, z1, z2, n, 1.0, 2.0).unwrap()
    }

    #[test]
    fn frozen_state_has_no_response() {
        let sys = two(Statistics::Fermi, 16.0, 16.0, 16.0);
        let st = solve_mu(0.01, &sys).unwrap();
        let sums = response_sums(&st, &sys);
        assert_eq!((sums.a, sums.a1, sums.a2), (0.0, 0.0, 0.0));
        assert_eq!(heat_capacities(&sums).unwrap(), (0.0, 0.0));
        let (ap, gt, bv) = thermo_coefficients(&sums, sys.volume, st.pressure).unwrap();
        assert_eq!(ap, 0.0);
        assert_eq!(bv, 0.0);
        let d = sys.alpha * (1.0 + sys.alpha) * st.energy / (sys.volume * sys.volume);
        assert!((gt - 1.0 / (sys.volume * d)).abs() < 1e-12);
    }

    #[test]
    fn single_active_level_has_zero_gram() {
        let sys = two(Statistics::Bose, 8.0, 96.0, 16.0);
        let st = solve_mu(0.1, &sys).unwrap();
        assert_eq!(st.active_count, 1);
        let sums = response_sums(&st, &sys);
        assert_eq!(sums.gram, 0.0);
        assert_eq!(sums.cross, 0.0);
        let (cv, cp) = heat_capacities(&sums).unwrap();
        assert_eq!(cv, 0.0);
        assert_eq!(cp, 0.0);
    }

    #[test]
    fn ground_state_is_inert() {
        let sys = two(Statistics::Bose, 8.0, 96.0, 16.0);
        let g = ground_state(&sys).unwrap();
        let r = ResponseSet::compute(&g, &sys);
        assert_eq!(r.cv, 0.0);
        assert_eq!(r.cp, Some(0.0));
        // p = α (N/V) ε_1 at T = 0
        assert!((g.pressure - sys.alpha * 16.0 * 1.0).abs() < 1e-12);
    }

    #[test]
    fn onset_jump_bose_fig3a() {
        let sys = two(Statistics::Bose, 8.0, 96.0, 16.0);
        let t_c = 1.0 / crate::stat_core::phi(Statistics::Bose, 8.0, 96.0, 0.0, 2.0).unwrap();
        let above = ResponseSet::compute(&solve_mu(t_c * (1.0 + 1e-8), &sys).unwrap(), &sys);
        let below = ResponseSet::compute(&solve_mu(t_c * (1.0 - 1e-8), &sys).unwrap(), &sys);
        assert!((above.cv - below.cv - 13.84).abs() < 0.01);
        assert!((above.cp.unwrap() - below.cp.unwrap() - 14.92).abs() < 0.01);
    }

    #[test]
    fn identities_on_interior_state() {
        let sys = two(Statistics::Fermi, 16.0, 16.0, 14.0);
        let st = solve_mu(0.6, &sys).unwrap();
        let r = ResponseSet::compute(&st, &sys);
        let (cp, ap, gt, bv) = (r.cp.unwrap(), r.alpha_p.unwrap(), r.gamma_t.unwrap(), r.beta_v.unwrap());
        let rhs = st.temperature * sys.volume * ap * ap / gt;
        assert!((cp - r.cv - rhs).abs() <= 1e-8 * cp.max(1.0));
        assert!((st.pressure * bv - ap / gt).abs() <= 1e-8 * (ap / gt).abs().max(1e-12));
        assert!(r.cv > 0.0 && cp >= r.cv && gt > 0.0);
        // the pairwise forms agree with the raw sums
        let s = r.sums;
        assert!((s.gram - (s.a1 * s.a1 - s.a * s.a2)).abs() < 1e-9 * s.a1.abs().max(1.0).powi(2));
        assert!((s.cross - (s.a * s.b1 - s.a1 * s.b)).abs() < 1e-9 * (s.a * s.b1).abs().max(1.0));
        let raw = s.b * s.b - s.a * s.d * s.temperature;
        assert!((s.stiffness - raw).abs() < 1e-9 * raw.abs().max(1.0));
    }

    #[test]
    fn zero_ground_energy_flags_singular_cp() {
        let sys = SystemSpec::two_level(Statistics::Bose, 8.0, 96.0, 16.0, 0.0, 1.0).unwrap();
        let st = solve_mu(0.1, &sys).unwrap();
        let sums = response_sums(&st, &sys);
        assert!(matches!(heat_capacities(&sums), Err(Error::SingularResponse(_))));
        let r = ResponseSet::compute(&st, &sys);
        assert_eq!(r.cv, 0.0);
        assert_eq!(r.cp, None);
    }

    #[test]
    fn reservoir_limit_identity() {
        let sys = SystemSpec::two_level(Statistics::Bose, 1.0, 3.0, 5.0, 1.0, 2.0).unwrap();
        let st = solve_mu(1.0, &sys).unwrap();
        assert!(st.reservoir.is_some());
        let r = ResponseSet::compute(&st, &sys);
        let (cp, ap, gt) = (r.cp.unwrap(), r.alpha_p.unwrap(), r.gamma_t.unwrap());
        assert!(r.cv > 0.0);
        let rhs = st.temperature * sys.volume * ap * ap / gt;
        assert!((cp - r.cv - rhs).abs() <= 1e-10 * cp);
    }

    fn at(sys: &SystemSpec, t: f64, v: f64) -> EquilibriumState {
        let mut moved = sys.clone();
        moved.volume = v;
        solve_mu(t, &moved).unwrap()
    }

    #[test]
    fn finite_difference_oracles() {
        let cases = [
            (Statistics::Fermi, 16.0, 16.0, 14.0, 0.6),
            (Statistics::Fermi, 16.0, 3.0, 18.0, 1.3),
            (Statistics::Bose, 8.0, 96.0, 16.0, 0.5),
            (Statistics::Bose, 3.5, 7.25, 0.3, 0.05),
            (Statistics::Bose, 1.0, 3.0, 5.0, 1.0),
        ];
        for (kind, z1, z2, n, t) in cases {
            let sys = two(kind, z1, z2, n);
            let v = sys.volume;
            let st = at(&sys, t, v);
            let r = ResponseSet::compute(&st, &sys);
            let h = 1e-5;

            let ds = (at(&sys, t * (1.0 + h), v).entropy - at(&sys, t * (1.0 - h), v).entropy) / (2.0 * h * t);
            assert!((r.cv - t * ds).abs() <= 1e-6 * r.cv.max(1.0), "{kind:?} C_V {} vs {}", r.cv, t * ds);

            let dp_dv = (at(&sys, t, v * (1.0 + h)).pressure - at(&sys, t, v * (1.0 - h)).pressure) / (2.0 * h * v);
            let gamma = -1.0 / (v * dp_dv);
            let gt = r.gamma_t.unwrap();
            assert!((gt - gamma).abs() <= 1e-6 * gt, "{kind:?} γ_T {gt} vs {gamma}");

            let dp_dt = (at(&sys, t * (1.0 + h), v).pressure - at(&sys, t * (1.0 - h), v).pressure) / (2.0 * h * t);
            let beta = dp_dt / st.pressure;
            let bv = r.beta_v.unwrap();
            assert!((bv - beta).abs() <= 1e-6 * bv.abs().max(1e-3), "{kind:?} β_V {bv} vs {beta}");
        }
    }
}
