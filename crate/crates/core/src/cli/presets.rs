//! Reproducible figure presets and their regression values.
//!
//! Each expected value is stored as the exact text it is quoted with, so
//! the tolerance follows from the number of printed digits. Heat-capacity
//! jumps are additionally allowed 1% relative.

use crate::equilibrium::high_temperature_limit;
use crate::error::{Error, Result};
use crate::stat_core::Statistics;
use crate::two_level::{
    capacity_jumps, char_temps, classify_grid, curve_root_in_eta, eta_transitions, limiting_entropy,
    zero_t_entropy, Curve, PlaneGrid, RegionClass, TwoLevelParams,
};

/// What a preset computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresetSetup {
    /// Temperature sweep of one system.
    Sweep {
        z1: f64,
        z2: f64,
        n: f64,
        tau_min: f64,
        tau_max: f64,
    },
    /// Characteristic temperatures along η at fixed `z1` and `N`.
    EtaScan {
        z1: f64,
        n: f64,
        eta_min: f64,
        eta_max: f64,
    },
    /// Region map of the `(φ, η)` plane at fixed `N`.
    Plane {
        n: f64,
        phi_max: f64,
        eta_min: f64,
        eta_max: f64,
    },
}

/// A quantity checked by the regression table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `T/Δε` of a characteristic temperature of the preset system.
    Tau(Curve),
    /// `T/Δε` at another upper degeneracy on an η scan.
    TauAt { z2: f64, curve: Curve },
    EntropyZero,
    EntropyLimit,
    /// High-temperature population of level `0` or `1`.
    HighTPopulation(usize),
    JumpCv(Curve),
    JumpCp(Curve),
    /// `ΔC_p − ΔC_V`.
    JumpCpMinusCv(Curve),
    /// Root in η of the curve's Φ on the preset φ-line.
    EtaRoot(Curve),
    /// Lower end of the admissible Fermi η range on the preset φ-line.
    ForbiddenEdge,
    /// η of the Φ = 0 curve at the given φ on the plane.
    BoundaryEta { curve: Curve, phi: f64 },
    /// Largest φ with `z1 ≥ 1`.
    PhiMax,
    /// Number of distinct region labels on the plane scan.
    RegionCount,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    pub key: &'static str,
    pub quantity: Quantity,
    /// The value as quoted, e.g. `"0.21"` or `"-1.6e-4"`.
    pub printed: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    pub statistics: Statistics,
    pub setup: PresetSetup,
    /// Parameter list as quoted with the values below.
    pub source: &'static str,
    pub expected: Vec<Expected>,
}

/// Identifiers accepted by `preset <id>`.
pub const PRESET_IDS: [&str; 14] = [
    "fig1", "fig2", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig5c", "fig5d", "fig6a", "fig6b",
    "fig6c", "fig7a", "fig7b",
];

/// Lowest φ used for the `φ → 0` ends of the boundary curves.
pub const PHI_EDGE: f64 = 1e-6;

fn e(key: &'static str, quantity: Quantity, printed: &'static str) -> Expected {
    Expected {
        key,
        quantity,
        printed,
    }
}

fn sweep(z1: f64, z2: f64, n: f64) -> PresetSetup {
    PresetSetup::Sweep {
        z1,
        z2,
        n,
        tau_min: 0.01,
        tau_max: 10.0,
    }
}

fn eta_scan(z1: f64, n: f64, eta_max: f64) -> PresetSetup {
    PresetSetup::EtaScan {
        z1,
        n,
        eta_min: 0.01,
        eta_max,
    }
}

/// The full preset table.
pub fn presets() -> Vec<FigurePreset> {
    use Curve::*;
    use Quantity::*;
    use Statistics::{Bose, Fermi};
    vec![
        FigurePreset {
            id: "fig1",
            statistics: Bose,
            setup: PresetSetup::Plane {
                n: 2.0,
                phi_max: 2.0,
                eta_min: 0.01,
                eta_max: 10.0,
            },
            source: "N=2",
            expected: vec![
                e("a_eta", BoundaryEta { curve: B1, phi: PHI_EDGE }, "0.22"),
                e("b_eta", BoundaryEta { curve: B2, phi: PHI_EDGE }, "4.5"),
                e("c_phi", PhiMax, "2"),
                e("c_eta_ac", BoundaryEta { curve: B1, phi: 2.0 }, "1"),
                e("c_eta_bc", BoundaryEta { curve: B2, phi: 2.0 }, "1"),
                e("region_count", RegionCount, "3"),
            ],
        },
        FigurePreset {
            id: "fig2",
            statistics: Bose,
            setup: eta_scan(8.0, 2.0, 10.0),
            source: "z_1=8, N=2, phi=0.25",
            expected: vec![
                e("eta_1", EtaRoot(B1), "0.33"),
                e("eta_2", EtaRoot(B2), "4.02"),
                e("A_1_tau", TauAt { z2: 3.0, curve: B1 }, "5.85"),
                e("A_2_tau", TauAt { z2: 33.0, curve: B2 }, "39.44"),
            ],
        },
        FigurePreset {
            id: "fig3a",
            statistics: Bose,
            setup: sweep(8.0, 96.0, 16.0),
            source: "z_1=8, z_2=96, N=16",
            expected: vec![
                e("tau_B1", Tau(B1), "0.21"),
                e("dC_V_B1", JumpCv(B1), "13.84"),
                e("dC_p_B1", JumpCp(B1), "14.92"),
                e("S_B1", EntropyZero, "12.41"),
                e("S_Binf", EntropyLimit, "43.74"),
                e("n_1inf", HighTPopulation(0), "0.08"),
                e("n_2inf", HighTPopulation(1), "0.16"),
            ],
        },
        FigurePreset {
            id: "fig3b",
            statistics: Bose,
            setup: sweep(8.0, 256.0, 8.0),
            source: "z_1=8, z_2=256, N=8",
            expected: vec![
                e("tau_B1", Tau(B1), "0.18"),
                e("tau_B2", Tau(B2), "1.2"),
                e("dC_V_B1", JumpCv(B1), "17.99"),
                e("dC_p_B1", JumpCp(B1), "21.49"),
                e("dC_V_B2", JumpCv(B2), "-0.43"),
                e("dC_p_B2", JumpCp(B2), "-0.44"),
                e("S_B1", EntropyZero, "8.77"),
                e("S_B2", EntropyLimit, "33.87"),
            ],
        },
        FigurePreset {
            id: "fig4",
            statistics: Fermi,
            setup: PresetSetup::Plane {
                n: 16.0,
                phi_max: 3.0,
                eta_min: 0.01,
                eta_max: 100.0,
            },
            source: "N=16",
            expected: vec![e("region_count", RegionCount, "9")],
        },
        FigurePreset {
            id: "fig5a",
            statistics: Fermi,
            setup: eta_scan(16.0, 2.0, 10.0),
            source: "z_1=16, N=2, phi=0.125",
            expected: vec![
                e("eta_1", EtaRoot(F1), "0.17"),
                e("eta_2", EtaRoot(F2), "4.72"),
                e("A_1_tau", TauAt { z2: 3.0, curve: F1 }, "12.2"),
                e("A_2_tau", TauAt { z2: 76.0, curve: F2 }, "137.1"),
            ],
        },
        FigurePreset {
            id: "fig5b",
            statistics: Fermi,
            setup: eta_scan(16.0, 14.0, 50.0),
            source: "z_1=16, N=14, phi=0.875",
            expected: vec![
                e("eta_4", EtaRoot(F4), "0.086"),
                e("eta_2", EtaRoot(F2), "27.5"),
                e("A_1_tau", TauAt { z2: 1.0, curve: F1 }, "0.36"),
                e("A_4_tau", TauAt { z2: 1.0, curve: F4 }, "2.88"),
                e("A_2_tau", TauAt { z2: 440.0, curve: F2 }, "1862.4"),
            ],
        },
        FigurePreset {
            id: "fig5c",
            statistics: Fermi,
            setup: eta_scan(16.0, 18.0, 50.0),
            source: "z_1=16, N=18, phi=1.125",
            expected: vec![
                e("eta_b", ForbiddenEdge, "0.125"),
                e("eta_4", EtaRoot(F4), "0.22"),
                e("eta_2", EtaRoot(F2), "35.1"),
                e("A_3_tau", TauAt { z2: 3.0, curve: F3 }, "0.35"),
                e("A_4_tau", TauAt { z2: 3.0, curve: F4 }, "2.06"),
                e("A_2_tau", TauAt { z2: 562.0, curve: F2 }, "802.1"),
            ],
        },
        FigurePreset {
            id: "fig5d",
            statistics: Fermi,
            setup: eta_scan(16.0, 40.0, 100.0),
            source: "z_1=16, N=40, phi=2.5",
            expected: vec![
                e("eta_b", ForbiddenEdge, "1.5"),
                e("eta_3", EtaRoot(F3), "1.52"),
                e("eta_2", EtaRoot(F2), "76.9"),
                e("A_3_tau", TauAt { z2: 25.0, curve: F3 }, "1.65"),
                e("A_2_tau", TauAt { z2: 1230.0, curve: F2 }, "13825.9"),
            ],
        },
        FigurePreset {
            id: "fig6a",
            statistics: Fermi,
            setup: sweep(16.0, 1.0, 14.0),
            source: "z_1=16, z_2=1, N=14",
            expected: vec![
                e("tau_F1", Tau(F1), "0.36"),
                e("tau_F4", Tau(F4), "2.88"),
                e("dC_V_F1", JumpCv(F1), "2.75"),
                e("dC_p_F1", JumpCp(F1), "2.83"),
                e("dC_V_F4", JumpCv(F4), "-0.045"),
                e("dC_p_minus_dC_V_F4", JumpCpMinusCv(F4), "-1.6e-4"),
                e("S_F1", EntropyZero, "4.8"),
                e("S_F2", EntropyLimit, "6.3"),
            ],
        },
        FigurePreset {
            id: "fig6b",
            statistics: Fermi,
            setup: sweep(16.0, 16.0, 14.0),
            source: "z_1=16, z_2=16, N=14",
            expected: vec![
                e("tau_F1", Tau(F1), "0.19"),
                e("dC_V_F1", JumpCv(F1), "12.14"),
                e("dC_p_F1", JumpCp(F1), "13.02"),
                e("S_F1", EntropyZero, "4.8"),
                e("S_Finf", EntropyLimit, "18.7"),
            ],
        },
        FigurePreset {
            id: "fig6c",
            statistics: Fermi,
            setup: sweep(16.0, 1000.0, 14.0),
            source: "z_1=16, z_2=1000, N=14",
            expected: vec![
                e("tau_F1", Tau(F1), "0.11"),
                e("tau_F2", Tau(F2), "1.19"),
                e("dC_V_F1", JumpCv(F1), "40.4"),
                e("dC_p_F1", JumpCp(F1), "46.2"),
                e("dC_V_F2", JumpCv(F2), "-0.397"),
                e("dC_p_F2", JumpCp(F2), "-0.400"),
                e("S_F1", EntropyZero, "4.8"),
                e("S_F2", EntropyLimit, "71.4"),
            ],
        },
        FigurePreset {
            id: "fig7a",
            statistics: Fermi,
            setup: sweep(16.0, 128.0, 34.0),
            source: "z_1=16, z_2=128, N=34",
            expected: vec![
                e("tau_F3", Tau(F3), "0.19"),
                e("dC_V_F3", JumpCv(F3), "15.10"),
                e("dC_p_F3", JumpCp(F3), "15.45"),
                e("S_F1", EntropyZero, "49.7"),
                e("S_Finf", EntropyLimit, "74.7"),
            ],
        },
        FigurePreset {
            id: "fig7b",
            statistics: Fermi,
            setup: sweep(16.0, 2400.0, 34.0),
            source: "z_1=16, z_2=2400, N=34",
            expected: vec![
                e("tau_F3", Tau(F3), "0.12"),
                e("tau_F2", Tau(F2), "1.18"),
                e("dC_V_F3", JumpCv(F3), "38.57"),
                e("dC_p_F3", JumpCp(F3), "40.01"),
                e("dC_V_F2", JumpCv(F2), "-0.414"),
                e("dC_p_F2", JumpCp(F2), "-0.415"),
                e("S_F1", EntropyZero, "103.6"),
                e("S_F2", EntropyLimit, "175.8"),
            ],
        },
    ]
}

pub fn find_preset(id: &str) -> Option<FigurePreset> {
    presets().into_iter().find(|p| p.id == id)
}

/// Half a unit in the last printed digit of a quoted value.
pub fn printed_tolerance(printed: &str) -> Result<f64> {
    parse_printed(printed)?;
    let lower = printed.to_ascii_lowercase();
    let (mantissa, exponent) = match lower.split_once('e') {
        Some((m, x)) => (m, x.parse::<i32>().map_err(|_| bad_printed(printed))?),
        None => (lower.as_str(), 0),
    };
    let decimals = mantissa.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
    Ok(0.5 * 10f64.powi(exponent - decimals))
}

impl Expected {
    pub fn value(&self) -> Result<f64> {
        parse_printed(self.printed)
    }

    pub fn tolerance(&self) -> Result<f64> {
        let half_unit = printed_tolerance(self.printed)?;
        Ok(match self.quantity {
            Quantity::JumpCv(_) | Quantity::JumpCp(_) => half_unit.max(0.01 * self.value()?.abs()),
            _ => half_unit,
        })
    }
}

pub fn parse_printed(printed: &str) -> Result<f64> {
    printed.parse::<f64>().map_err(|_| bad_printed(printed))
}

fn bad_printed(printed: &str) -> Error {
    Error::InvalidSystem(format!("unparsable expected value '{printed}'"))
}

impl FigurePreset {
    /// Parameters of the swept or scanned system.
    pub fn params(&self) -> Option<TwoLevelParams> {
        match self.setup {
            PresetSetup::Sweep { z1, z2, n, .. } => Some(TwoLevelParams::new(z1, z2, n, 1.0)),
            _ => None,
        }
    }

    /// `(key, value)` pairs stated by [`Self::source`].
    pub fn source_values(&self) -> Vec<(String, f64)> {
        self.source
            .split(',')
            .filter_map(|part| {
                let (k, v) = part.split_once('=')?;
                Some((k.trim().replace('_', ""), v.trim().parse().ok()?))
            })
            .collect()
    }

    /// The same pairs derived from [`Self::setup`].
    pub fn setup_values(&self) -> Vec<(String, f64)> {
        match self.setup {
            PresetSetup::Sweep { z1, z2, n, .. } => {
                vec![("z1".into(), z1), ("z2".into(), z2), ("N".into(), n)]
            }
            PresetSetup::EtaScan { z1, n, .. } => {
                vec![("z1".into(), z1), ("N".into(), n), ("phi".into(), n / z1)]
            }
            PresetSetup::Plane { n, .. } => vec![("N".into(), n)],
        }
    }

    fn phi_line(&self) -> Result<(f64, f64)> {
        match self.setup {
            PresetSetup::EtaScan { z1, n, .. } => Ok((n, n / z1)),
            _ => Err(self.unsupported()),
        }
    }

    fn unsupported(&self) -> Error {
        Error::InvalidSystem(format!("quantity not defined for preset {}", self.id))
    }

    /// Computes one regression quantity.
    pub fn evaluate(&self, quantity: Quantity) -> Result<f64> {
        let kind = self.statistics;
        let tau_of = |p: &TwoLevelParams, curve: Curve| {
            char_temps(p, kind)
                .present()
                .into_iter()
                .find(|(name, _)| *name == curve.name())
                .map(|(_, t)| t / p.delta_eps)
                .ok_or_else(|| Error::InvalidSystem(format!("{} absent for preset {}", curve.name(), self.id)))
        };
        let jump = |curve: Curve| -> Result<crate::two_level::CapacityJump> {
            let p = self.params().ok_or_else(|| self.unsupported())?;
            capacity_jumps(&p, kind)?
                .into_iter()
                .find(|j| j.name == curve.name())
                .ok_or_else(|| Error::InvalidSystem(format!("no jump at {} for preset {}", curve.name(), self.id)))
        };
        let cp_jump = |curve: Curve| -> Result<f64> {
            jump(curve)?
                .delta_cp()
                .ok_or(Error::SingularResponse("C_p undefined next to the switching point"))
        };
        match quantity {
            Quantity::Tau(curve) => tau_of(&self.params().ok_or_else(|| self.unsupported())?, curve),
            Quantity::TauAt { z2, curve } => match self.setup {
                PresetSetup::EtaScan { z1, n, .. } => tau_of(&TwoLevelParams::new(z1, z2, n, 1.0), curve),
                _ => Err(self.unsupported()),
            },
            Quantity::EntropyZero => zero_t_entropy(&self.params().ok_or_else(|| self.unsupported())?, kind),
            Quantity::EntropyLimit => {
                Ok(limiting_entropy(&self.params().ok_or_else(|| self.unsupported())?, kind)?.0)
            }
            Quantity::HighTPopulation(level) => {
                let p = self.params().ok_or_else(|| self.unsupported())?;
                let occ = high_temperature_limit(&p.system(kind)?)?;
                occ.get(level).map(|o| o.n).ok_or_else(|| self.unsupported())
            }
            Quantity::JumpCv(curve) => Ok(jump(curve)?.delta_cv()),
            Quantity::JumpCp(curve) => cp_jump(curve),
            Quantity::JumpCpMinusCv(curve) => Ok(cp_jump(curve)? - jump(curve)?.delta_cv()),
            Quantity::EtaRoot(curve) => {
                let (n, phi) = self.phi_line()?;
                curve_root_in_eta(curve, n, phi, 1e-3, 1e4)
                    .ok_or_else(|| Error::InvalidSystem(format!("no {} root for preset {}", curve.name(), self.id)))
            }
            Quantity::ForbiddenEdge => {
                let (n, phi) = self.phi_line()?;
                eta_transitions(kind, n, phi, 1e-3, 1e4, 2000)
                    .into_iter()
                    .find(|t| t.from == Some(RegionClass::FermiForbidden))
                    .map(|t| t.eta)
                    .ok_or_else(|| self.unsupported())
            }
            Quantity::BoundaryEta { curve, phi } => match self.setup {
                PresetSetup::Plane { n, eta_min, eta_max, .. } => curve_root_in_eta(curve, n, phi, eta_min, eta_max)
                    .ok_or_else(|| Error::InvalidSystem(format!("no {} crossing at phi={phi}", curve.name()))),
                _ => Err(self.unsupported()),
            },
            Quantity::PhiMax => match self.setup {
                // z1 = N/φ ≥ 1
                PresetSetup::Plane { n, .. } => Ok(n),
                _ => Err(self.unsupported()),
            },
            Quantity::RegionCount => {
                let grid = self.plane_grid(80, 80).ok_or_else(|| self.unsupported())?;
                let n = match self.setup {
                    PresetSetup::Plane { n, .. } => n,
                    _ => unreachable!(),
                };
                let mut labels: Vec<_> = classify_grid(kind, n, &grid)?
                    .into_iter()
                    .filter_map(|c| c.region)
                    .map(|r| r.label())
                    .collect();
                labels.sort_unstable();
                labels.dedup();
                Ok(labels.len() as f64)
            }
        }
    }

    /// Grid of a plane preset.
    pub fn plane_grid(&self, phi_points: usize, eta_points: usize) -> Option<PlaneGrid> {
        match self.setup {
            PresetSetup::Plane {
                phi_max,
                eta_min,
                eta_max,
                ..
            } => Some(PlaneGrid {
                phi_min: phi_max / phi_points as f64,
                phi_max,
                phi_points,
                eta_min,
                eta_max,
                eta_points,
                eta_log: true,
            }),
            _ => None,
        }
    }
}
