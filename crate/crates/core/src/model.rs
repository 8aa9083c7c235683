//! System parameters, unit conventions and bath occupancies.
//!
//! All frequencies, detunings, couplings and rates inside the engine are
//! expressed in a single internal unit. Presets and the dimensionless config
//! mode use the mechanical frequency as that unit (`omega_b = 1`); SI input is
//! divided by the mechanical angular frequency at the boundary. Every
//! [`SystemParams`] carries `unit_rad_per_s`, the number of rad/s one internal
//! unit stands for, so bath occupancies can be evaluated from a temperature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldViolation, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Spin density of YIG, m⁻³.
pub const YIG_SPIN_DENSITY: f64 = 4.22e27;
/// Gyromagnetic ratio used when a drive block does not give one: 2π × 28 GHz/T.
///
/// This is an external material constant, not a fitted value.
pub const DEFAULT_GYROMAGNETIC_RATIO: f64 = 2.0 * PI * 28.0e9;
/// Ground-state spin of the Fe³⁺ ion.
pub const FE3_SPIN: f64 = 2.5;
/// Diameter of the reference YIG sphere, m.
pub const DEFAULT_SPHERE_DIAMETER: f64 = 250.0e-6;

/// Mechanical angular frequency of the reference device, 2π × 10 MHz.
pub const REFERENCE_OMEGA_B: f64 = 2.0 * PI * 10.0e6;
/// Cavity and magnon angular frequency of the reference device, 2π × 10 GHz.
pub const REFERENCE_OMEGA_C: f64 = 2.0 * PI * 10.0e9;

/// Quadrature ordering `[x1, y1, x2, y2, q, p]`: photon, magnon, phonon.
pub const QUADRATURE_LABELS: [&str; 6] = ["x1", "y1", "x2", "y2", "q", "p"];
/// Diagonal of the vacuum covariance matrix (symmetrized convention).
pub const VACUUM_VARIANCE: f64 = 0.5;

/// The three bosonic modes, in quadrature order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Photon,
    Magnon,
    Phonon,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Photon, Mode::Magnon, Mode::Phonon];

    /// Index of the position-like quadrature; momentum follows at `+1`.
    pub fn offset(self) -> usize {
        match self {
            Mode::Photon => 0,
            Mode::Magnon => 2,
            Mode::Phonon => 4,
        }
    }
}

/// Which linearized interaction the drift matrix encodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriftModel {
    /// Full linearized magnomechanical coupling `G (m + m†)(b + b†)`.
    #[default]
    Full,
    /// Only the resonant two-mode-squeezing part `G (m b + m† b†)`; valid near
    /// the blue sideband `Δm ≈ -ω_b` with `G ≪ 2 ω_b`.
    Rwa,
}

/// How the bath occupancies are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bath {
    Occupancies {
        nbar_a: f64,
        nbar_m: f64,
        nbar_b: f64,
    },
    /// All three baths thermalized at one temperature (Kelvin).
    Temperature { kelvin: f64 },
}

impl Default for Bath {
    fn default() -> Self {
        Bath::Occupancies {
            nbar_a: 0.0,
            nbar_m: 0.0,
            nbar_b: 0.0,
        }
    }
}

/// Resolved mean bath occupancies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupancies {
    pub nbar_a: f64,
    pub nbar_m: f64,
    pub nbar_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_c: f64,
    pub omega_m: f64,
    pub omega_b: f64,
    pub delta_c: f64,
    /// Magnon detuning. With a direct coupling this is the effective detuning
    /// seen by the fluctuations; when the classical solve is active it is the
    /// bare detuning and the fixed point supplies the shifted one.
    pub delta_m: f64,
    pub g_am: f64,
    /// Single-magnon magnomechanical coupling; only used by the classical solve.
    pub g_bm_single: Option<f64>,
    /// Enhanced magnomechanical coupling `G_bm`.
    pub g_bm_enhanced: f64,
    pub kappa_a: f64,
    pub kappa_m: f64,
    pub gamma_b: f64,
    pub bath: Bath,
    pub drift_model: DriftModel,
    /// rad/s represented by one internal frequency unit.
    pub unit_rad_per_s: f64,
}

impl Default for SystemParams {
    /// Reference device in units of the mechanical frequency, all couplings off.
    fn default() -> Self {
        let ratio = REFERENCE_OMEGA_C / REFERENCE_OMEGA_B;
        Self {
            omega_c: ratio,
            omega_m: ratio,
            omega_b: 1.0,
            delta_c: -1.0,
            delta_m: -1.0,
            g_am: 0.0,
            g_bm_single: None,
            g_bm_enhanced: 0.0,
            kappa_a: 0.1,
            kappa_m: 0.1,
            gamma_b: 0.01,
            bath: Bath::default(),
            drift_model: DriftModel::Full,
            unit_rad_per_s: REFERENCE_OMEGA_B,
        }
    }
}

impl SystemParams {
    /// Bath occupancies, evaluated from the temperature when one is set.
    pub fn occupancies(&self) -> Result<Occupancies> {
        match self.bath {
            Bath::Occupancies {
                nbar_a,
                nbar_m,
                nbar_b,
            } => Ok(Occupancies {
                nbar_a,
                nbar_m,
                nbar_b,
            }),
            Bath::Temperature { kelvin } => {
                let u = self.unit_rad_per_s;
                Ok(Occupancies {
                    nbar_a: thermal_occupancy(self.omega_c * u, kelvin)?,
                    nbar_m: thermal_occupancy(self.omega_m * u, kelvin)?,
                    nbar_b: thermal_occupancy(self.omega_b * u, kelvin)?,
                })
            }
        }
    }

    pub fn temperature_k(&self) -> Option<f64> {
        match self.bath {
            Bath::Temperature { kelvin } => Some(kelvin),
            Bath::Occupancies { .. } => None,
        }
    }

    /// Enforce every parameter invariant, reporting all violations at once.
    pub fn validate(self) -> Result<Self> {
        let mut bad = Vec::new();
        let mut check = |field: &'static str, ok: bool, reason: &str| {
            if !ok {
                bad.push(FieldViolation {
                    field,
                    reason: reason.to_string(),
                });
            }
        };

        let finite = [
            ("omega_c", self.omega_c),
            ("omega_m", self.omega_m),
            ("omega_b", self.omega_b),
            ("delta_c", self.delta_c),
            ("delta_m", self.delta_m),
            ("g_am", self.g_am),
            ("G_bm", self.g_bm_enhanced),
            ("kappa_a", self.kappa_a),
            ("kappa_m", self.kappa_m),
            ("gamma_b", self.gamma_b),
        ];
        for (field, v) in finite {
            check(field, v.is_finite(), "must be finite");
        }
        check("omega_b", self.omega_b > 0.0, "must be > 0");
        check("omega_c", self.omega_c > 0.0, "must be > 0");
        check("omega_m", self.omega_m > 0.0, "must be > 0");
        check("kappa_a", self.kappa_a > 0.0, "decay rate must be > 0");
        check("kappa_m", self.kappa_m > 0.0, "decay rate must be > 0");
        check("gamma_b", self.gamma_b > 0.0, "decay rate must be > 0");
        check("g_am", self.g_am >= 0.0, "must be >= 0");
        if let Some(g) = self.g_bm_single {
            check(
                "g_bm_single",
                g.is_finite() && g >= 0.0,
                "must be finite and >= 0",
            );
        }
        check(
            "unit_rad_per_s",
            self.unit_rad_per_s.is_finite() && self.unit_rad_per_s > 0.0,
            "must be > 0",
        );
        match self.bath {
            Bath::Occupancies {
                nbar_a,
                nbar_m,
                nbar_b,
            } => {
                for (field, n) in [("nbar_a", nbar_a), ("nbar_m", nbar_m), ("nbar_b", nbar_b)] {
                    check(
                        field,
                        n.is_finite() && n >= 0.0,
                        "occupancy must be finite and >= 0",
                    );
                }
            }
            Bath::Temperature { kelvin } => {
                check(
                    "temperature_K",
                    kelvin.is_finite() && kelvin >= 0.0,
                    "must be >= 0",
                );
            }
        }

        if bad.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(bad))
        }
    }
}

/// Combine explicitly given occupancies and an optional temperature into one
/// bath description. Both may be given only if they agree.
pub fn resolve_bath(
    nbar: [Option<f64>; 3],
    temperature_k: Option<f64>,
    mode_frequencies_rad_per_s: [f64; 3],
) -> Result<Bath> {
    let Some(kelvin) = temperature_k else {
        return Ok(Bath::Occupancies {
            nbar_a: nbar[0].unwrap_or(0.0),
            nbar_m: nbar[1].unwrap_or(0.0),
            nbar_b: nbar[2].unwrap_or(0.0),
        });
    };
    let names = ["nbar_a", "nbar_m", "nbar_b"];
    let mut bad = Vec::new();
    for ((given, omega), field) in nbar.iter().zip(mode_frequencies_rad_per_s).zip(names) {
        if let Some(given) = *given {
            let from_t = thermal_occupancy(omega, kelvin)?;
            let tol = 1e-6 * from_t.abs().max(1e-12);
            if (given - from_t).abs() > tol {
                bad.push(FieldViolation {
                    field,
                    reason: format!("given {given} but temperature_K = {kelvin} implies {from_t}"),
                });
            }
        }
    }
    if bad.is_empty() {
        Ok(Bath::Temperature { kelvin })
    } else {
        Err(Error::InvalidParams(bad))
    }
}

/// Bose–Einstein mean occupation of a mode of angular frequency `omega`
/// (rad/s) at temperature `kelvin`. Exactly zero at zero temperature.
pub fn thermal_occupancy(omega: f64, kelvin: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "mode frequency must be > 0, got {omega}"
        )));
    }
    if !(kelvin >= 0.0) || !kelvin.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be >= 0, got {kelvin}"
        )));
    }
    if kelvin == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * omega / (K_B * kelvin)).exp_m1())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Drive field amplitude, T.
    pub b1: f64,
    /// Gyromagnetic ratio, rad/s/T.
    pub gamma_y: f64,
    /// Spin density, m⁻³.
    pub rho: f64,
    /// Sphere volume, m³.
    pub volume: f64,
    /// Drive angular frequency, rad/s. Informational only.
    pub omega_l: Option<f64>,
}

impl Default for DriveParams {
    fn default() -> Self {
        let r = DEFAULT_SPHERE_DIAMETER / 2.0;
        Self {
            b1: 0.0,
            gamma_y: DEFAULT_GYROMAGNETIC_RATIO,
            rho: YIG_SPIN_DENSITY,
            volume: 4.0 / 3.0 * PI * r * r * r,
            omega_l: None,
        }
    }
}

impl DriveParams {
    pub fn validate(self) -> Result<Self> {
        let mut bad = Vec::new();
        if !(self.b1 >= 0.0 && self.b1.is_finite()) {
            bad.push(FieldViolation {
                field: "B1",
                reason: "must be finite and >= 0".into(),
            });
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            bad.push(FieldViolation {
                field: "rho",
                reason: "must be > 0".into(),
            });
        }
        if !(self.volume > 0.0 && self.volume.is_finite()) {
            bad.push(FieldViolation {
                field: "V",
                reason: "must be > 0".into(),
            });
        }
        if !self.gamma_y.is_finite() {
            bad.push(FieldViolation {
                field: "gamma_y",
                reason: "must be finite".into(),
            });
        }
        if bad.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(bad))
        }
    }

    /// Total number of spins `N = ρ V`.
    pub fn spin_count(&self) -> f64 {
        self.rho * self.volume
    }
}

/// Drive rate on the magnon mode, `Ω = (√5/4) γ_y √N B₁`, in rad/s.
pub fn rabi_from_drive(drive: &DriveParams) -> f64 {
    5f64.sqrt() / 4.0 * drive.gamma_y * drive.spin_count().sqrt() * drive.b1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> SystemParams {
        SystemParams {
            g_am: 0.1,
            g_bm_enhanced: 0.035,
            kappa_a: 0.1,
            kappa_m: 0.1,
            gamma_b: 0.01,
            bath: Bath::Occupancies {
                nbar_a: 0.0,
                nbar_m: 0.0,
                nbar_b: 0.2,
            },
            ..SystemParams::default()
        }
    }

    #[test]
    fn zero_temperature_is_exactly_empty() {
        for omega in [1.0, 1e7, 1e12] {
            assert_eq!(thermal_occupancy(omega, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn occupancy_values_match_high_precision_evaluation() {
        // 40-digit evaluation of 1/(exp(ħω/kT) - 1)
        let low = thermal_occupancy(2.0 * PI * 10e6, 0.01).unwrap();
        assert!((low - 20.340_618_351_800_997).abs() < 1e-9, "{low}");
        let high = thermal_occupancy(2.0 * PI * 10e9, 0.01).unwrap();
        assert!(high < 1e-20);
        assert!(
            (high / 1.435_992_501_216_95e-21 - 1.0).abs() < 1e-9,
            "{high}"
        );
        let one_k = thermal_occupancy(2.0 * PI * 10e6, 1.0).unwrap();
        assert!((one_k - 2_083.161_953_603_149).abs() < 1e-6, "{one_k}");
    }

    #[test]
    fn occupancy_rejects_bad_frequency() {
        assert!(matches!(thermal_occupancy(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(
            thermal_occupancy(-1.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            thermal_occupancy(1.0, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rabi_rate_for_reference_drive() {
        assert_eq!(rabi_from_drive(&DriveParams::default()), 0.0);
        let drive = DriveParams {
            b1: 3.9e-5,
            ..DriveParams::default()
        };
        // hand evaluation: sqrt(5)/4 * 2π·28e9 * sqrt(4.22e27 · 4/3 π (125 µm)³) * 3.9e-5
        let omega = rabi_from_drive(&drive);
        assert!(
            (omega / 7.126_775_317_442_693e14 - 1.0).abs() < 1e-12,
            "{omega}"
        );
        let doubled = rabi_from_drive(&DriveParams {
            b1: 7.8e-5,
            ..drive.clone()
        });
        assert!((doubled / omega - 2.0).abs() < 1e-14);
        let quad_volume = rabi_from_drive(&DriveParams {
            volume: drive.volume * 4.0,
            ..drive
        });
        assert!((quad_volume / omega - 2.0).abs() < 1e-14);
    }

    #[test]
    fn figure_parameters_are_accepted() {
        assert!(fig2().validate().is_ok());
    }

    #[test]
    fn invariant_violations_name_the_field() {
        let err = SystemParams {
            kappa_a: 0.0,
            bath: Bath::Occupancies {
                nbar_a: 0.0,
                nbar_m: 0.0,
                nbar_b: -0.1,
            },
            ..fig2()
        }
        .validate()
        .unwrap_err();
        let Error::InvalidParams(v) = err else {
            panic!("wrong error")
        };
        let fields: Vec<_> = v.iter().map(|f| f.field).collect();
        assert_eq!(fields, vec!["kappa_a", "nbar_b"]);
    }

    #[test]
    fn temperature_and_occupancies_must_agree() {
        let freqs = [REFERENCE_OMEGA_C, REFERENCE_OMEGA_C, REFERENCE_OMEGA_B];
        let n = thermal_occupancy(REFERENCE_OMEGA_B, 0.01).unwrap();
        let ok = resolve_bath([None, None, Some(n)], Some(0.01), freqs).unwrap();
        assert_eq!(ok, Bath::Temperature { kelvin: 0.01 });
        let bad = resolve_bath([None, None, Some(0.2)], Some(0.01), freqs);
        assert!(matches!(bad, Err(Error::InvalidParams(_))));
        let plain = resolve_bath([None, None, Some(0.2)], None, freqs).unwrap();
        assert_eq!(
            plain,
            Bath::Occupancies {
                nbar_a: 0.0,
                nbar_m: 0.0,
                nbar_b: 0.2
            }
        );
    }

    #[test]
    fn temperature_bath_uses_each_mode_frequency() {
        let p = SystemParams {
            bath: Bath::Temperature { kelvin: 0.01 },
            ..fig2()
        };
        let occ = p.occupancies().unwrap();
        assert!(occ.nbar_a < 1e-20 && occ.nbar_m < 1e-20);
        assert!((occ.nbar_b - 20.340_618_351_800_997).abs() < 1e-9);
    }
}
