//! Run configuration from TOML or JSON.
//!
//! ```toml
//! units = "omega_b"            # or "SI" (all frequencies in rad/s)
//!
//! [system]
//! delta_c = -1.0
//! delta_m = -1.0
//! g_am = 0.1
//! G_bm = 0.035                 # or g_bm_single plus a [drive] table
//! kappa_a = 0.1
//! kappa_m = 0.1
//! gamma_b = 0.01
//! nbar_b = 0.2                 # or temperature_K
//!
//! [sweep]
//! axis = "delta_m"
//! min = -2.0
//! max = 0.0
//! points = 201
//! outputs = ["E_ab", "E_am", "E_mb"]
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{
    resolve_bath, DriftModel, DriveParams, SystemParams, REFERENCE_OMEGA_B, REFERENCE_OMEGA_C,
};
use crate::sweep::{Axis, AxisRange, Endpoints, Output, Spacing, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
pub enum Units {
    #[default]
    #[serde(rename = "omega_b")]
    OmegaB,
    #[serde(rename = "SI")]
    Si,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    omega_c: Option<f64>,
    omega_m: Option<f64>,
    omega_b: Option<f64>,
    /// Mechanical frequency in rad/s when `units = "omega_b"`.
    #[serde(rename = "omega_b_SI")]
    omega_b_si: Option<f64>,
    delta_c: Option<f64>,
    delta_m: Option<f64>,
    g_am: Option<f64>,
    g_bm_single: Option<f64>,
    #[serde(rename = "G_bm", alias = "G_bm_direct")]
    g_bm: Option<f64>,
    kappa_a: Option<f64>,
    kappa_m: Option<f64>,
    gamma_b: Option<f64>,
    nbar_a: Option<f64>,
    nbar_m: Option<f64>,
    nbar_b: Option<f64>,
    #[serde(rename = "temperature_K")]
    temperature_k: Option<f64>,
    #[serde(default)]
    drift_model: DriftModel,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriveSection {
    #[serde(rename = "B1")]
    b1: f64,
    gamma_y: Option<f64>,
    rho: Option<f64>,
    #[serde(rename = "V")]
    volume: Option<f64>,
    omega_l: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SpacingName {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum EndpointsName {
    #[default]
    Include,
    Exclude,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisSection {
    #[serde(alias = "name")]
    axis: String,
    min: f64,
    max: f64,
    #[serde(default = "default_points")]
    points: usize,
    #[serde(default)]
    spacing: SpacingName,
    #[serde(default)]
    endpoints: EndpointsName,
}

fn default_points() -> usize {
    201
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    axis: Option<String>,
    min: Option<f64>,
    max: Option<f64>,
    points: Option<usize>,
    spacing: Option<SpacingName>,
    endpoints: Option<EndpointsName>,
    axes: Option<Vec<AxisSection>>,
    outputs: Option<Vec<String>>,
    #[serde(default)]
    overrides: BTreeMap<String, f64>,
    #[serde(default)]
    lock_gamma_b_to_kappa_a: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    units: Units,
    system: SystemSection,
    drive: Option<DriveSection>,
    sweep: Option<SweepSection>,
}

/// A parsed configuration with every frequency in internal (`ω_b`) units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub units: Units,
    pub params: SystemParams,
    /// Present when the coupling is to come from a classical drive.
    pub drive: Option<DriveParams>,
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.resolve()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.resolve()
    }
}

fn required(v: Option<f64>, field: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("[system] is missing required key {field:?}")))
}

/// Ratio-type parameters read other fields, so they go last.
fn override_rank(axis: Axis) -> usize {
    let late = matches!(
        axis,
        Axis::GBmOverGAm | Axis::KappaRatio | Axis::QualityFactor
    );
    usize::from(late) * 100 + Axis::ALL.iter().position(|a| *a == axis).unwrap_or(0)
}

impl ConfigFile {
    fn resolve(self) -> Result<RunConfig> {
        let s = &self.system;
        // `scale` converts a frequency as written in the file to ω_b units.
        let (omega_b_si, scale) = match self.units {
            Units::Si => {
                let wb = required(s.omega_b, "omega_b")?;
                if !(wb > 0.0) {
                    return Err(Error::Config(format!("omega_b must be > 0, got {wb}")));
                }
                if s.omega_b_si.is_some() {
                    return Err(Error::Config(
                        "omega_b_SI only applies when units = \"omega_b\"".into(),
                    ));
                }
                (wb, 1.0 / wb)
            }
            Units::OmegaB => {
                let wb = s.omega_b.unwrap_or(1.0);
                if (wb - 1.0).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "with units = \"omega_b\" the mechanical frequency is 1 by definition, got omega_b = {wb}"
                    )));
                }
                (s.omega_b_si.unwrap_or(REFERENCE_OMEGA_B), 1.0)
            }
        };
        let freq = |v: f64| v * scale;
        let reference_c = match self.units {
            Units::Si => REFERENCE_OMEGA_C,
            Units::OmegaB => SystemParams::default().omega_c,
        };
        let omega_c = freq(s.omega_c.unwrap_or(reference_c));
        let omega_m = freq(s.omega_m.unwrap_or(reference_c));

        let bath = resolve_bath(
            [s.nbar_a, s.nbar_m, s.nbar_b],
            s.temperature_k,
            [omega_c * omega_b_si, omega_m * omega_b_si, omega_b_si],
        )?;

        let drive = match (&self.drive, s.g_bm) {
            (Some(_), Some(_)) | (None, Some(_)) => None,
            (Some(d), None) => {
                if s.g_bm_single.is_none() {
                    return Err(Error::Config(
                        "[drive] needs g_bm_single in [system]".into(),
                    ));
                }
                let defaults = DriveParams::default();
                // stored in rad/s
                let omega_l = d.omega_l.map(|w| w * scale * omega_b_si);
                Some(DriveParams {
                    b1: d.b1,
                    gamma_y: d.gamma_y.unwrap_or(defaults.gamma_y),
                    rho: d.rho.unwrap_or(defaults.rho),
                    volume: d.volume.unwrap_or(defaults.volume),
                    omega_l,
                })
            }
            (None, None) => {
                return Err(Error::Config(
                    "[system] needs G_bm, or g_bm_single together with a [drive] table".into(),
                ))
            }
        };

        let params = SystemParams {
            omega_c,
            omega_m,
            omega_b: 1.0,
            delta_c: freq(required(s.delta_c, "delta_c")?),
            delta_m: freq(required(s.delta_m, "delta_m")?),
            g_am: freq(required(s.g_am, "g_am")?),
            g_bm_single: s.g_bm_single.map(freq),
            g_bm_enhanced: s.g_bm.map(freq).unwrap_or(0.0),
            kappa_a: freq(required(s.kappa_a, "kappa_a")?),
            kappa_m: freq(required(s.kappa_m, "kappa_m")?),
            gamma_b: freq(required(s.gamma_b, "gamma_b")?),
            bath,
            drift_model: s.drift_model,
            unit_rad_per_s: omega_b_si,
        }
        .validate()?;

        let sweep = match self.sweep {
            Some(sw) => Some(sweep_spec(sw, scale)?),
            None => None,
        };
        Ok(RunConfig {
            units: self.units,
            params,
            drive: drive.map(DriveParams::validate).transpose()?,
            sweep,
        })
    }
}

fn axis_range(
    axis: &str,
    min: f64,
    max: f64,
    points: usize,
    spacing: SpacingName,
    endpoints: EndpointsName,
    scale: f64,
) -> Result<AxisRange> {
    let axis = Axis::from_name(axis)?;
    let k = if axis.is_frequency() { scale } else { 1.0 };
    let range = AxisRange {
        axis,
        min: min * k,
        max: max * k,
        points,
        spacing: match spacing {
            SpacingName::Linear => Spacing::Linear,
            SpacingName::Log => Spacing::Log,
        },
        endpoints: match endpoints {
            EndpointsName::Include => Endpoints::Include,
            EndpointsName::Exclude => Endpoints::Exclude,
        },
    };
    range.validate()?;
    Ok(range)
}

fn sweep_spec(sw: SweepSection, scale: f64) -> Result<SweepSpec> {
    let axes = match (&sw.axis, &sw.axes) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "[sweep] takes either axis or axes, not both".into(),
            ))
        }
        (None, None) => return Err(Error::Config("[sweep] needs axis or axes".into())),
        (Some(name), None) => vec![axis_range(
            name,
            sw.min
                .ok_or_else(|| Error::Config("[sweep] is missing min".into()))?,
            sw.max
                .ok_or_else(|| Error::Config("[sweep] is missing max".into()))?,
            sw.points.unwrap_or_else(default_points),
            sw.spacing.unwrap_or_default(),
            sw.endpoints.unwrap_or_default(),
            scale,
        )?],
        (None, Some(list)) => {
            if sw.min.is_some() || sw.max.is_some() || sw.points.is_some() {
                return Err(Error::Config(
                    "with axes, give min/max/points per axis".into(),
                ));
            }
            list.iter()
                .map(|a| {
                    axis_range(
                        &a.axis,
                        a.min,
                        a.max,
                        a.points,
                        a.spacing,
                        a.endpoints,
                        scale,
                    )
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let outputs = match &sw.outputs {
        Some(keys) => keys
            .iter()
            .map(|k| Output::from_key(k))
            .collect::<Result<Vec<_>>>()?,
        None => vec![Output::EAb, Output::EAm, Output::EMb],
    };
    let mut overrides = sw
        .overrides
        .iter()
        .map(|(k, v)| {
            let axis = Axis::from_name(k)?;
            Ok((axis, if axis.is_frequency() { v * scale } else { *v }))
        })
        .collect::<Result<Vec<_>>>()?;
    overrides.sort_by_key(|(a, _)| override_rank(*a));
    let spec = SweepSpec {
        axes,
        overrides,
        outputs,
        lock_gamma_b_to_kappa_a: sw.lock_gamma_b_to_kappa_a,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Bath;

    const FIG2: &str = r#"
        [system]
        delta_c = -1.0
        delta_m = -1.0
        g_am = 0.1
        G_bm = 0.035
        kappa_a = 0.1
        kappa_m = 0.1
        gamma_b = 0.01
        nbar_b = 0.2

        [sweep]
        axis = "delta_m"
        min = -2.0
        max = 0.0
        points = 201
        outputs = ["E_ab", "E_am", "E_mb", "eta"]
    "#;

    #[test]
    fn reads_a_plain_sweep() {
        let cfg = RunConfig::from_toml(FIG2).unwrap();
        assert_eq!(cfg.params.g_bm_enhanced, 0.035);
        assert_eq!(
            cfg.params.bath,
            Bath::Occupancies {
                nbar_a: 0.0,
                nbar_m: 0.0,
                nbar_b: 0.2
            }
        );
        assert!((cfg.params.omega_c - 1000.0).abs() < 1e-9);
        let sw = cfg.sweep.unwrap();
        assert_eq!(sw.axes[0].points, 201);
        assert_eq!(sw.outputs.last(), Some(&Output::EtaAb));
    }

    #[test]
    fn si_units_scale_by_the_mechanical_frequency() {
        let wb = REFERENCE_OMEGA_B;
        let text = format!(
            r#"
            units = "SI"
            [system]
            omega_b = {wb}
            delta_c = {dc}
            delta_m = {dm}
            g_am = {g}
            G_bm = {gb}
            kappa_a = {k}
            kappa_m = {k}
            gamma_b = {gam}
            nbar_b = 0.2
            "#,
            dc = -wb,
            dm = -wb,
            g = 0.1 * wb,
            gb = 0.035 * wb,
            k = 0.1 * wb,
            gam = 0.01 * wb,
        );
        let si = RunConfig::from_toml(&text).unwrap().params;
        let ob = RunConfig::from_toml(FIG2).unwrap().params;
        for (a, b) in [
            (si.delta_c, ob.delta_c),
            (si.g_am, ob.g_am),
            (si.g_bm_enhanced, ob.g_bm_enhanced),
            (si.kappa_a, ob.kappa_a),
            (si.gamma_b, ob.gamma_b),
            (si.omega_c, ob.omega_c),
        ] {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
        assert_eq!(si.unit_rad_per_s, wb);
    }

    #[test]
    fn json_matches_toml() {
        let json = r#"{
            "system": {"delta_c": -1.0, "delta_m": -1.0, "g_am": 0.1, "G_bm_direct": 0.035,
                       "kappa_a": 0.1, "kappa_m": 0.1, "gamma_b": 0.01, "nbar_b": 0.2},
            "sweep": {"axis": "delta_m", "min": -2.0, "max": 0.0, "points": 201,
                      "outputs": ["E_ab", "E_am", "E_mb", "eta"]}
        }"#;
        assert_eq!(
            RunConfig::from_json(json).unwrap(),
            RunConfig::from_toml(FIG2).unwrap()
        );
    }

    #[test]
    fn violations_name_the_field() {
        let text = FIG2.replace("kappa_a = 0.1", "kappa_a = -0.1");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("kappa_a"), "{err}");

        let text = FIG2.replace("G_bm = 0.035", "");
        assert!(RunConfig::from_toml(&text)
            .unwrap_err()
            .to_string()
            .contains("G_bm"));

        let text = FIG2.replace("points = 201", "points = 1");
        assert!(RunConfig::from_toml(&text).is_err());

        let text = FIG2.replace("nbar_b = 0.2", "nbar_b = 0.2\nbogus = 1");
        assert!(RunConfig::from_toml(&text)
            .unwrap_err()
            .to_string()
            .contains("bogus"));
    }

    #[test]
    fn temperature_and_occupancy_must_agree() {
        let text = FIG2.replace("nbar_b = 0.2", "nbar_b = 0.2\ntemperature_K = 0.01");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("nbar_b"), "{err}");

        let text = FIG2.replace(
            "nbar_b = 0.2",
            "nbar_b = 20.340618351800997\ntemperature_K = 0.01",
        );
        let cfg = RunConfig::from_toml(&text).unwrap();
        assert_eq!(cfg.params.bath, Bath::Temperature { kelvin: 0.01 });
    }

    #[test]
    fn two_axes_and_overrides() {
        let text = r#"
            [system]
            delta_c = -1.0
            delta_m = -1.0
            g_am = 0.65
            G_bm = 0.0
            kappa_a = 0.1
            kappa_m = 0.1
            gamma_b = 0.01
            drift_model = "rwa"

            [sweep]
            outputs = ["E_ab", "T"]
            lock_gamma_b_to_kappa_a = true
            overrides = { G_bm_over_g_am = 0.9, g_am = 0.5 }
            axes = [
                { axis = "kappa_ratio", min = 1.0, max = 100.0, points = 3, spacing = "log" },
                { axis = "temperature_K", min = 0.01, max = 1.0, points = 2 },
            ]
        "#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert_eq!(cfg.params.drift_model, DriftModel::Rwa);
        let sw = cfg.sweep.unwrap();
        // the ratio override runs after g_am regardless of key order
        let p = sw.resolved_base(&cfg.params).unwrap();
        assert_eq!(p.g_bm_enhanced, 0.45);
        assert_eq!(sw.grid().len(), 6);
    }

    #[test]
    fn drive_section_requires_single_photon_coupling() {
        let text = FIG2.replace("G_bm = 0.035", "") + "\n[drive]\nB1 = 1e-8\n";
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("g_bm_single"));
        let text = FIG2.replace("G_bm = 0.035", "g_bm_single = 2e-8") + "\n[drive]\nB1 = 1e-8\n";
        let cfg = RunConfig::from_toml(&text).unwrap();
        assert_eq!(cfg.drive.unwrap().b1, 1e-8);
    }
}
