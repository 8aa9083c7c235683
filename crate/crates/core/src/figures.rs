//! Built-in sweeps, one per standard figure.
//!
//! Each dataset is one parameter set; where a figure plots several observables
//! at the same parameters (fig3a, fig4, fig5b) they share a dataset as columns.
//! Curves that differ in parameters (fig2, fig5a, fig6) get a dataset each.
//! Figures 2 and 3 use the full linearized coupling; the reservoir-regime
//! figures 4 to 6 use the resonant (`Rwa`) coupling, since the full drift
//! matrix is unstable over most of their range.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{Bath, DriftModel, SystemParams};
use crate::output::{write_table, Format};
use crate::sweep::{
    run_sweep, to_table, Axis, AxisRange, Endpoints, Output, Spacing, SweepRow, SweepSpec,
};

pub const DEFAULT_POINTS: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5a,
    Fig5b,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
            FigureId::Fig6 => "fig6",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| {
                let known: Vec<_> = FigureId::ALL.iter().map(|f| f.name()).collect();
                Error::Config(format!(
                    "unknown figure {name:?}; expected one of {known:?}"
                ))
            })
    }
}

/// Baseline: equal photon and magnon damping, weak mechanical damping.
pub fn fig2_params() -> SystemParams {
    SystemParams {
        delta_c: -1.0,
        delta_m: -1.0,
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
        drift_model: DriftModel::Full,
        ..SystemParams::default()
    }
}

/// Reservoir regime: strong photon–magnon coupling, lossy magnon.
/// `g_bm_enhanced` is left at zero; the sweeps set it through the ratio.
pub fn fig4_params() -> SystemParams {
    SystemParams {
        delta_c: -1.0,
        delta_m: -1.0,
        g_am: 0.65,
        g_bm_enhanced: 0.0,
        kappa_a: 0.01,
        kappa_m: 0.1,
        gamma_b: 0.01,
        bath: Bath::Occupancies {
            nbar_a: 0.0,
            nbar_m: 0.0,
            nbar_b: 0.2,
        },
        drift_model: DriftModel::Rwa,
        ..SystemParams::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// File stem, e.g. `fig2_red`.
    pub name: String,
    pub base: SystemParams,
    pub spec: SweepSpec,
}

fn dataset(name: impl Into<String>, base: SystemParams, spec: SweepSpec) -> Dataset {
    Dataset {
        name: name.into(),
        base,
        spec,
    }
}

fn open_range(axis: Axis, min: f64, max: f64) -> AxisRange {
    AxisRange {
        endpoints: Endpoints::Exclude,
        ..AxisRange::linear(axis, min, max, DEFAULT_POINTS)
    }
}

fn ratio_spec(outputs: Vec<Output>, ratio: f64) -> SweepSpec {
    SweepSpec {
        overrides: vec![(Axis::GBmOverGAm, ratio)],
        lock_gamma_b_to_kappa_a: true,
        ..SweepSpec::new(
            AxisRange::linear(Axis::KappaRatio, 1.0, 100.0, DEFAULT_POINTS),
            outputs,
        )
    }
}

pub fn datasets(id: FigureId) -> Vec<Dataset> {
    let e_all = vec![Output::EAb, Output::EAm, Output::EMb];
    match id {
        FigureId::Fig2 => {
            let spec = SweepSpec::new(
                AxisRange::linear(Axis::DeltaM, -2.0, 0.0, DEFAULT_POINTS),
                e_all,
            );
            let blue = fig2_params();
            let red = SystemParams {
                g_am: 0.0,
                ..blue.clone()
            };
            let green = SystemParams {
                g_bm_enhanced: 0.0,
                ..blue.clone()
            };
            vec![
                dataset("fig2_blue", blue, spec.clone()),
                dataset("fig2_red", red, spec.clone()),
                dataset("fig2_green", green, spec),
            ]
        }
        FigureId::Fig3a | FigureId::Fig3b => {
            let outputs = if id == FigureId::Fig3a {
                vec![Output::EAb, Output::EMb, Output::EAm]
            } else {
                vec![Output::Transfer, Output::EAb, Output::EMb]
            };
            let spec = SweepSpec::new(open_range(Axis::GBm, 0.0, 0.1), outputs);
            vec![dataset(id.name(), fig2_params(), spec)]
        }
        FigureId::Fig4 => {
            let spec = SweepSpec::new(open_range(Axis::GBmOverGAm, 0.0, 1.0), e_all);
            vec![dataset("fig4", fig4_params(), spec)]
        }
        FigureId::Fig5a => [0.90, 0.94, 0.98]
            .into_iter()
            .map(|r| {
                dataset(
                    format!("fig5a_ratio{r:.2}"),
                    fig4_params(),
                    ratio_spec(vec![Output::EAb], r),
                )
            })
            .collect(),
        FigureId::Fig5b => vec![dataset(
            "fig5b",
            fig4_params(),
            ratio_spec(vec![Output::NBeta1, Output::NBeta2, Output::EAb], 0.98),
        )],
        FigureId::Fig6 => {
            let mut out = Vec::new();
            for kappa_m in [0.1, 0.9] {
                for (q, q_label) in [(1e3, "1e3"), (1e4, "1e4")] {
                    let base = SystemParams {
                        kappa_m,
                        kappa_a: 1.0 / q,
                        gamma_b: 1.0 / q,
                        g_bm_enhanced: 0.9 * 0.65,
                        bath: Bath::Temperature { kelvin: 0.01 },
                        ..fig4_params()
                    };
                    let axis = AxisRange {
                        spacing: Spacing::Log,
                        ..AxisRange::linear(Axis::TemperatureK, 0.01, 3.0, DEFAULT_POINTS)
                    };
                    let spec = SweepSpec::new(axis, vec![Output::EAb]);
                    out.push(dataset(
                        format!("fig6_kappa_m{kappa_m}_Q{q_label}"),
                        base,
                        spec,
                    ));
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone)]
pub struct FigureData {
    pub dataset: Dataset,
    pub rows: Vec<SweepRow>,
}

pub fn compute_figure(id: FigureId) -> Result<Vec<FigureData>> {
    datasets(id)
        .into_iter()
        .map(|d| {
            let rows = run_sweep(&d.spec, &d.base, None)?;
            Ok(FigureData { dataset: d, rows })
        })
        .collect()
}

/// Compute a figure and write one file per dataset into `out_dir`.
pub fn reproduce_figure(id: FigureId, out_dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    compute_figure(id)?
        .iter()
        .map(|fd| {
            let path = out_dir.join(format!("{}.{}", fd.dataset.name, format.extension()));
            write_table(&to_table(&fd.dataset.spec, &fd.rows), format, &path)?;
            Ok(path)
        })
        .collect()
}
