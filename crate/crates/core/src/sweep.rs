//! One- and two-dimensional parameter sweeps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Bath, DriveParams, SystemParams};
use crate::output::{Cell, Table};
use crate::pipeline::{evaluate, evaluate_driven, PointResult};

/// A parameter that a sweep axis or an override can set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    DeltaM,
    DeltaC,
    GBm,
    GBmOverGAm,
    GAm,
    KappaA,
    KappaM,
    GammaB,
    /// `κm/κa`, realized by moving κa at fixed κm.
    KappaRatio,
    TemperatureK,
    NbarA,
    NbarM,
    NbarB,
    /// Mechanical quality factor `ω_b/γ_b`, realized by moving γ_b.
    QualityFactor,
}

impl Axis {
    pub const ALL: [Axis; 14] = [
        Axis::DeltaM,
        Axis::DeltaC,
        Axis::GBm,
        Axis::GBmOverGAm,
        Axis::GAm,
        Axis::KappaA,
        Axis::KappaM,
        Axis::GammaB,
        Axis::KappaRatio,
        Axis::TemperatureK,
        Axis::NbarA,
        Axis::NbarM,
        Axis::NbarB,
        Axis::QualityFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::DeltaM => "delta_m",
            Axis::DeltaC => "delta_c",
            Axis::GBm => "G_bm",
            Axis::GBmOverGAm => "G_bm_over_g_am",
            Axis::GAm => "g_am",
            Axis::KappaA => "kappa_a",
            Axis::KappaM => "kappa_m",
            Axis::GammaB => "gamma_b",
            Axis::KappaRatio => "kappa_ratio",
            Axis::TemperatureK => "temperature_K",
            Axis::NbarA => "nbar_a",
            Axis::NbarM => "nbar_m",
            Axis::NbarB => "nbar_b",
            Axis::QualityFactor => "Q",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| {
                let known: Vec<_> = Axis::ALL.iter().map(|a| a.name()).collect();
                Error::Config(format!(
                    "unknown parameter {name:?}; expected one of {known:?}"
                ))
            })
    }

    /// Whether values on this axis carry frequency units.
    pub fn is_frequency(self) -> bool {
        matches!(
            self,
            Axis::DeltaM
                | Axis::DeltaC
                | Axis::GBm
                | Axis::GAm
                | Axis::KappaA
                | Axis::KappaM
                | Axis::GammaB
        )
    }

    pub fn apply(self, p: &mut SystemParams, v: f64) -> Result<()> {
        match self {
            Axis::DeltaM => p.delta_m = v,
            Axis::DeltaC => p.delta_c = v,
            Axis::GBm => p.g_bm_enhanced = v,
            Axis::GBmOverGAm => p.g_bm_enhanced = v * p.g_am,
            Axis::GAm => p.g_am = v,
            Axis::KappaA => p.kappa_a = v,
            Axis::KappaM => p.kappa_m = v,
            Axis::GammaB => p.gamma_b = v,
            Axis::KappaRatio => {
                if !(v > 0.0) {
                    return Err(Error::Domain(format!("kappa_ratio must be > 0, got {v}")));
                }
                p.kappa_a = p.kappa_m / v;
            }
            Axis::QualityFactor => {
                if !(v > 0.0) {
                    return Err(Error::Domain(format!("Q must be > 0, got {v}")));
                }
                p.gamma_b = p.omega_b / v;
            }
            Axis::TemperatureK => p.bath = Bath::Temperature { kelvin: v },
            Axis::NbarA | Axis::NbarM | Axis::NbarB => {
                let occ = p.occupancies()?;
                let (mut a, mut m, mut b) = (occ.nbar_a, occ.nbar_m, occ.nbar_b);
                match self {
                    Axis::NbarA => a = v,
                    Axis::NbarM => m = v,
                    _ => b = v,
                }
                p.bath = Bath::Occupancies {
                    nbar_a: a,
                    nbar_m: m,
                    nbar_b: b,
                };
            }
        }
        Ok(())
    }

    fn sets_gamma_b(self) -> bool {
        matches!(self, Axis::GammaB | Axis::QualityFactor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoints {
    /// Grid runs from `min` to `max` inclusive.
    #[default]
    Include,
    /// Open interval: `points` interior points of `points + 1` equal steps.
    Exclude,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisRange {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub endpoints: Endpoints,
}

impl AxisRange {
    pub fn linear(axis: Axis, min: f64, max: f64, points: usize) -> Self {
        Self {
            axis,
            min,
            max,
            points,
            spacing: Spacing::Linear,
            endpoints: Endpoints::Include,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Config(format!(
                "{}: points must be >= 2",
                self.axis.name()
            )));
        }
        if !(self.min < self.max) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config(format!(
                "{}: need finite min < max, got [{}, {}]",
                self.axis.name(),
                self.min,
                self.max
            )));
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            return Err(Error::Config(format!(
                "{}: log spacing needs min > 0",
                self.axis.name()
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let (steps, offset) = match self.endpoints {
            Endpoints::Include => ((n - 1) as f64, 0.0),
            Endpoints::Exclude => ((n + 1) as f64, 1.0),
        };
        let frac = |i: usize| (i as f64 + offset) / steps;
        match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| {
                    let t = frac(i);
                    if self.endpoints == Endpoints::Include && i == n - 1 {
                        self.max
                    } else {
                        self.min + (self.max - self.min) * t
                    }
                })
                .collect(),
            Spacing::Log => {
                let (lo, hi) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| {
                        if self.endpoints == Endpoints::Include && i == 0 {
                            self.min
                        } else if self.endpoints == Endpoints::Include && i == n - 1 {
                            self.max
                        } else {
                            (lo + (hi - lo) * frac(i)).exp()
                        }
                    })
                    .collect()
            }
        }
    }
}

/// A quantity a sweep can report per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Output {
    EAb,
    EAm,
    EMb,
    /// `T(E_mb → E_ab)`.
    Transfer,
    NBeta1,
    NBeta2,
    Stability,
    EtaAb,
    EtaAm,
    EtaMb,
    MaxRealPart,
    SqueezeR,
    GEff,
}

impl Output {
    pub const ALL: [Output; 13] = [
        Output::EAb,
        Output::EAm,
        Output::EMb,
        Output::Transfer,
        Output::NBeta1,
        Output::NBeta2,
        Output::Stability,
        Output::EtaAb,
        Output::EtaAm,
        Output::EtaMb,
        Output::MaxRealPart,
        Output::SqueezeR,
        Output::GEff,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Output::EAb => "E_ab",
            Output::EAm => "E_am",
            Output::EMb => "E_mb",
            Output::Transfer => "T",
            Output::NBeta1 => "n_beta1",
            Output::NBeta2 => "n_beta2",
            Output::Stability => "stability",
            Output::EtaAb => "eta_ab",
            Output::EtaAm => "eta_am",
            Output::EtaMb => "eta_mb",
            Output::MaxRealPart => "max_real_part",
            Output::SqueezeR => "r",
            Output::GEff => "G_eff",
        }
    }

    pub fn from_key(key: &str) -> Result<Self> {
        if key == "eta" {
            return Ok(Output::EtaAb);
        }
        Output::ALL
            .into_iter()
            .find(|o| o.key() == key)
            .ok_or_else(|| Error::Config(format!("unknown output {key:?}")))
    }

    fn cell(self, point: &PointResult) -> Cell {
        let max_re = point.verdict.max_real_part;
        match (self, point.steady_state()) {
            (Output::Stability, _) => Cell::Bool(point.verdict.stable),
            (Output::MaxRealPart, _) => Cell::Number(max_re),
            (_, None) => Cell::Null,
            (o, Some(ss)) => {
                let rep = &ss.report;
                let opt = |v: Option<f64>| v.map_or(Cell::Null, Cell::Number);
                match o {
                    Output::EAb => Cell::Number(rep.ab.e_n),
                    Output::EAm => Cell::Number(rep.am.e_n),
                    Output::EMb => Cell::Number(rep.mb.e_n),
                    Output::EtaAb => Cell::Number(rep.ab.eta),
                    Output::EtaAm => Cell::Number(rep.am.eta),
                    Output::EtaMb => Cell::Number(rep.mb.eta),
                    Output::Transfer => opt(rep.transfer_mb_to_ab.value()),
                    Output::NBeta1 => opt(rep.occupancies.map(|o| o.n_beta1)),
                    Output::NBeta2 => opt(rep.occupancies.map(|o| o.n_beta2)),
                    Output::SqueezeR => opt(rep.squeezing.map(|s| s.r)),
                    Output::GEff => opt(rep.squeezing.map(|s| s.g_eff)),
                    Output::Stability | Output::MaxRealPart => unreachable!(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// One or two axes; two give a row-major grid.
    pub axes: Vec<AxisRange>,
    pub overrides: Vec<(Axis, f64)>,
    pub outputs: Vec<Output>,
    /// Keep `γ_b = κ_a` whenever either moves.
    pub lock_gamma_b_to_kappa_a: bool,
}

impl SweepSpec {
    pub fn new(axis: AxisRange, outputs: Vec<Output>) -> Self {
        Self {
            axes: vec![axis],
            overrides: Vec::new(),
            outputs,
            lock_gamma_b_to_kappa_a: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Config(format!(
                "a sweep needs one or two axes, got {}",
                self.axes.len()
            )));
        }
        for a in &self.axes {
            a.validate()?;
        }
        if self.outputs.is_empty() {
            return Err(Error::Config("no outputs requested".into()));
        }
        Ok(())
    }

    /// Every grid point as axis values, row-major.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            let vals = axis.values();
            grid = grid
                .into_iter()
                .flat_map(|prefix| {
                    vals.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(*v);
                        p
                    })
                })
                .collect();
        }
        grid
    }

    fn lock(&self, p: &mut SystemParams, last: Option<Axis>) {
        if self.lock_gamma_b_to_kappa_a {
            if last.is_some_and(Axis::sets_gamma_b) {
                p.kappa_a = p.gamma_b;
            } else {
                p.gamma_b = p.kappa_a;
            }
        }
    }

    /// Base parameters with overrides applied, before any axis.
    pub fn resolved_base(&self, base: &SystemParams) -> Result<SystemParams> {
        let mut p = base.clone();
        let mut last = None;
        for (axis, v) in &self.overrides {
            axis.apply(&mut p, *v)?;
            last = Some(*axis);
        }
        self.lock(&mut p, last);
        Ok(p)
    }

    pub fn params_at(&self, base: &SystemParams, values: &[f64]) -> Result<SystemParams> {
        let mut p = self.resolved_base(base)?;
        let mut last = None;
        for (axis, v) in self.axes.iter().zip(values) {
            axis.axis.apply(&mut p, *v)?;
            last = Some(axis.axis);
        }
        self.lock(&mut p, last);
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    /// Requested outputs, aligned with `SweepSpec::outputs`; null when unstable.
    pub values: Vec<Cell>,
    pub stable: bool,
    pub branch_count: Option<usize>,
    pub point: PointResult,
}

/// Evaluate every grid point. Points run in parallel on the current rayon
/// pool and are assembled in grid order.
pub fn run_sweep(
    spec: &SweepSpec,
    base: &SystemParams,
    drive: Option<&DriveParams>,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let grid = spec.grid();
    let rows = grid
        .into_par_iter()
        .map(|values| {
            let params = spec.params_at(base, &values)?;
            let point = match drive {
                Some(d) => evaluate_driven(&params, d)?,
                None => evaluate(&params)?,
            };
            let cells = spec.outputs.iter().map(|o| o.cell(&point)).collect();
            Ok(SweepRow {
                axis_values: values,
                values: cells,
                stable: point.verdict.stable,
                branch_count: point.branches.as_ref().map(|b| b.len()),
                point,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().all(|r| !r.stable) {
        return Err(Error::AllUnstable { points: rows.len() });
    }
    Ok(rows)
}

/// Tabulate rows: axis columns, requested outputs, the stability flag (if not
/// already requested) and the branch count when a classical solve was active.
pub fn to_table(spec: &SweepSpec, rows: &[SweepRow]) -> Table {
    let mut columns: Vec<String> = spec
        .axes
        .iter()
        .map(|a| a.axis.name().to_string())
        .collect();
    columns.extend(spec.outputs.iter().map(|o| o.key().to_string()));
    let add_stability = !spec.outputs.contains(&Output::Stability);
    if add_stability {
        columns.push(Output::Stability.key().to_string());
    }
    let with_branches = rows.iter().any(|r| r.branch_count.is_some());
    if with_branches {
        columns.push("branch_count".into());
    }
    let body = rows
        .iter()
        .map(|r| {
            let mut cells: Vec<Cell> = r.axis_values.iter().map(|v| Cell::Number(*v)).collect();
            cells.extend(r.values.iter().cloned());
            if add_stability {
                cells.push(Cell::Bool(r.stable));
            }
            if with_branches {
                cells.push(r.branch_count.map_or(Cell::Null, |n| Cell::Int(n as i64)));
            }
            cells
        })
        .collect();
    Table {
        columns,
        rows: body,
    }
}
