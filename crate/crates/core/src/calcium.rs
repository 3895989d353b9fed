//! Calcium-signaling perceptrons and a two-cell, two-bit ADC.
//!
//! Each cell integrates a reduced transient model
//!
//! ```text
//! dC/dt = a·w·x + b − V_p·Cⁿ/(K_pⁿ + Cⁿ) − k_s·C + k_r·S
//! dS/dt = k_s·C − k_r·S
//! ```
//!
//! where `x` is the extracellular Ca²⁺ concentration, `w` the channel influx
//! rate (the perceptron weight), `a` the channel activity and `b` a constant
//! bias influx. The saturated cytoplasmic level is thresholded into a bit.
//!
//! Cell 1 produces the MSB. Cell 2 produces the LSB; when cell 1 fires, its
//! output molecules deactivate a fraction `d0` of cell 2's channel, so the
//! effective cell-2 influx is `(1 − d0·Z0)·w1·x + b1`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::ann::TrainingTrace;
use crate::config::{ConfigError, KeyValues};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalciumError {
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("no steady state within {elapsed} s (last C = {last_c} µM)")]
    NotSettled { last_c: f64, elapsed: f64 },
    #[error("{cell} training did not converge within {epochs} epochs ({remaining} samples still misclassified)")]
    TrainingFailure { cell: &'static str, epochs: usize, remaining: usize, trace: Box<TrainingTrace> },
    #[error("input {x} µM outside the converter range [{low}, {high}] µM")]
    Range { x: f64, low: f64, high: f64 },
    #[error("invalid parameters: {0}")]
    Config(String),
    #[error(transparent)]
    File(#[from] ConfigError),
}

pub type Result<T, E = CalciumError> = std::result::Result<T, E>;

/// Constants of the transient model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalciumModelParams {
    /// V_p, µM/s.
    pub pump_max_rate: f64,
    /// K_p, µM.
    pub pump_half_saturation: f64,
    /// n_p.
    pub pump_hill: f64,
    /// k_s, 1/s.
    pub store_uptake: f64,
    /// k_r, 1/s.
    pub store_release: f64,
    /// Explicit Euler step, s.
    pub dt: f64,
    /// Settling threshold on |dC/dt|, µM/s.
    pub settle_tol: f64,
    /// Simulated time limit, s.
    pub t_max: f64,
}

impl Default for CalciumModelParams {
    fn default() -> Self {
        CalciumModelParams {
            pump_max_rate: 10.0,
            pump_half_saturation: 1.0,
            pump_hill: 2.0,
            store_uptake: 0.1,
            store_release: 0.1,
            dt: 0.01,
            settle_tol: 1e-6,
            t_max: 200.0,
        }
    }
}

impl CalciumModelParams {
    /// Largest slope of the pump term plus the store exchange rates; the
    /// explicit step is accepted when `dt <= 0.1 / max_rate`.
    pub fn max_rate(&self) -> f64 {
        let n = self.pump_hill;
        let u = ((n - 1.0) / (n + 1.0)).powf(1.0 / n);
        let pump_slope =
            self.pump_max_rate / self.pump_half_saturation * n * u.powf(n - 1.0) / (1.0 + u.powf(n)).powi(2);
        pump_slope + self.store_uptake + self.store_release
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("pump_max_rate", self.pump_max_rate),
            ("pump_half_saturation", self.pump_half_saturation),
            ("pump_hill", self.pump_hill),
            ("store_uptake", self.store_uptake),
            ("store_release", self.store_release),
            ("dt", self.dt),
            ("settle_tol", self.settle_tol),
            ("t_max", self.t_max),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !(v.is_finite() && *v >= 0.0)) {
            return Err(CalciumError::Config(format!("{name} must be finite and >= 0, got {v}")));
        }
        if self.pump_half_saturation <= 0.0 || self.dt <= 0.0 || self.settle_tol <= 0.0 {
            return Err(CalciumError::Config("pump_half_saturation, dt and settle_tol must be positive".into()));
        }
        if self.pump_hill < 1.0 {
            return Err(CalciumError::Config(format!("pump_hill must be >= 1, got {}", self.pump_hill)));
        }
        let bound = 0.1 / self.max_rate();
        if self.dt > bound {
            return Err(CalciumError::Config(format!("dt = {} exceeds the stability bound {bound}", self.dt)));
        }
        Ok(())
    }

    fn pump(&self, c: f64) -> f64 {
        if c <= 0.0 {
            return 0.0;
        }
        let cn = c.powf(self.pump_hill);
        self.pump_max_rate * cn / (self.pump_half_saturation.powf(self.pump_hill) + cn)
    }
}

/// State of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalciumCellState {
    /// Cytoplasmic Ca²⁺, µM.
    pub c: f64,
    /// Store Ca²⁺, µM.
    pub s: f64,
    /// Channel activity fraction in [0, 1].
    pub activity: f64,
    /// Influx weight, 1/s.
    pub weight: f64,
    /// Bias influx, µM/s.
    pub bias: f64,
}

impl CalciumCellState {
    pub fn resting(weight: f64, bias: f64) -> Self {
        CalciumCellState { c: 0.0, s: 0.0, activity: 1.0, weight, bias }
    }

    pub fn influx(&self, x: f64) -> f64 {
        self.activity * self.weight * x + self.bias
    }

    /// `(dC/dt, dS/dt)` at the current state.
    pub fn derivatives(&self, x: f64, p: &CalciumModelParams) -> (f64, f64) {
        let exchange = p.store_uptake * self.c - p.store_release * self.s;
        (self.influx(x) - p.pump(self.c) - exchange, exchange)
    }
}

/// One explicit Euler step; concentrations are clamped at zero.
pub fn step_transient(cell: &CalciumCellState, x: f64, p: &CalciumModelParams) -> Result<CalciumCellState> {
    let (dc, ds) = cell.derivatives(x, p);
    let next = CalciumCellState { c: (cell.c + p.dt * dc).max(0.0), s: (cell.s + p.dt * ds).max(0.0), ..*cell };
    if !(next.c.is_finite() && next.s.is_finite()) {
        return Err(CalciumError::Numeric(format!("non-finite state after step (C = {}, S = {})", next.c, next.s)));
    }
    Ok(next)
}

fn check_cell(cell: &CalciumCellState, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(CalciumError::Config(format!("extracellular input must be finite and >= 0, got {x}")));
    }
    if !(cell.c >= 0.0 && cell.s >= 0.0 && cell.weight >= 0.0 && cell.bias >= 0.0) {
        return Err(CalciumError::Config("cell concentrations, weight and bias must be >= 0".into()));
    }
    if !(0.0..=1.0).contains(&cell.activity) {
        return Err(CalciumError::Config(format!("channel activity {} outside [0, 1]", cell.activity)));
    }
    Ok(())
}

/// Integrates from the cell's state until `|dC/dt| < settle_tol`.
///
/// Returns [`CalciumError::NotSettled`] with the last concentration when
/// `t_max` is reached first.
pub fn simulate_to_saturation(cell: &CalciumCellState, x: f64, p: &CalciumModelParams) -> Result<f64> {
    p.validate()?;
    check_cell(cell, x)?;
    let steps = (p.t_max / p.dt).ceil() as usize;
    let mut state = *cell;
    for _ in 0..steps {
        if state.derivatives(x, p).0.abs() < p.settle_tol {
            return Ok(state.c);
        }
        state = step_transient(&state, x, p)?;
    }
    if state.derivatives(x, p).0.abs() < p.settle_tol {
        return Ok(state.c);
    }
    Err(CalciumError::NotSettled { last_c: state.c, elapsed: steps as f64 * p.dt })
}

/// Saturated level used for bit readout: an unsettled run (influx beyond
/// pump capacity) reads out its last concentration.
pub fn readout_level(cell: &CalciumCellState, x: f64, p: &CalciumModelParams) -> Result<f64> {
    match simulate_to_saturation(cell, x, p) {
        Err(CalciumError::NotSettled { last_c, .. }) => Ok(last_c),
        other => other,
    }
}

/// 1 iff `c >= theta`.
pub fn bit_of(c: f64, theta: f64) -> u8 {
    u8::from(c >= theta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Extracellular Ca²⁺, µM.
    pub x: f64,
    pub expected: u8,
}

impl Sample {
    pub fn new(x: f64, expected: u8) -> Self {
        Sample { x, expected }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerceptronConfig {
    /// Influx-rate increment per corrective injection.
    pub delta_w: f64,
    /// Deactivation-rate increment for the cell-2 exception case.
    pub delta_d: f64,
    pub max_epochs: usize,
}

impl Default for PerceptronConfig {
    fn default() -> Self {
        PerceptronConfig { delta_w: 0.001, delta_d: 0.05, max_epochs: 1000 }
    }
}

impl PerceptronConfig {
    fn validate(&self) -> Result<()> {
        if !(self.delta_w > 0.0 && self.delta_w.is_finite()) {
            return Err(CalciumError::Config(format!("delta_w must be positive, got {}", self.delta_w)));
        }
        if !(self.delta_d >= 0.0 && self.delta_d.is_finite()) {
            return Err(CalciumError::Config(format!("delta_d must be >= 0, got {}", self.delta_d)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateKind {
    /// Bit 0, expected 1: activation chemical raises the influx rate.
    FalseNegative,
    /// Bit 1, expected 0: deactivation chemical lowers the influx rate.
    FalsePositive,
    /// Both bits 1 with expected LSB 0: cell 1's deactivation rate is raised.
    Exception,
}

/// One corrective action taken during training.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateEvent {
    pub epoch: usize,
    pub x: f64,
    pub kind: UpdateKind,
    pub weight_before: f64,
    pub weight_after: f64,
    pub deactivation_before: f64,
    pub deactivation_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellTraining {
    pub weight: f64,
    /// Deactivation rate `d0` (cell 2 only; zero for cell 1).
    pub deactivation: f64,
    /// Per epoch: parameters at the end of the epoch and the number of
    /// misclassified samples seen during it.
    pub trace: TrainingTrace,
    pub events: Vec<UpdateEvent>,
}

fn check_samples(samples: &[Sample]) -> Result<()> {
    if samples.is_empty() {
        return Err(CalciumError::Config("no training samples".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.expected > 1 || !(s.x >= 0.0 && s.x.is_finite())) {
        return Err(CalciumError::Config(format!("invalid sample ({}, {})", s.x, s.expected)));
    }
    Ok(())
}

/// Sequential perceptron training of the MSB cell.
///
/// Each misclassified sample adjusts the influx rate by `±delta_w` right
/// away; training ends after the first epoch without errors.
pub fn train_cell1(
    cell: &CalciumCellState,
    samples: &[Sample],
    theta: f64,
    cfg: &PerceptronConfig,
    p: &CalciumModelParams,
) -> Result<CellTraining> {
    cfg.validate()?;
    check_samples(samples)?;
    let mut cell = *cell;
    let mut trace = TrainingTrace::new();
    let mut events = Vec::new();
    for epoch in 0..cfg.max_epochs {
        let (mut fneg, mut fpos) = (0usize, 0usize);
        for s in samples {
            let z = bit_of(readout_level(&cell, s.x, p)?, theta);
            let kind = match (z, s.expected) {
                (0, 1) => UpdateKind::FalseNegative,
                (1, 0) => UpdateKind::FalsePositive,
                _ => continue,
            };
            let before = cell.weight;
            cell.weight = match kind {
                UpdateKind::FalseNegative => {
                    fneg += 1;
                    before + cfg.delta_w
                }
                _ => {
                    fpos += 1;
                    (before - cfg.delta_w).max(0.0)
                }
            };
            events.push(UpdateEvent {
                epoch,
                x: s.x,
                kind,
                weight_before: before,
                weight_after: cell.weight,
                deactivation_before: 0.0,
                deactivation_after: 0.0,
            });
        }
        let params = BTreeMap::from([
            ("w0".to_string(), cell.weight),
            ("false_negatives".to_string(), fneg as f64),
            ("false_positives".to_string(), fpos as f64),
        ]);
        trace.record(params, (fneg + fpos) as f64);
        if fneg + fpos == 0 {
            return Ok(CellTraining { weight: cell.weight, deactivation: 0.0, trace, events });
        }
    }
    let remaining = trace.last().map_or(samples.len(), |r| r.error as usize);
    Err(CalciumError::TrainingFailure { cell: "cell 1", epochs: cfg.max_epochs, remaining, trace: Box::new(trace) })
}

/// Two-cell converter mapping `[input_low, input_high]` onto four codes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdcSystem {
    /// MSB cell; `bias` is b₀.
    pub cell1: CalciumCellState,
    /// LSB cell; `bias` is b₁, `activity` is overridden during conversion.
    pub cell2: CalciumCellState,
    /// Fraction of cell 2's channel disabled while cell 1 reads 1.
    pub d0: f64,
    /// Bit threshold, µM.
    pub theta: f64,
    pub input_low: f64,
    pub input_high: f64,
    pub sample_interval: f64,
}

/// Bias influx of cell 1, µM/s.
pub const BIAS_CELL1: f64 = 0.169255;
/// Bias influx of cell 2, µM/s.
pub const BIAS_CELL2: f64 = 0.287264;

impl Default for AdcSystem {
    fn default() -> Self {
        AdcSystem {
            cell1: CalciumCellState::resting(0.0, BIAS_CELL1),
            cell2: CalciumCellState::resting(0.0, BIAS_CELL2),
            d0: 0.0,
            theta: 1.0,
            input_low: 500.0,
            input_high: 2500.0,
            sample_interval: 500.0,
        }
    }
}

/// Result of converting one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdcReading {
    pub x: f64,
    pub c1: f64,
    pub c2: f64,
    pub z0: u8,
    pub z1: u8,
}

impl AdcReading {
    pub fn code(&self) -> String {
        format!("{}{}", self.z0, self.z1)
    }

    pub fn value(&self) -> u8 {
        (self.z0 << 1) | self.z1
    }
}

impl AdcSystem {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(CalciumError::Config(format!("theta must be positive, got {}", self.theta)));
        }
        if !(0.0..=1.0).contains(&self.d0) {
            return Err(CalciumError::Config(format!("d0 must lie in [0, 1], got {}", self.d0)));
        }
        if !(self.input_low.is_finite()
            && self.input_high.is_finite()
            && self.input_low >= 0.0
            && self.input_low < self.input_high)
        {
            return Err(CalciumError::Config(format!("invalid input range [{}, {}]", self.input_low, self.input_high)));
        }
        let intervals = (self.input_high - self.input_low) / self.sample_interval;
        if (intervals - 4.0).abs() >= 1e-9 || intervals.is_nan() {
            return Err(CalciumError::Config(format!(
                "a two-bit converter needs exactly four sample intervals, got {intervals}"
            )));
        }
        Ok(())
    }

    /// Midpoints of the four input intervals.
    pub fn interval_midpoints(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.input_low + self.sample_interval * (k as f64 + 0.5))
    }

    /// Ideal code level (0..=3) of an input.
    pub fn ideal_level(&self, x: f64) -> u8 {
        let k = ((x - self.input_low) / self.sample_interval).floor();
        k.clamp(0.0, 3.0) as u8
    }

    pub fn msb_samples(&self) -> Vec<Sample> {
        self.interval_midpoints().iter().map(|&x| Sample::new(x, self.ideal_level(x) >> 1)).collect()
    }

    pub fn lsb_samples(&self) -> Vec<Sample> {
        self.interval_midpoints().iter().map(|&x| Sample::new(x, self.ideal_level(x) & 1)).collect()
    }

    fn cell2_for(&self, z0: u8) -> CalciumCellState {
        CalciumCellState { activity: (1.0 - self.d0 * f64::from(z0)).clamp(0.0, 1.0), ..self.cell2 }
    }

    fn read(&self, x: f64, p: &CalciumModelParams) -> Result<AdcReading> {
        let c1 = readout_level(&self.cell1, x, p)?;
        let z0 = bit_of(c1, self.theta);
        let c2 = readout_level(&self.cell2_for(z0), x, p)?;
        Ok(AdcReading { x, c1, c2, z0, z1: bit_of(c2, self.theta) })
    }
}

/// Trains cell 2's influx rate and cell 1's deactivation rate with cell 1
/// fixed.
///
/// Misclassifications adjust `w1` by `±delta_w`, except when both bits read 1
/// but the expected LSB is 0, which raises `d0` by `delta_d` instead.
pub fn train_cell2(
    system: &AdcSystem,
    samples: &[Sample],
    cfg: &PerceptronConfig,
    p: &CalciumModelParams,
) -> Result<CellTraining> {
    cfg.validate()?;
    system.validate()?;
    check_samples(samples)?;
    let msb: Vec<u8> = samples
        .iter()
        .map(|s| Ok(bit_of(readout_level(&system.cell1, s.x, p)?, system.theta)))
        .collect::<Result<_>>()?;

    let mut sys = *system;
    let mut trace = TrainingTrace::new();
    let mut events = Vec::new();
    for epoch in 0..cfg.max_epochs {
        let (mut fneg, mut fpos, mut exc) = (0usize, 0usize, 0usize);
        for (s, &z0) in samples.iter().zip(&msb) {
            let z1 = bit_of(readout_level(&sys.cell2_for(z0), s.x, p)?, sys.theta);
            let kind = match (z0, z1, s.expected) {
                (_, 0, 1) => UpdateKind::FalseNegative,
                (1, 1, 0) => UpdateKind::Exception,
                (_, 1, 0) => UpdateKind::FalsePositive,
                _ => continue,
            };
            let (w_before, d_before) = (sys.cell2.weight, sys.d0);
            match kind {
                UpdateKind::FalseNegative => {
                    fneg += 1;
                    sys.cell2.weight += cfg.delta_w;
                }
                UpdateKind::FalsePositive => {
                    fpos += 1;
                    sys.cell2.weight = (sys.cell2.weight - cfg.delta_w).max(0.0);
                }
                UpdateKind::Exception => {
                    exc += 1;
                    sys.d0 = (sys.d0 + cfg.delta_d).min(1.0);
                }
            }
            events.push(UpdateEvent {
                epoch,
                x: s.x,
                kind,
                weight_before: w_before,
                weight_after: sys.cell2.weight,
                deactivation_before: d_before,
                deactivation_after: sys.d0,
            });
        }
        let params = BTreeMap::from([
            ("w1".to_string(), sys.cell2.weight),
            ("d0".to_string(), sys.d0),
            ("false_negatives".to_string(), fneg as f64),
            ("false_positives".to_string(), fpos as f64),
            ("exceptions".to_string(), exc as f64),
        ]);
        let errors = fneg + fpos + exc;
        trace.record(params, errors as f64);
        if errors == 0 {
            return Ok(CellTraining { weight: sys.cell2.weight, deactivation: sys.d0, trace, events });
        }
    }
    let remaining = trace.last().map_or(samples.len(), |r| r.error as usize);
    Err(CalciumError::TrainingFailure { cell: "cell 2", epochs: cfg.max_epochs, remaining, trace: Box::new(trace) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdcTraining {
    pub system: AdcSystem,
    pub cell1: CellTraining,
    pub cell2: CellTraining,
}

/// Trains cell 1 on the MSB of the interval midpoints, then cell 2 on the LSB.
pub fn train_adc(system: &AdcSystem, cfg: &PerceptronConfig, p: &CalciumModelParams) -> Result<AdcTraining> {
    system.validate()?;
    p.validate()?;
    let cell1 = train_cell1(&system.cell1, &system.msb_samples(), system.theta, cfg, p)?;
    let mut trained = *system;
    trained.cell1.weight = cell1.weight;
    let cell2 = train_cell2(&trained, &system.lsb_samples(), cfg, p)?;
    trained.cell2.weight = cell2.weight;
    trained.d0 = cell2.deactivation;
    Ok(AdcTraining { system: trained, cell1, cell2 })
}

/// Converts one input within the system's range.
pub fn adc_convert(system: &AdcSystem, x: f64, p: &CalciumModelParams) -> Result<AdcReading> {
    system.validate()?;
    if !(x >= system.input_low && x <= system.input_high) {
        return Err(CalciumError::Range { x, low: system.input_low, high: system.input_high });
    }
    system.read(x, p)
}

/// Converts `input_low, input_low + stride, …` up to `input_high`.
pub fn adc_sweep(system: &AdcSystem, stride: f64, p: &CalciumModelParams) -> Result<Vec<AdcReading>> {
    system.validate()?;
    if !(stride > 0.0 && stride.is_finite()) {
        return Err(CalciumError::Config(format!("stride must be positive, got {stride}")));
    }
    let span = system.input_high - system.input_low;
    let count = (span / stride + 1e-9).floor() as usize + 1;
    (0..count)
        .into_par_iter()
        .map(|k| adc_convert(system, (system.input_low + k as f64 * stride).min(system.input_high), p))
        .collect()
}

/// Model, converter and training settings read from one `key=value` file.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdcSetup {
    pub params: CalciumModelParams,
    pub system: AdcSystem,
    pub training: PerceptronConfig,
}

const SETUP_KEYS: &[&str] = &[
    "pump_max_rate",
    "pump_half_saturation",
    "pump_hill",
    "store_uptake",
    "store_release",
    "dt",
    "settle_tol",
    "t_max",
    "b0",
    "b1",
    "w0",
    "w1",
    "d0",
    "theta",
    "input_low",
    "input_high",
    "sample_interval",
    "delta_w",
    "delta_d",
    "max_epochs",
];

impl AdcSetup {
    /// Defaults overridden by any keys present in `kv`; unknown keys are
    /// rejected.
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        kv.reject_unknown(SETUP_KEYS)?;
        let mut s = AdcSetup::default();
        let p = &mut s.params;
        kv.apply("pump_max_rate", &mut p.pump_max_rate)?;
        kv.apply("pump_half_saturation", &mut p.pump_half_saturation)?;
        kv.apply("pump_hill", &mut p.pump_hill)?;
        kv.apply("store_uptake", &mut p.store_uptake)?;
        kv.apply("store_release", &mut p.store_release)?;
        kv.apply("dt", &mut p.dt)?;
        kv.apply("settle_tol", &mut p.settle_tol)?;
        kv.apply("t_max", &mut p.t_max)?;
        let sys = &mut s.system;
        kv.apply("b0", &mut sys.cell1.bias)?;
        kv.apply("b1", &mut sys.cell2.bias)?;
        kv.apply("w0", &mut sys.cell1.weight)?;
        kv.apply("w1", &mut sys.cell2.weight)?;
        kv.apply("d0", &mut sys.d0)?;
        kv.apply("theta", &mut sys.theta)?;
        kv.apply("input_low", &mut sys.input_low)?;
        kv.apply("input_high", &mut sys.input_high)?;
        kv.apply("sample_interval", &mut sys.sample_interval)?;
        let t = &mut s.training;
        kv.apply("delta_w", &mut t.delta_w)?;
        kv.apply("delta_d", &mut t.delta_d)?;
        kv.apply("max_epochs", &mut t.max_epochs)?;
        s.params.validate()?;
        s.system.validate()?;
        s.training.validate()?;
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_key_values(&KeyValues::parse(text)?)
    }

    pub fn to_key_values(&self) -> KeyValues {
        let (p, sys, t) = (&self.params, &self.system, &self.training);
        let mut kv = KeyValues::default();
        for (k, v) in [
            ("pump_max_rate", p.pump_max_rate),
            ("pump_half_saturation", p.pump_half_saturation),
            ("pump_hill", p.pump_hill),
            ("store_uptake", p.store_uptake),
            ("store_release", p.store_release),
            ("dt", p.dt),
            ("settle_tol", p.settle_tol),
            ("t_max", p.t_max),
            ("b0", sys.cell1.bias),
            ("b1", sys.cell2.bias),
            ("w0", sys.cell1.weight),
            ("w1", sys.cell2.weight),
            ("d0", sys.d0),
            ("theta", sys.theta),
            ("input_low", sys.input_low),
            ("input_high", sys.input_high),
            ("sample_interval", sys.sample_interval),
            ("delta_w", t.delta_w),
            ("delta_d", t.delta_d),
        ] {
            kv.insert(k, v);
        }
        kv.insert("max_epochs", t.max_epochs);
        kv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> CalciumModelParams {
        CalciumModelParams::default()
    }

    #[test]
    fn rest_state_is_fixed() {
        let cell = CalciumCellState::resting(0.0, 0.0);
        assert_eq!(step_transient(&cell, 0.0, &p()).unwrap(), cell);
        assert_eq!(simulate_to_saturation(&cell, 1500.0, &p()).unwrap(), 0.0);
    }

    #[test]
    fn without_influx_cytoplasm_only_drains() {
        let mut cell = CalciumCellState { c: 3.0, s: 0.5, activity: 0.0, weight: 1.0, bias: 0.0 };
        for _ in 0..2000 {
            let (dc, _) = cell.derivatives(1000.0, &p());
            assert!(dc <= 0.0 || cell.s > cell.c);
            let next = step_transient(&cell, 1000.0, &p()).unwrap();
            assert!(next.c + next.s <= cell.c + cell.s + 1e-12);
            cell = next;
        }
    }

    #[test]
    fn default_steady_state_is_one_micromolar() {
        // J = 5 with V_p = 10, K_p = 1, n_p = 2: C²/(1 + C²) = 1/2
        let cell = CalciumCellState::resting(0.005, 0.0);
        let c = simulate_to_saturation(&cell, 1000.0, &p()).unwrap();
        assert!((c - 1.0).abs() < 1e-3, "{c}");
    }

    #[test]
    fn saturation_is_monotone_in_input() {
        let cell = CalciumCellState::resting(0.002, BIAS_CELL1);
        let lo = simulate_to_saturation(&cell, 1000.0, &p()).unwrap();
        let hi = simulate_to_saturation(&cell, 2000.0, &p()).unwrap();
        assert!(lo <= hi);
    }

    #[test]
    fn influx_beyond_pump_capacity_does_not_settle() {
        let cell = CalciumCellState::resting(0.01, 0.0);
        match simulate_to_saturation(&cell, 2000.0, &p()) {
            Err(CalciumError::NotSettled { last_c, .. }) => assert!(last_c > 10.0),
            other => panic!("expected NotSettled, got {other:?}"),
        }
        assert!(readout_level(&cell, 2000.0, &p()).unwrap() > 10.0);
    }

    #[test]
    fn pump_disabled_conserves_total_calcium() {
        let params = CalciumModelParams { pump_max_rate: 0.0, ..p() };
        let mut cell = CalciumCellState { c: 0.4, s: 1.3, activity: 0.7, weight: 0.002, bias: 0.3 };
        let x = 900.0;
        for _ in 0..500 {
            let next = step_transient(&cell, x, &params).unwrap();
            let gained = (next.c + next.s) - (cell.c + cell.s);
            assert!((gained - cell.influx(x) * params.dt).abs() < 1e-9);
            cell = next;
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(p().validate().is_ok());
        assert!(CalciumModelParams { dt: 0.05, ..p() }.validate().is_err());
        assert!(CalciumModelParams { store_uptake: -1.0, ..p() }.validate().is_err());
        assert!(CalciumModelParams { pump_hill: 0.5, ..p() }.validate().is_err());
        let cell = CalciumCellState::resting(0.0, 0.0);
        assert!(simulate_to_saturation(&cell, -1.0, &p()).is_err());
    }

    #[test]
    fn bit_readout_is_inclusive() {
        assert_eq!(bit_of(0.5, 1.0), 0);
        assert_eq!(bit_of(1.0, 1.0), 1);
        assert_eq!(bit_of(2.3, 1.0), 1);
    }

    #[test]
    fn cell1_all_zero_targets_need_no_update() {
        let samples: Vec<Sample> = [750.0, 1250.0, 1750.0, 2250.0].iter().map(|&x| Sample::new(x, 0)).collect();
        let t =
            train_cell1(&CalciumCellState::resting(0.0, BIAS_CELL1), &samples, 1.0, &PerceptronConfig::default(), &p())
                .unwrap();
        assert_eq!(t.trace.len(), 1);
        assert!(t.events.is_empty());
        assert_eq!(t.weight, 0.0);
    }

    #[test]
    fn cell1_learns_the_msb() {
        let sys = AdcSystem::default();
        let t = train_cell1(&sys.cell1, &sys.msb_samples(), 1.0, &PerceptronConfig::default(), &p()).unwrap();
        assert_eq!(t.trace.last().unwrap().error, 0.0);
        let cell = CalciumCellState { weight: t.weight, ..sys.cell1 };
        assert!(simulate_to_saturation(&cell, 1750.0, &p()).unwrap() >= 1.0);
        assert!(simulate_to_saturation(&cell, 1250.0, &p()).unwrap() < 1.0);
    }

    #[test]
    fn cell1_lowers_weight_on_false_positives() {
        let start = CalciumCellState::resting(0.0045, BIAS_CELL1);
        let sys = AdcSystem::default();
        let t = train_cell1(&start, &sys.msb_samples(), 1.0, &PerceptronConfig::default(), &p()).unwrap();
        assert!(t.events.iter().all(|e| e.kind == UpdateKind::FalsePositive));
        assert!(t.weight < 0.0045);
    }

    #[test]
    fn cell2_exception_fires_first_at_third_interval() {
        let mut sys = AdcSystem::default();
        sys.cell1.weight =
            train_cell1(&sys.cell1, &sys.msb_samples(), 1.0, &PerceptronConfig::default(), &p()).unwrap().weight;
        let t = train_cell2(&sys, &sys.lsb_samples(), &PerceptronConfig::default(), &p()).unwrap();
        let first = t.events.iter().find(|e| e.kind == UpdateKind::Exception).unwrap();
        assert_eq!(first.x, 1750.0);
        assert!(t.deactivation > 0.0);
    }

    #[test]
    fn cell2_cannot_fix_exception_without_delta_d() {
        let mut sys = AdcSystem::default();
        sys.cell1.weight = 0.003;
        let cfg = PerceptronConfig { delta_d: 0.0, max_epochs: 30, ..PerceptronConfig::default() };
        match train_cell2(&sys, &sys.lsb_samples(), &cfg, &p()) {
            Err(CalciumError::TrainingFailure { cell: "cell 2", trace, .. }) => assert_eq!(trace.len(), 30),
            other => panic!("expected training failure, got {other:?}"),
        }
    }

    #[test]
    fn convert_rejects_out_of_range() {
        let sys = AdcSystem::default();
        assert!(matches!(adc_convert(&sys, 9999.0, &p()), Err(CalciumError::Range { .. })));
        assert!(matches!(adc_convert(&sys, 499.0, &p()), Err(CalciumError::Range { .. })));
    }

    #[test]
    fn setup_file_round_trips_and_rejects_unknown_keys() {
        let setup = AdcSetup::parse("b0=0.169255\ntheta=1\nmax_epochs=50\n").unwrap();
        assert_eq!(setup.training.max_epochs, 50);
        assert_eq!(AdcSetup::from_key_values(&setup.to_key_values()).unwrap(), setup);
        assert!(AdcSetup::parse("bogus=1\n").is_err());
        assert!(AdcSetup::parse("sample_interval=400\n").is_err());
    }

    /// Steady state solved independently: S = k_s·C/k_r cancels the store
    /// exchange, leaving pump(C) = J, solved by bisection.
    fn algebraic_steady_state(j: f64, p: &CalciumModelParams) -> f64 {
        let pump = |c: f64| {
            p.pump_max_rate * c.powf(p.pump_hill) / (p.pump_half_saturation.powf(p.pump_hill) + c.powf(p.pump_hill))
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        while pump(hi) < j {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if pump(mid) < j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn simulated_saturation_matches_algebraic_steady_state() {
        for k in 0..20 {
            let j = 0.25 + 9.25 * k as f64 / 19.0;
            let cell = CalciumCellState::resting(0.002, 0.1);
            let x = (j - cell.bias) / cell.weight;
            let c = simulate_to_saturation(&cell, x, &p()).unwrap();
            let oracle = algebraic_steady_state(j, &p());
            assert!((c - oracle).abs() < 1e-3, "J = {j}: simulated {c}, oracle {oracle}");
        }
    }

    #[test]
    fn trained_converter_produces_all_four_codes() {
        let t = train_adc(&AdcSystem::default(), &PerceptronConfig::default(), &p()).unwrap();
        assert!((t.system.cell1.weight - 0.003).abs() < 1e-12);
        assert!((t.system.cell2.weight - 0.004).abs() < 1e-12);
        assert!((t.system.d0 - 0.35).abs() < 1e-9);
        let codes: Vec<String> =
            t.system.interval_midpoints().iter().map(|&x| adc_convert(&t.system, x, &p()).unwrap().code()).collect();
        assert_eq!(codes, ["00", "01", "10", "11"]);
        assert_eq!(adc_sweep(&t.system, 100.0, &p()).unwrap().len(), 21);
    }

    proptest! {
        #[test]
        fn concentrations_stay_non_negative(
            c in 0.0f64..20.0, s in 0.0f64..20.0, a in 0.0f64..=1.0,
            w in 0.0f64..0.01, b in 0.0f64..1.0, x in 0.0f64..3000.0,
        ) {
            let mut cell = CalciumCellState { c, s, activity: a, weight: w, bias: b };
            for _ in 0..50 {
                cell = step_transient(&cell, x, &p()).unwrap();
                prop_assert!(cell.c >= 0.0 && cell.s >= 0.0);
            }
        }
    }
}
