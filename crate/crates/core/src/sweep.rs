//! Parameter sweeps over one or two axes and the figure presets.
//!
//! Grid points are evaluated independently (in parallel through rayon) and
//! collected in grid order, outer axis major, so a table does not depend on
//! the thread count. A point whose propagation fails gets `NaN` for the
//! propagation observables and `failed = 1`.
//!
//! # Table format
//!
//! ```text
//! # format=lz3-sweep
//! # version=0.1.0
//! # name=fig2a
//! # kind=curves
//! # axis0=omega12:list:1,0.5,0.1,0
//! # axis1=delta:linear:-5:5:201
//! # observables=p3_final
//! # tol=0.00000001
//! # scan_points=4001
//! # refine_tol=0.00000001
//! # kappa=0.1
//! # ... remaining SystemParams fields ...
//! omega12,delta,p3_final,failed
//! 1,-5,0.9996...,0
//! ```
//!
//! Numbers use the shortest representation that parses back to the same
//! `f64`. The metadata lines, stripped of `# `, form a sweep configuration
//! that reproduces the table.

use rayon::prelude::*;

use crate::config::{self, Entry, PARAM_KEYS};
use crate::error::ConfigError;
use crate::ica::ica_predict;
use crate::model::SystemParams;
use crate::propagate::{propagate_nonhermitian_with, SolverOptions, StateVector};
use crate::spectrum::{min_gap_with, GapOptions};

pub const FORMAT: &str = "lz3-sweep";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance used by the figure presets.
pub const PRESET_TOL: f64 = 1e-8;

pub const FIGURE_PRESETS: [&str; 13] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig5a", "fig5b",
    "fig5c",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisParam {
    Delta,
    Omega12,
    Omega13,
    Gamma2,
}

impl AxisParam {
    pub const ALL: [AxisParam; 4] = [AxisParam::Delta, AxisParam::Omega12, AxisParam::Omega13, AxisParam::Gamma2];

    pub fn name(self) -> &'static str {
        match self {
            AxisParam::Delta => "delta",
            AxisParam::Omega12 => "omega12",
            AxisParam::Omega13 => "omega13",
            AxisParam::Gamma2 => "gamma2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == s)
    }

    pub fn apply(self, p: &mut SystemParams, value: f64) {
        match self {
            AxisParam::Delta => p.delta = value,
            AxisParam::Omega12 => p.omega12 = value,
            AxisParam::Omega13 => p.omega13 = value,
            AxisParam::Gamma2 => p.gamma2 = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    Linear,
    Log10,
}

impl Scale {
    pub fn name(self) -> &'static str {
        match self {
            Scale::Linear => "linear",
            Scale::Log10 => "log10",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxisValues {
    /// `count` points from `min` to `max` inclusive, uniform in the value or
    /// in its base-10 logarithm.
    Range { min: f64, max: f64, count: usize, scale: Scale },
    /// Explicit values in the given order.
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub values: AxisValues,
}

impl Axis {
    pub fn linear(param: AxisParam, min: f64, max: f64, count: usize) -> Self {
        Self { param, values: AxisValues::Range { min, max, count, scale: Scale::Linear } }
    }

    pub fn log10(param: AxisParam, min: f64, max: f64, count: usize) -> Self {
        Self { param, values: AxisValues::Range { min, max, count, scale: Scale::Log10 } }
    }

    pub fn list(param: AxisParam, values: Vec<f64>) -> Self {
        Self { param, values: AxisValues::List(values) }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            AxisValues::Range { count, .. } => *count,
            AxisValues::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid values; range end points are reproduced exactly.
    pub fn points(&self) -> Vec<f64> {
        match &self.values {
            AxisValues::List(v) => v.clone(),
            AxisValues::Range { min, max, count, scale } => {
                let n = *count;
                let interp = |a: f64, b: f64, i: usize| {
                    if i == 0 {
                        a
                    } else if i == n - 1 {
                        b
                    } else {
                        a + (b - a) * i as f64 / (n - 1) as f64
                    }
                };
                (0..n)
                    .map(|i| match scale {
                        Scale::Linear => interp(*min, *max, i),
                        Scale::Log10 if i == 0 => *min,
                        Scale::Log10 if i == n - 1 => *max,
                        Scale::Log10 => 10f64.powf(interp(min.log10(), max.log10(), i)),
                    })
                    .collect()
            }
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let name = self.param.name();
        match &self.values {
            AxisValues::Range { min, max, count, scale } => {
                if *count < 2 {
                    return Err(ConfigError::Sweep(format!("axis {name}: at least 2 points are needed")));
                }
                if !min.is_finite() || !max.is_finite() {
                    return Err(ConfigError::Sweep(format!("axis {name}: bounds must be finite")));
                }
                if *scale == Scale::Log10 && !(*min > 0.0 && *max > 0.0) {
                    return Err(ConfigError::Sweep(format!("axis {name}: log10 scale needs positive bounds")));
                }
            }
            AxisValues::List(v) => {
                if v.len() < 2 {
                    return Err(ConfigError::Sweep(format!("axis {name}: at least 2 points are needed")));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(ConfigError::Sweep(format!("axis {name}: values must be finite")));
                }
            }
        }
        Ok(())
    }

    /// `param:linear:min:max:count`, `param:log10:min:max:count` or
    /// `param:list:v1,v2,...`.
    pub fn encode(&self) -> String {
        match &self.values {
            AxisValues::Range { min, max, count, scale } => {
                format!("{}:{}:{}:{}:{}", self.param.name(), scale.name(), min, max, count)
            }
            AxisValues::List(v) => {
                let vals: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("{}:list:{}", self.param.name(), vals.join(","))
            }
        }
    }

    pub fn decode(key: &str, text: &str) -> Result<Self, ConfigError> {
        let bad = |reason: &str| ConfigError::Value { key: key.into(), value: text.into(), reason: reason.into() };
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let param = parts
            .first()
            .and_then(|p| AxisParam::parse(p))
            .ok_or_else(|| bad("axis parameter must be one of delta, omega12, omega13, gamma2"))?;
        let axis = match parts.get(1).copied() {
            Some("list") if parts.len() == 3 => {
                let values = parts[2]
                    .split(',')
                    .map(|v| config::parse_f64(key, v.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                Axis::list(param, values)
            }
            Some(s @ ("linear" | "log10")) if parts.len() == 5 => {
                let scale = if s == "linear" { Scale::Linear } else { Scale::Log10 };
                Axis {
                    param,
                    values: AxisValues::Range {
                        min: config::parse_f64(key, parts[2])?,
                        max: config::parse_f64(key, parts[3])?,
                        count: config::parse_usize(key, parts[4])?,
                        scale,
                    },
                }
            }
            _ => return Err(bad("expected param:linear|log10:min:max:count or param:list:v1,v2,...")),
        };
        Ok(axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    /// Final population of `|3⟩` from `|1⟩` (non-Hermitian propagation).
    P3Final,
    /// Minimum top gap `G`.
    MinGap,
    /// `G / √κ`.
    Margin,
    /// Independent-crossing prediction of `P₃`.
    IcaP3,
    /// `1 − Σ|c_k|²` at `+T`.
    NormLoss,
}

impl Observable {
    pub const ALL: [Observable; 5] =
        [Observable::P3Final, Observable::MinGap, Observable::Margin, Observable::IcaP3, Observable::NormLoss];

    pub fn name(self) -> &'static str {
        match self {
            Observable::P3Final => "p3_final",
            Observable::MinGap => "min_gap",
            Observable::Margin => "margin",
            Observable::IcaP3 => "ica_p3",
            Observable::NormLoss => "norm_loss",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == s)
    }

    fn needs_propagation(self) -> bool {
        matches!(self, Observable::P3Final | Observable::NormLoss)
    }
}

/// Table layout, derived from the axes: two ranges give a heatmap, anything
/// else a set of curves (one per value of the outer axis when there are
/// two axes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Curves,
    Heatmap,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Curves => "curves",
            Kind::Heatmap => "heatmap",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    /// One or two axes, outer first.
    pub axes: Vec<Axis>,
    pub base: SystemParams,
    pub observables: Vec<Observable>,
    pub tol: f64,
    pub gap: GapOptions,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(ConfigError::Sweep(format!("expected 1 or 2 axes, got {}", self.axes.len())));
        }
        for a in &self.axes {
            a.validate()?;
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(ConfigError::Sweep(format!("axis {} given twice", self.axes[0].param.name())));
        }
        if self.observables.is_empty() {
            return Err(ConfigError::Sweep("no observables".into()));
        }
        for (i, o) in self.observables.iter().enumerate() {
            if self.observables[..i].contains(o) {
                return Err(ConfigError::Sweep(format!("observable {} given twice", o.name())));
            }
        }
        if !(1e-12..=1e-4).contains(&self.tol) {
            return Err(ConfigError::Sweep(format!("tolerance {:e} outside [1e-12, 1e-4]", self.tol)));
        }
        if self.gap.scan_points < 3 || !(self.gap.refine_tol > 0.0) {
            return Err(ConfigError::Sweep("gap scan needs at least 3 points and a positive refine_tol".into()));
        }
        if self.name.contains(['\n', '#']) {
            return Err(ConfigError::Sweep("name may not contain newlines or '#'".into()));
        }
        self.base.validated()?;
        for a in &self.axes {
            for v in a.points() {
                let mut p = self.base;
                a.param.apply(&mut p, v);
                p.validated()?;
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> Kind {
        let ranges = self.axes.iter().all(|a| matches!(a.values, AxisValues::Range { .. }));
        if self.axes.len() == 2 && ranges {
            Kind::Heatmap
        } else {
            Kind::Curves
        }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn headers(&self) -> Vec<String> {
        let mut h: Vec<String> = self.axes.iter().map(|a| a.param.name().to_string()).collect();
        h.extend(self.observables.iter().map(|o| o.name().to_string()));
        h.push("failed".into());
        h
    }

    /// Grid points in row order: axis values and the parameters at that
    /// point.
    pub fn grid(&self) -> Vec<(Vec<f64>, SystemParams)> {
        let axis_points: Vec<Vec<f64>> = self.axes.iter().map(Axis::points).collect();
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; self.axes.len()];
        loop {
            let mut p = self.base;
            let values: Vec<f64> = idx.iter().zip(&axis_points).map(|(&i, pts)| pts[i]).collect();
            for (a, &v) in self.axes.iter().zip(&values) {
                a.param.apply(&mut p, v);
            }
            out.push((values, p));
            // Odometer increment, innermost axis fastest.
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < axis_points[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Metadata entries, in the order they are written.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("format".to_string(), FORMAT.to_string()),
            ("version".to_string(), VERSION.to_string()),
            ("name".to_string(), self.name.clone()),
            ("kind".to_string(), self.kind().name().to_string()),
        ];
        for (i, a) in self.axes.iter().enumerate() {
            m.push((format!("axis{i}"), a.encode()));
        }
        let obs: Vec<&str> = self.observables.iter().map(|o| o.name()).collect();
        m.push(("observables".into(), obs.join(",")));
        m.push(("tol".into(), self.tol.to_string()));
        m.push(("scan_points".into(), self.gap.scan_points.to_string()));
        m.push(("refine_tol".into(), self.gap.refine_tol.to_string()));
        for key in PARAM_KEYS {
            let v = config::param_value(&self.base, key).expect("canonical key");
            m.push((key.to_string(), v.to_string()));
        }
        m
    }

    /// Builds a spec from configuration entries (or table metadata).
    ///
    /// Required: `axis0` and `observables`. Optional: `axis1`, `name`,
    /// `tol` (default `1e-10`), `scan_points`, `refine_tol` and every
    /// parameter key with the run-configuration defaults. `format`, `version`
    /// and `kind` are accepted and checked for consistency.
    pub fn from_entries(entries: &[Entry]) -> Result<Self, ConfigError> {
        let base = config::params_from_entries(entries)?;
        let mut spec = SweepSpec {
            name: String::new(),
            axes: Vec::new(),
            base,
            observables: Vec::new(),
            tol: config::DEFAULT_TOL,
            gap: GapOptions::default(),
        };
        let (mut axis0, mut axis1, mut observables, mut kind) = (None, None, None, None);
        for e in entries {
            let (key, value) = (e.key.as_str(), e.value.as_str());
            match key {
                k if PARAM_KEYS.contains(&k) => {}
                "format" if value == FORMAT => {}
                "format" => {
                    return Err(ConfigError::Value {
                        key: key.into(),
                        value: value.into(),
                        reason: format!("expected {FORMAT}"),
                    })
                }
                "version" => {}
                "kind" => kind = Some(value.to_string()),
                "name" => spec.name = value.to_string(),
                "axis0" => axis0 = Some(Axis::decode(key, value)?),
                "axis1" => axis1 = Some(Axis::decode(key, value)?),
                "observables" => observables = Some(value.to_string()),
                "tol" => spec.tol = config::parse_tol(key, value)?,
                "scan_points" => spec.gap.scan_points = config::parse_usize(key, value)?,
                "refine_tol" => spec.gap.refine_tol = config::parse_f64(key, value)?,
                other => return Err(ConfigError::UnknownKey(other.to_string())),
            }
        }
        spec.axes.push(axis0.ok_or_else(|| ConfigError::Missing("axis0".into()))?);
        spec.axes.extend(axis1);
        let observables = observables.ok_or_else(|| ConfigError::Missing("observables".into()))?;
        for name in observables.split(',').map(str::trim) {
            let o = Observable::parse(name).ok_or_else(|| ConfigError::Value {
                key: "observables".into(),
                value: name.into(),
                reason: "expected p3_final, min_gap, margin, ica_p3 or norm_loss".into(),
            })?;
            spec.observables.push(o);
        }
        spec.validate()?;
        if let Some(kind) = kind {
            if kind != spec.kind().name() {
                return Err(ConfigError::Value {
                    key: "kind".into(),
                    value: kind,
                    reason: format!("axes describe a {} table", spec.kind().name()),
                });
            }
        }
        Ok(spec)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_entries(&config::parse_entries(text)?)
    }
}

/// Result of a sweep: one row per grid point, columns as in `headers`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub metadata: Vec<(String, String)>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self, ConfigError> {
        let mut metadata = Vec::new();
        let mut lines = text.lines().enumerate();
        let headers = loop {
            let Some((i, line)) = lines.next() else {
                return Err(ConfigError::Sweep("table has no header row".into()));
            };
            if let Some(meta) = line.strip_prefix('#') {
                let (k, v) = meta
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| ConfigError::Syntax { line: i + 1, text: line.to_string() })?;
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            } else {
                break line.split(',').map(|h| h.trim().to_string()).collect::<Vec<_>>();
            }
        };
        let mut rows = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| ConfigError::Syntax { line: i + 1, text: line.to_string() })?;
            if row.len() != headers.len() {
                return Err(ConfigError::Syntax { line: i + 1, text: line.to_string() });
            }
            rows.push(row);
        }
        Ok(Self { metadata, headers, rows })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// The spec that produced this table, rebuilt from its metadata.
    pub fn spec(&self) -> Result<SweepSpec, ConfigError> {
        let entries: Vec<Entry> = self
            .metadata
            .iter()
            .enumerate()
            .map(|(i, (k, v))| Entry { line: i + 1, key: k.clone(), value: v.clone() })
            .collect();
        SweepSpec::from_entries(&entries)
    }
}

/// Observable values at one grid point and whether propagation failed.
pub fn evaluate_point(spec: &SweepSpec, params: &SystemParams) -> (Vec<f64>, bool) {
    evaluate_with_budget(spec, params, SolverOptions::default().max_steps)
}

fn evaluate_with_budget(spec: &SweepSpec, params: &SystemParams, max_steps: usize) -> (Vec<f64>, bool) {
    let mut failed = false;
    let propagated = if spec.observables.iter().any(|o| o.needs_propagation()) {
        let opts = SolverOptions { tol: spec.tol, samples: 2, max_steps };
        match propagate_nonhermitian_with(params, &StateVector::basis(1), &opts) {
            Ok(r) => Some(r.final_state),
            Err(_) => {
                failed = true;
                None
            }
        }
    } else {
        None
    };
    let gap = spec
        .observables
        .iter()
        .any(|o| matches!(o, Observable::MinGap | Observable::Margin))
        .then(|| min_gap_with(params, &spec.gap));
    let values = spec
        .observables
        .iter()
        .map(|o| match o {
            Observable::P3Final => propagated.map_or(f64::NAN, |s| s.populations()[2].clamp(0.0, 1.0)),
            Observable::NormLoss => propagated.map_or(f64::NAN, |s| 1.0 - s.norm_sqr()),
            Observable::MinGap => gap.map_or(f64::NAN, |g| g.gap),
            Observable::Margin => gap.map_or(f64::NAN, |g| g.margin),
            Observable::IcaP3 => ica_predict(params).map_or(f64::NAN, |p| p.p3),
        })
        .collect();
    (values, failed)
}

/// Runs the sweep on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, ConfigError> {
    run_with_budget(spec, SolverOptions::default().max_steps)
}

fn run_with_budget(spec: &SweepSpec, max_steps: usize) -> Result<SweepTable, ConfigError> {
    spec.validate()?;
    let rows = spec
        .grid()
        .into_par_iter()
        .map(|(axis_values, params)| {
            let (values, failed) = evaluate_with_budget(spec, &params, max_steps);
            let mut row = axis_values;
            row.extend(values);
            row.push(if failed { 1.0 } else { 0.0 });
            row
        })
        .collect();
    Ok(SweepTable { metadata: spec.metadata(), headers: spec.headers(), rows })
}

/// Runs the sweep on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepTable, ConfigError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| ConfigError::Sweep(e.to_string()))?;
    pool.install(|| run_sweep(spec))
}

fn preset_base(kappa: f64) -> SystemParams {
    SystemParams { kappa, horizon: config::DEFAULT_KAPPA_T / kappa, ..SystemParams::default() }
}

/// Sweep spec of a figure preset.
///
/// All presets use `Ω₂₃ = 1`, `κT = 100` and, unless swept, `Ω₁₂ = 1`.
///
/// | preset | axes (outer, inner) | fixed | observable |
/// |---|---|---|---|
/// | fig2a/b | Ω₁₂ ∈ {1, 0.5, 0.1, 0}, Δ ∈ [−5, 5] × 201 | κ = 0.1, Ω₁₃ = 0 | p3_final / min_gap |
/// | fig2c/d | same | κ = 0.1, Ω₁₃ = 0.5 | p3_final / min_gap |
/// | fig3a | Ω₁₃ ∈ [0, 1] × 101, Δ ∈ [−3, 3] × 101 | κ = 0.1 | p3_final |
/// | fig3b | same | κ = 1 | p3_final |
/// | fig3c | same | κ = 0.1 | min_gap |
/// | fig4a/b/c | same | κ = 0.1, Γ₂ = 0.001 / 0.005 / 0.025 | p3_final |
/// | fig5a/b/c | Δ ∈ [−3, 3] × 101, Γ₂ ∈ [1e−4, 1] log × 101 | κ = 0.1, Ω₁₃ = 0 / 0.2 / 0.5 | p3_final |
pub fn figure_preset(name: &str) -> Result<SweepSpec, ConfigError> {
    use AxisParam::*;
    use Observable::*;

    let fig2 = |omega13: f64, obs: Observable| {
        (
            vec![Axis::list(Omega12, vec![1.0, 0.5, 0.1, 0.0]), Axis::linear(Delta, -5.0, 5.0, 201)],
            SystemParams { omega13, ..preset_base(0.1) },
            obs,
        )
    };
    let map = || vec![Axis::linear(Omega13, 0.0, 1.0, 101), Axis::linear(Delta, -3.0, 3.0, 101)];
    let fig4 = |gamma2: f64| (map(), SystemParams { gamma2, ..preset_base(0.1) }, P3Final);
    let fig5 = |omega13: f64| {
        (
            vec![Axis::linear(Delta, -3.0, 3.0, 101), Axis::log10(Gamma2, 1e-4, 1.0, 101)],
            SystemParams { omega13, ..preset_base(0.1) },
            P3Final,
        )
    };

    let (axes, base, observable) = match name {
        "fig2a" => fig2(0.0, P3Final),
        "fig2b" => fig2(0.0, MinGap),
        "fig2c" => fig2(0.5, P3Final),
        "fig2d" => fig2(0.5, MinGap),
        "fig3a" => (map(), preset_base(0.1), P3Final),
        "fig3b" => (map(), preset_base(1.0), P3Final),
        "fig3c" => (map(), preset_base(0.1), MinGap),
        "fig4a" => fig4(0.001),
        "fig4b" => fig4(0.005),
        "fig4c" => fig4(0.025),
        "fig5a" => fig5(0.0),
        "fig5b" => fig5(0.2),
        "fig5c" => fig5(0.5),
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(SweepSpec {
        name: name.to_string(),
        axes,
        base,
        observables: vec![observable],
        tol: PRESET_TOL,
        gap: GapOptions::default(),
    })
}
