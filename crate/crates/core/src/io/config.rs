//! Experiment configuration files (TOML).
//!
//! ```toml
//! schema_version = 1
//! mode = "single"            # or "two_photon"
//!
//! [walk]
//! n_steps = 4
//! delta = "pi"               # number, "pi/2"-style string, per-step list, or range
//! include_hwp = true         # or one flag per step
//! coin = "balanced"          # "L", "R", "H", "V", "balanced" or { l = [re, im], r = [re, im] }
//! ```

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::coin::{CoinState, Polarization};
use crate::error::{Error, Result};
use crate::two_photon::{Label, Model, OutputBasis};
use crate::walk::{Coherence, WalkConfig, WalkOptions};

pub const SCHEMA_VERSION: u32 = 1;

/// A real number written either as a literal or as a multiple of π
/// (`"pi"`, `"pi/2"`, `"3pi/4"`, `"0.25*pi"`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Real(pub f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Real(x)),
            Raw::Int(x) => Ok(Real(x as f64)),
            Raw::Text(s) => parse_pi_expr(&s).map(Real).map_err(serde::de::Error::custom),
        }
    }
}

fn parse_pi_expr(s: &str) -> std::result::Result<f64, String> {
    let bad = || format!("cannot read {s:?} as a number or a multiple of pi");
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let coef = num
        .strip_suffix("pi")
        .or_else(|| num.strip_suffix('π'))
        .ok_or_else(bad)?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / den)
}

/// Grid for a swept parameter: explicit `values`, or `num` points from
/// `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec<T> {
    pub values: Option<Vec<T>>,
    pub start: Option<T>,
    pub stop: Option<T>,
    pub num: Option<usize>,
}

impl RangeSpec<Real> {
    fn points(&self) -> Result<Vec<f64>> {
        match (self, &self.values) {
            (_, Some(v)) if self.start.is_none() && self.stop.is_none() && self.num.is_none() => {
                Ok(v.iter().map(|r| r.0).collect())
            }
            (
                RangeSpec {
                    values: None,
                    start: Some(a),
                    stop: Some(b),
                    num: Some(n),
                },
                _,
            ) => match n {
                0 => Err(Error::Config("a range needs at least one point".into())),
                1 => Ok(vec![a.0]),
                _ => Ok((0..*n)
                    .map(|i| a.0 + (b.0 - a.0) * i as f64 / (*n - 1) as f64)
                    .collect()),
            },
            _ => Err(Error::Config(
                "a range is either { values = [...] } or { start, stop, num }".into(),
            )),
        }
    }
}

impl RangeSpec<usize> {
    fn points(&self) -> Result<Vec<usize>> {
        match self {
            RangeSpec {
                values: Some(v),
                start: None,
                stop: None,
                num: None,
            } => Ok(v.clone()),
            RangeSpec {
                values: None,
                start: Some(a),
                stop: Some(b),
                num: None,
            } if a <= b => Ok((*a..=*b).collect()),
            _ => Err(Error::Config(
                "an integer range is either { values = [...] } or { start, stop } with start ≤ stop"
                    .into(),
            )),
        }
    }
}

/// A scalar or a swept scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweepable<T> {
    Fixed(T),
    Range(RangeSpec<T>),
}

/// δ per step: one value for all steps, a list, or a swept common value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaSpec {
    Fixed(Real),
    PerStep(Vec<Real>),
    Range(RangeSpec<Real>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HwpSpec {
    All(bool),
    PerStep(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinAmplitudes {
    pub l: [f64; 2],
    pub r: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinSpec {
    Named(String),
    Amplitudes(CoinAmplitudes),
}

impl CoinSpec {
    fn resolve(&self) -> Result<CoinState> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CoinSpec::Named(name) => match name.trim() {
                "balanced" => Ok(CoinState::balanced()),
                "L" | "l" => Ok(CoinState::L),
                "R" | "r" => Ok(CoinState::R),
                "H" | "h" => CoinState::normalized(C64::new(h, 0.0), C64::new(h, 0.0)),
                "V" | "v" => CoinState::normalized(C64::new(0.0, -h), C64::new(0.0, h)),
                other => Err(Error::Config(format!("unknown coin state {other:?}"))),
            },
            CoinSpec::Amplitudes(a) => CoinState::normalized(
                C64::new(a.l[0], a.l[1]),
                C64::new(a.r[0], a.r[1]),
            )
            .map_err(|e| Error::Config(e.to_string())),
        }
    }
}

fn default_q() -> f64 {
    0.5
}

fn default_coin() -> CoinSpec {
    CoinSpec::Named("balanced".into())
}

fn default_hwp() -> HwpSpec {
    HwpSpec::All(true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSection {
    pub n_steps: Sweepable<usize>,
    pub delta: DeltaSpec,
    #[serde(default = "default_hwp")]
    pub include_hwp: HwpSpec,
    #[serde(default = "default_coin")]
    pub coin: CoinSpec,
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default = "zero_real")]
    pub alpha0: Sweepable<Real>,
}

fn zero_real() -> Sweepable<Real> {
    Sweepable::Fixed(Real(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Single,
    TwoPhoton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputLabel {
    pub pol: Polarization,
    #[serde(default)]
    pub m: i64,
}

fn default_inputs() -> [InputLabel; 2] {
    [
        InputLabel {
            pol: Polarization::L,
            m: 0,
        },
        InputLabel {
            pol: Polarization::R,
            m: 0,
        },
    ]
}

fn default_models() -> Vec<Model> {
    vec![Model::Bosonic, Model::Distinguishable]
}

fn default_basis() -> OutputBasis {
    OutputBasis::Linear
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoPhotonSection {
    #[serde(default = "default_inputs")]
    pub inputs: [InputLabel; 2],
    #[serde(default = "default_basis")]
    pub basis: OutputBasis,
    #[serde(default = "default_models")]
    pub models: Vec<Model>,
}

impl Default for TwoPhotonSection {
    fn default() -> Self {
        TwoPhotonSection {
            inputs: default_inputs(),
            basis: default_basis(),
            models: default_models(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Imperfections {
    #[serde(default = "zero_real")]
    pub gouy_d_over_zr: Sweepable<Real>,
    #[serde(default)]
    pub radial_damping: bool,
    /// Erase OAM coherences after each step (classical reference walk).
    #[serde(default)]
    pub dephased: bool,
}

impl Default for Imperfections {
    fn default() -> Self {
        Imperfections {
            gouy_d_over_zr: zero_real(),
            radial_damping: false,
            dephased: false,
        }
    }
}

fn one_real() -> Sweepable<Real> {
    Sweepable::Fixed(Real(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detection {
    /// Also emit the detector-biased distribution and its correction.
    #[serde(default)]
    pub correct_bias: bool,
    #[serde(default = "one_real")]
    pub sigma_over_w0: Sweepable<Real>,
}

impl Default for Detection {
    fn default() -> Self {
        Detection {
            correct_bias: false,
            sigma_over_w0: one_real(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub mode: Mode,
    pub walk: WalkSection,
    #[serde(default)]
    pub two_photon: TwoPhotonSection,
    #[serde(default)]
    pub imperfections: Imperfections,
    #[serde(default)]
    pub detection: Detection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Name of the swept parameter, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    NSteps,
    Delta,
    Alpha0,
    GouyDOverZr,
    SigmaOverW0,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::NSteps => "n_steps",
            SweepParam::Delta => "delta",
            SweepParam::Alpha0 => "alpha0",
            SweepParam::GouyDOverZr => "gouy_d_over_zr",
            SweepParam::SigmaOverW0 => "sigma_over_w0",
        }
    }
}

/// One fully resolved grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub mode: Mode,
    pub walk: WalkConfig,
    pub options: WalkOptions,
    pub inputs: [Label; 2],
    pub basis: OutputBasis,
    pub models: Vec<Model>,
    pub correct_bias: bool,
    pub sigma_over_w0: f64,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    fn ranged(&self) -> Vec<SweepParam> {
        let mut out = Vec::new();
        if matches!(self.walk.n_steps, Sweepable::Range(_)) {
            out.push(SweepParam::NSteps);
        }
        if matches!(self.walk.delta, DeltaSpec::Range(_)) {
            out.push(SweepParam::Delta);
        }
        if matches!(self.walk.alpha0, Sweepable::Range(_)) {
            out.push(SweepParam::Alpha0);
        }
        if matches!(self.imperfections.gouy_d_over_zr, Sweepable::Range(_)) {
            out.push(SweepParam::GouyDOverZr);
        }
        if matches!(self.detection.sigma_over_w0, Sweepable::Range(_)) {
            out.push(SweepParam::SigmaOverW0);
        }
        out
    }

    /// The swept parameter and its grid; `None` for a plain run.
    pub fn sweep_grid(&self) -> Result<Option<(SweepParam, Vec<f64>)>> {
        let ranged = self.ranged();
        match ranged.as_slice() {
            [] => Ok(None),
            [param] => {
                let grid = match param {
                    SweepParam::NSteps => match &self.walk.n_steps {
                        Sweepable::Range(r) => r.points()?.into_iter().map(|n| n as f64).collect(),
                        Sweepable::Fixed(_) => unreachable!(),
                    },
                    SweepParam::Delta => match &self.walk.delta {
                        DeltaSpec::Range(r) => r.points()?,
                        _ => unreachable!(),
                    },
                    SweepParam::Alpha0 => real_range(&self.walk.alpha0)?,
                    SweepParam::GouyDOverZr => real_range(&self.imperfections.gouy_d_over_zr)?,
                    SweepParam::SigmaOverW0 => real_range(&self.detection.sigma_over_w0)?,
                };
                if grid.is_empty() {
                    return Err(Error::Config("the swept range is empty".into()));
                }
                Ok(Some((*param, grid)))
            }
            many => Err(Error::Config(format!(
                "only one parameter may carry a range, found {}",
                many.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// Resolves a plain (non-swept) configuration.
    pub fn resolve(&self) -> Result<Resolved> {
        if let Some((param, _)) = self.sweep_grid()? {
            return Err(Error::Config(format!(
                "{} carries a range; use the sweep command",
                param.name()
            )));
        }
        self.resolve_at(None)
    }

    /// Resolves with the swept parameter (if any) set to `value`.
    pub fn resolve_at(&self, point: Option<(SweepParam, f64)>) -> Result<Resolved> {
        let pick = |param: SweepParam, fixed: &Sweepable<Real>| -> Result<f64> {
            match (fixed, point) {
                (Sweepable::Fixed(r), _) => Ok(r.0),
                (Sweepable::Range(_), Some((p, v))) if p == param => Ok(v),
                (Sweepable::Range(_), _) => Err(Error::Config(format!(
                    "{} carries a range; use the sweep command",
                    param.name()
                ))),
            }
        };
        let n_steps = match (&self.walk.n_steps, point) {
            (Sweepable::Fixed(n), _) => *n,
            (Sweepable::Range(_), Some((SweepParam::NSteps, v))) => v as usize,
            (Sweepable::Range(_), _) => {
                return Err(Error::Config("n_steps carries a range; use the sweep command".into()))
            }
        };
        let delta_schedule = match (&self.walk.delta, point) {
            (DeltaSpec::Fixed(d), _) => vec![d.0; n_steps],
            (DeltaSpec::PerStep(v), _) => v.iter().map(|d| d.0).collect(),
            (DeltaSpec::Range(_), Some((SweepParam::Delta, v))) => vec![v; n_steps],
            (DeltaSpec::Range(_), _) => {
                return Err(Error::Config("delta carries a range; use the sweep command".into()))
            }
        };
        let include_hwp = match &self.walk.include_hwp {
            HwpSpec::All(b) => vec![*b; n_steps],
            HwpSpec::PerStep(v) => v.clone(),
        };
        let walk = WalkConfig {
            n_steps,
            delta_schedule,
            include_hwp,
            coin_init: self.walk.coin.resolve()?,
            q: self.walk.q,
            alpha0: pick(SweepParam::Alpha0, &self.walk.alpha0)?,
        };
        walk.validate().map_err(|e| Error::Config(e.to_string()))?;
        let options = WalkOptions {
            coherence: if self.imperfections.dephased {
                Coherence::Dephased
            } else {
                Coherence::Coherent
            },
            gouy_d_over_zr: pick(SweepParam::GouyDOverZr, &self.imperfections.gouy_d_over_zr)?,
            radial_damping: self.imperfections.radial_damping,
        };
        let sigma_over_w0 = pick(SweepParam::SigmaOverW0, &self.detection.sigma_over_w0)?;
        if !(sigma_over_w0 > 0.0) {
            return Err(Error::Config("sigma_over_w0 must be positive".into()));
        }
        if !(options.gouy_d_over_zr >= 0.0) {
            return Err(Error::Config("gouy_d_over_zr must be non-negative".into()));
        }
        if self.mode == Mode::TwoPhoton {
            if self.two_photon.models.is_empty() {
                return Err(Error::Config("two_photon.models is empty".into()));
            }
            if options.coherence == Coherence::Dephased {
                return Err(Error::Config("the dephased walk is single-photon only".into()));
            }
        }
        if options.coherence == Coherence::Dephased && options.radial_damping {
            return Err(Error::Config(
                "radial damping is only modelled for coherent walks".into(),
            ));
        }
        let [a, b] = &self.two_photon.inputs;
        let inputs = [Label::new(a.pol, a.m), Label::new(b.pol, b.m)];
        if inputs[0] == inputs[1] {
            return Err(Error::Config("the two photon inputs must differ".into()));
        }
        Ok(Resolved {
            mode: self.mode,
            walk,
            options,
            inputs,
            basis: self.two_photon.basis,
            models: self.two_photon.models.clone(),
            correct_bias: self.detection.correct_bias,
            sigma_over_w0,
        })
    }
}

fn real_range(s: &Sweepable<Real>) -> Result<Vec<f64>> {
    match s {
        Sweepable::Range(r) => r.points(),
        Sweepable::Fixed(v) => Ok(vec![v.0]),
    }
}
