//! Run configuration. One JSON document; command-line flags override keys.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ident::Scenario;
use crate::noise::NoiseModelDoc;
use crate::qubit::{ChargeQubitParams, InitialState, QubitDoc};
use crate::sim::Scheme;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Identify,
    GoldenRule,
    Validate,
}

/// Integrator settings; every field is optional and derived when absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    /// Internal step; must divide the acquisition step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_ps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_cut_ps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Acquisition {
    #[serde(default = "default_dt")]
    pub dt_ps: f64,
    #[serde(default = "default_horizon")]
    pub horizon_ps: f64,
    /// Additive Gaussian readout noise; ignored when `shots_per_point` is set.
    #[serde(default = "default_stddev")]
    pub noise_stddev: f64,
    /// Binomial readout with this many single-shot measurements per sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots_per_point: Option<u64>,
    #[serde(default = "default_initial")]
    pub initial_state: InitialState,
}

fn default_dt() -> f64 {
    9.0
}

fn default_horizon() -> f64 {
    2900.0
}

fn default_stddev() -> f64 {
    0.02
}

fn default_initial() -> InitialState {
    InitialState::ZeroCharge
}

impl Default for Acquisition {
    fn default() -> Self {
        Self {
            dt_ps: default_dt(),
            horizon_ps: default_horizon(),
            noise_stddev: default_stddev(),
            shots_per_point: None,
            initial_state: default_initial(),
        }
    }
}

impl Acquisition {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_ps > 0.0 && self.dt_ps.is_finite()) {
            return Err(Error::invalid(format!(
                "acquisition.dt_ps must be positive, got {}",
                self.dt_ps
            )));
        }
        if !(self.horizon_ps >= 16.0 * self.dt_ps && self.horizon_ps.is_finite()) {
            return Err(Error::invalid(
                "acquisition.horizon_ps must cover at least 16 samples",
            ));
        }
        if !(self.noise_stddev >= 0.0 && self.noise_stddev.is_finite()) {
            return Err(Error::invalid(format!(
                "acquisition.noise_stddev must be >= 0, got {}",
                self.noise_stddev
            )));
        }
        if self.shots_per_point == Some(0) {
            return Err(Error::invalid("acquisition.shots_per_point must be >= 1"));
        }
        Ok(())
    }

    pub fn scenario(&self) -> Scenario {
        match self.initial_state {
            InitialState::ZeroCharge => Scenario::CoherentOscillation,
            InitialState::Excited => Scenario::RelaxationDown,
            InitialState::Ground => Scenario::RelaxationUp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Eq19,
    Eq20,
    Eq21,
    AcExact,
    Relaxation,
    GoldenRule,
}

impl MethodName {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::invalid(format!("unknown method '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detrend {
    /// Subtract the long-time level 1/2 of a coherent run.
    Theory,
    /// Subtract the record mean.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentifySection {
    #[serde(default = "default_method")]
    pub method: MethodName,
    /// Skips detection when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_ghz: Option<f64>,
    /// Real part of the transform variable in units of `1/T`.
    #[serde(default)]
    pub damping_per_t: f64,
    #[serde(default = "default_detrend")]
    pub detrend: Detrend,
    #[serde(default = "default_mask")]
    pub mask: f64,
}

fn default_method() -> MethodName {
    MethodName::Eq19
}

fn default_detrend() -> Detrend {
    Detrend::Theory
}

fn default_mask() -> f64 {
    crate::ident::DEFAULT_MASK
}

impl Default for IdentifySection {
    fn default() -> Self {
        Self {
            method: default_method(),
            delta_ghz: None,
            damping_per_t: 0.0,
            detrend: default_detrend(),
            mask: default_mask(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRuleSection {
    /// Bias angles in radians, each in `(0, pi)`.
    #[serde(default = "default_thetas")]
    pub thetas: Vec<f64>,
}

fn default_thetas() -> Vec<f64> {
    use std::f64::consts::PI;
    vec![PI / 2.0, PI / 3.0, PI / 4.0, 2.0 * PI / 3.0]
}

impl Default for GoldenRuleSection {
    fn default() -> Self {
        Self {
            thetas: default_thetas(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSection {
    #[serde(default = "default_suite")]
    pub suite: String,
    #[serde(default = "default_n_traj")]
    pub n_traj: usize,
}

fn default_suite() -> String {
    "closed-form-equivalence".into()
}

fn default_n_traj() -> usize {
    10_000
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            suite: default_suite(),
            n_traj: default_n_traj(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IoSection {
    /// Trace CSV for `identify`; rate CSV for the golden-rule method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Up and down relaxation traces for the relaxation method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_up: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_down: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Command>,
    #[serde(default = "default_qubit")]
    pub qubit: QubitDoc,
    /// Absent means a noiseless qubit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModelDoc>,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub acquisition: Acquisition,
    #[serde(default)]
    pub identify: IdentifySection,
    #[serde(default)]
    pub golden_rule: GoldenRuleSection,
    #[serde(default)]
    pub validate: ValidateSection,
    #[serde(default)]
    pub io: IoSection,
    #[serde(default)]
    pub seed: u64,
}

/// 6 GHz optimal-point qubit.
fn default_qubit() -> QubitDoc {
    QubitDoc {
        ej_ghz: 6.0,
        eel_ghz: Some(0.0),
        ng: None,
        ec_ghz: None,
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: None,
            qubit: default_qubit(),
            noise: None,
            sim: SimSection::default(),
            acquisition: Acquisition::default(),
            identify: IdentifySection::default(),
            golden_rule: GoldenRuleSection::default(),
            validate: ValidateSection::default(),
            io: IoSection::default(),
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Parse errors carry the line and column of the offending key.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn qubit_params(&self) -> Result<ChargeQubitParams> {
        self.qubit.build()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.io
            .out_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn validate(&self) -> Result<()> {
        self.qubit_params()?;
        if let Some(n) = &self.noise {
            n.build()?;
        }
        self.acquisition.validate()?;
        if !(self.identify.damping_per_t >= 0.0 && self.identify.damping_per_t.is_finite()) {
            return Err(Error::invalid("identify.damping_per_t must be >= 0"));
        }
        if !(self.identify.mask >= 0.0) {
            return Err(Error::invalid("identify.mask must be >= 0"));
        }
        if let Some(d) = self.identify.delta_ghz {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::invalid(format!(
                    "identify.delta_ghz must be positive, got {d}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_mirror_acquisition_record() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg.acquisition.dt_ps, 9.0);
        assert_eq!(cfg.acquisition.horizon_ps, 2900.0);
        assert_eq!(cfg.acquisition.noise_stddev, 0.02);
        assert!(cfg.qubit_params().unwrap().is_optimal_point());
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = RunConfig::from_json("{\n  \"seed\": 1,\n  \"sede\": 2\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn invalid_acquisition_rejected() {
        let mut cfg = RunConfig::default();
        cfg.acquisition.noise_stddev = -0.1;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.acquisition.shots_per_point = Some(0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn method_names() {
        assert_eq!(MethodName::parse("ac-exact").unwrap(), MethodName::AcExact);
        assert_eq!(
            MethodName::parse("golden-rule").unwrap(),
            MethodName::GoldenRule
        );
        assert!(MethodName::parse("eq22").is_err());
    }

    #[test]
    fn round_trips() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
