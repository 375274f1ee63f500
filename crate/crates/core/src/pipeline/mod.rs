//! Drivers behind the `noisespec` subcommands.
//!
//! Every driver takes a [`RunConfig`], writes its artifacts under
//! `cfg.out_dir()` and returns what it wrote. Outputs depend only on the
//! configuration and seed.

pub mod config;
pub mod io;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::freq::stationary_rate;
use crate::ident::{
    self, detect_delta, discrete_laplace_natural, golden_rule_sweep, identify_from_relaxation,
    identify_gamma_complex, identify_gamma_ft, identify_gamma_ft_ac, rate_series, AcVariant,
    DiscreteLaplace, Scenario, SpectrumEstimate,
};
use crate::noise::{DampedSineOmega, NoiseModel, NoiseSpectra, Silent};
use crate::qubit::{
    closed_form_q_theta, generic_q, golden_rule_rates, optimal_point_q, system, ChargeQubitParams,
    InitialState, QubitFrame,
};
use crate::sim::{free_evolution, integrate_volterra, monte_carlo_reference, OuProcess, SimConfig};
use crate::units::{ghz_to_rad_per_ps, rad_per_ps_to_ghz};
use crate::{Error, Result, C64};

pub use config::{Command, Detrend, MethodName, RunConfig};
pub use io::{AcquisitionRecord, QubitRecord, TraceFile, TraceMeta, TraceUnits};

/// Largest number of integration steps per acquisition sample.
const MAX_SUBSTEPS: usize = 10_000;

fn noise_model(cfg: &RunConfig) -> Result<Option<NoiseModel>> {
    cfg.noise.as_ref().map(|d| d.build()).transpose()
}

fn spectra(noise: &Option<NoiseModel>) -> Arc<dyn NoiseSpectra> {
    match noise {
        Some(n) => Arc::new(n.clone()),
        None => Arc::new(Silent),
    }
}

/// Number of integration steps per acquisition sample: the explicit
/// `sim.dt_ps` when given, else the smallest count that resolves both the
/// oscillation and the noise correlation time.
fn substeps(cfg: &RunConfig, delta: f64, tau_c: Option<f64>) -> Result<usize> {
    let a = cfg.acquisition.dt_ps;
    if let Some(dt) = cfg.sim.dt_ps {
        if !(dt > 0.0) {
            return Err(Error::invalid(format!(
                "sim.dt_ps must be positive, got {dt}"
            )));
        }
        let k = (a / dt).round().max(1.0);
        if ((a / k) - dt).abs() > 1e-9 * dt {
            return Err(Error::invalid(format!(
                "sim.dt_ps = {dt} does not divide acquisition.dt_ps = {a}"
            )));
        }
        return Ok(k as usize);
    }
    let mut limit = 2.0 * PI / (20.0 * delta);
    if let Some(tc) = tau_c {
        limit = limit.min(tc / 10.0);
    }
    let k = (a / limit).ceil().max(1.0) as usize;
    if k > MAX_SUBSTEPS {
        return Err(Error::StepSize(format!(
            "resolving the dynamics needs {k} steps per sample; set sim.dt_ps explicitly"
        )));
    }
    Ok(k)
}

/// Output of [`run_simulate`].
#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub trace: TraceFile,
    pub path: PathBuf,
    /// Noise-free `q` at the acquisition times.
    pub q_exact: Vec<f64>,
}

/// Integrates the configured protocol, samples it on the acquisition grid and
/// adds readout noise.
pub fn run_simulate(cfg: &RunConfig) -> Result<SimulateOutput> {
    cfg.validate()?;
    let p = cfg.qubit_params()?;
    let acq = &cfg.acquisition;
    let noise = noise_model(cfg)?;
    let k = substeps(
        cfg,
        p.delta(),
        noise.as_ref().and_then(|n| n.correlation_time()),
    )?;
    let n_samples = (acq.horizon_ps / acq.dt_ps + 1e-9).floor() as usize + 1;
    let dt = acq.dt_ps / k as f64;
    let mut sim_cfg = SimConfig::new(dt, (n_samples - 1) as f64 * acq.dt_ps)?;
    if let Some(c) = cfg.sim.kernel_cut_ps {
        sim_cfg = sim_cfg.with_kernel_cut(c)?;
    }
    if let Some(s) = cfg.sim.scheme {
        sim_cfg = sim_cfg.with_scheme(s);
    }
    let sys = system(&p, acq.initial_state, spectra(&noise))?;
    let traj = match &noise {
        Some(n) => integrate_volterra(&sys, n, &sim_cfg)?,
        None => free_evolution(&sys, &sim_cfg)?,
    };
    let times: Vec<f64> = (0..n_samples).map(|i| i as f64 * acq.dt_ps).collect();
    let q_exact: Vec<f64> = (0..n_samples).map(|i| traj.q[i * k]).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (q_mean, q_stderr) = match acq.shots_per_point {
        Some(shots) => {
            let mut q = Vec::with_capacity(n_samples);
            let mut se = Vec::with_capacity(n_samples);
            for &x in &q_exact {
                let d = Binomial::new(shots, x.clamp(0.0, 1.0))
                    .map_err(|e| Error::invalid(e.to_string()))?;
                let est = d.sample(&mut rng) as f64 / shots as f64;
                q.push(est);
                se.push((est * (1.0 - est) / shots as f64).sqrt());
            }
            (q, Some(se))
        }
        None if acq.noise_stddev > 0.0 => {
            let d =
                Normal::new(0.0, acq.noise_stddev).map_err(|e| Error::invalid(e.to_string()))?;
            let q = q_exact.iter().map(|&x| x + d.sample(&mut rng)).collect();
            (q, Some(vec![acq.noise_stddev; n_samples]))
        }
        None => (q_exact.clone(), None),
    };
    let trace = TraceFile {
        times,
        q_mean,
        q_stderr,
        meta: Some(TraceMeta {
            scenario: acq.scenario(),
            qubit: QubitRecord::from_params(&p),
            acquisition: AcquisitionRecord {
                dt_ps: acq.dt_ps,
                horizon_ps: (n_samples - 1) as f64 * acq.dt_ps,
                integration_dt_ps: dt,
                noise_stddev: if acq.shots_per_point.is_some() {
                    0.0
                } else {
                    acq.noise_stddev
                },
                shots_per_point: acq.shots_per_point,
                seed: cfg.seed,
            },
            noise: cfg.noise.clone(),
            units: TraceUnits::default(),
        }),
    };
    let dir = cfg.out_dir();
    io::ensure_dir(&dir)?;
    let path = dir.join("trace.csv");
    trace.save(&path)?;
    Ok(SimulateOutput {
        trace,
        path,
        q_exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSource {
    Detected,
    User,
    /// The method does not use the gap.
    NotUsed,
}

/// JSON report of an identification run, also written on failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifyReport {
    pub method: MethodName,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_hat_rad_per_ps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_hat_ghz: Option<f64>,
    pub delta_source: DeltaSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin_width_rad_per_ps: Option<f64>,
    pub damping_per_ps: f64,
    pub total_bins: usize,
    pub masked_bins: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_residual: Option<f64>,
    pub warnings: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

impl IdentifyReport {
    fn new(method: MethodName) -> Self {
        Self {
            method,
            status: "ok".into(),
            error: None,
            delta_hat_rad_per_ps: None,
            delta_hat_ghz: None,
            delta_source: DeltaSource::NotUsed,
            bin_width_rad_per_ps: None,
            damping_per_ps: 0.0,
            total_bins: 0,
            masked_bins: 0,
            truncation_residual: None,
            warnings: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn absorb(&mut self, dl: &DiscreteLaplace) {
        self.truncation_residual = Some(
            self.truncation_residual
                .map_or(dl.truncation_residual, |r| r.max(dl.truncation_residual)),
        );
        for w in &dl.warnings {
            if !self.warnings.contains(w) {
                self.warnings.push(w.clone());
            }
        }
        self.damping_per_ps = dl.damping;
    }
}

/// Output of [`run_identify`].
#[derive(Debug, Clone)]
pub struct IdentifyOutput {
    pub report: IdentifyReport,
    pub spectrum: Option<SpectrumEstimate>,
    /// Exact and printed AC variants when either was requested.
    pub ac_pair: Option<(SpectrumEstimate, SpectrumEstimate)>,
    pub relaxation: Option<ident::RelaxationEstimate>,
    pub golden_rule: Option<Vec<ident::GoldenRuleSample>>,
}

/// Runs the configured identification method. The report is written even
/// when the run fails, with `status = "error"` and the diagnostic.
pub fn run_identify(cfg: &RunConfig) -> Result<IdentifyOutput> {
    cfg.validate()?;
    let dir = cfg.out_dir();
    io::ensure_dir(&dir)?;
    let report_path = dir.join("report.json");
    let mut report = IdentifyReport::new(cfg.identify.method);
    match identify_inner(cfg, &dir, &mut report) {
        Ok(mut out) => {
            report.outputs.push(report_path.clone());
            io::write_json(&report_path, &report)?;
            out.report = report;
            Ok(out)
        }
        Err(e) => {
            report.status = "error".into();
            report.error = Some(e.to_string());
            io::write_json(&report_path, &report)?;
            Err(e)
        }
    }
}

fn required(p: &Option<PathBuf>, key: &str) -> Result<PathBuf> {
    p.clone().ok_or_else(|| {
        Error::invalid(format!(
            "missing input path: set io.{key} or pass the matching flag"
        ))
    })
}

fn identify_inner(
    cfg: &RunConfig,
    dir: &Path,
    report: &mut IdentifyReport,
) -> Result<IdentifyOutput> {
    let ic = &cfg.identify;
    let mut out = IdentifyOutput {
        report: report.clone(),
        spectrum: None,
        ac_pair: None,
        relaxation: None,
        golden_rule: None,
    };
    match ic.method {
        MethodName::Eq19 | MethodName::Eq20 | MethodName::Eq21 | MethodName::AcExact => {
            let tf = TraceFile::load(&required(&cfg.io.input, "input")?)?;
            let trace = tf.to_trace()?;
            if trace.scenario() != Scenario::CoherentOscillation {
                return Err(Error::invalid(format!(
                    "method {:?} needs a coherent-oscillation trace, got {:?}",
                    ic.method,
                    trace.scenario()
                )));
            }
            let dc = match ic.detrend {
                Detrend::Theory => 0.5,
                Detrend::Empirical => trace.mean(),
            };
            let sigma = ic.damping_per_t / trace.span();
            let dl_ac = discrete_laplace_natural(&trace.detrended(dc), sigma)?;
            report.absorb(&dl_ac);
            let bin = 2.0 * PI / trace.span();
            let delta = match ic.delta_ghz {
                Some(g) => {
                    report.delta_source = DeltaSource::User;
                    ghz_to_rad_per_ps(g)
                }
                None => {
                    report.delta_source = DeltaSource::Detected;
                    detect_delta(&dl_ac)?.0
                }
            };
            report.delta_hat_rad_per_ps = Some(delta);
            report.delta_hat_ghz = Some(rad_per_ps_to_ghz(delta));
            report.bin_width_rad_per_ps = Some(bin);
            let p = ChargeQubitParams::from_bias(delta, 0.0)?;
            let est = match ic.method {
                MethodName::Eq19 => identify_gamma_complex(&dl_ac.plus_constant(dc)?, &p, ic.mask)?,
                MethodName::Eq20 => identify_gamma_ft(&dl_ac.plus_constant(dc)?, &p, ic.mask)?,
                _ => {
                    let exact = identify_gamma_ft_ac(&dl_ac, &p, AcVariant::Exact, ic.mask)?;
                    let printed = identify_gamma_ft_ac(&dl_ac, &p, AcVariant::Printed, ic.mask)?;
                    let path = dir.join("ac_discrepancy.csv");
                    write_ac_discrepancy(&path, &exact, &printed)?;
                    report.outputs.push(path);
                    let chosen = if ic.method == MethodName::AcExact {
                        exact.clone()
                    } else {
                        printed.clone()
                    };
                    out.ac_pair = Some((exact, printed));
                    chosen
                }
            };
            report.total_bins = est.omegas.len();
            report.masked_bins = est.masked_count();
            let path = dir.join("spectrum.csv");
            est.write_csv(io::create(&path)?)?;
            report.outputs.push(path);
            out.spectrum = Some(est);
        }
        MethodName::Relaxation => {
            let up = TraceFile::load(&required(&cfg.io.input_up, "input_up")?)?.to_trace()?;
            let down = TraceFile::load(&required(&cfg.io.input_down, "input_down")?)?.to_trace()?;
            if up.scenario() != Scenario::RelaxationUp
                || down.scenario() != Scenario::RelaxationDown
            {
                return Err(Error::invalid(
                    "relaxation method needs a relaxation_up and a relaxation_down trace",
                ));
            }
            if up.times() != down.times() {
                return Err(Error::invalid(
                    "up and down traces are sampled on different grids",
                ));
            }
            let sigma = ic.damping_per_t / up.span();
            let dl_up = discrete_laplace_natural(&rate_series(&up)?, sigma)?;
            let dl_down = discrete_laplace_natural(&rate_series(&down)?, sigma)?;
            report.absorb(&dl_up);
            report.absorb(&dl_down);
            let est = identify_from_relaxation(&dl_up, &dl_down, ic.mask)?;
            report.total_bins = est.s.len();
            report.masked_bins = est.masked.iter().filter(|m| **m).count();
            let path = dir.join("relaxation.csv");
            write_relaxation(&path, &est)?;
            report.outputs.push(path);
            out.relaxation = Some(est);
        }
        MethodName::GoldenRule => {
            let input = required(&cfg.io.input, "input")?;
            let rates = read_rates(&input)?;
            let p = cfg.qubit_params()?;
            let samples = golden_rule_sweep(p.ej(), &rates)?;
            report.total_bins = samples.len();
            let path = dir.join("golden_rule_spectrum.csv");
            write_golden_spectrum(&path, &samples)?;
            report.outputs.push(path);
            out.golden_rule = Some(samples);
        }
    }
    Ok(out)
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Parse(format!("{}: {e}", path.display()))
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(io::create(path)?);
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.write_record(&r).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn e(x: f64) -> String {
    format!("{x:e}")
}

/// `omega_rad_per_ps,gamma_ft_exact,gamma_ft_printed,difference,frequency_ghz`.
fn write_ac_discrepancy(
    path: &Path,
    exact: &SpectrumEstimate,
    printed: &SpectrumEstimate,
) -> Result<()> {
    let rows = (0..exact.omegas.len()).map(|i| {
        let (a, b) = (exact.gamma_ft[i], printed.gamma_ft[i]);
        vec![
            e(exact.omegas[i]),
            e(a),
            e(b),
            e(b - a),
            e(rad_per_ps_to_ghz(exact.omegas[i])),
        ]
    });
    write_rows(
        path,
        &[
            "omega_rad_per_ps",
            "gamma_ft_exact",
            "gamma_ft_printed",
            "difference",
            "frequency_ghz",
        ],
        rows,
    )
}

fn write_relaxation(path: &Path, est: &ident::RelaxationEstimate) -> Result<()> {
    let rows = (0..est.s.len()).map(|i| {
        vec![
            e(est.s[i].re),
            e(est.s[i].im),
            e(est.gamma_plus[i].re),
            e(est.gamma_plus[i].im),
            e(est.omega_minus[i].re),
            e(est.omega_minus[i].im),
            e(est.omega_minus_printed[i].re),
            e(est.omega_minus_printed[i].im),
            est.masked[i].to_string(),
            e(est.denominator_abs[i]),
        ]
    });
    write_rows(
        path,
        &[
            "s_re_per_ps",
            "s_im_rad_per_ps",
            "gamma_plus_re",
            "gamma_plus_im",
            "omega_minus_re",
            "omega_minus_im",
            "omega_minus_printed_re",
            "omega_minus_printed_im",
            "masked",
            "denominator_abs",
        ],
        rows,
    )
}

fn write_golden_spectrum(path: &Path, samples: &[ident::GoldenRuleSample]) -> Result<()> {
    let rows = samples.iter().map(|s| {
        vec![
            e(s.theta),
            e(s.delta),
            e(rad_per_ps_to_ghz(s.delta)),
            e(s.phi_at_plus_delta),
            e(s.phi_at_minus_delta),
        ]
    });
    write_rows(
        path,
        &[
            "theta_rad",
            "delta_rad_per_ps",
            "delta_ghz",
            "phi_ft_plus_delta",
            "phi_ft_minus_delta",
        ],
        rows,
    )
}

/// Rate table `theta_rad,rate_up_per_ps,rate_down_per_ps`.
pub fn read_rates(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|err| match err.kind() {
        csv::ErrorKind::Io(_) => match err.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        },
        _ => Error::Parse(format!("{}: {err}", path.display())),
    })?;
    let headers = rdr.headers().map_err(csv_err(path))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["theta_rad", "rate_up_per_ps", "rate_down_per_ps"] {
        return Err(Error::Parse(format!(
            "{}: expected header theta_rad,rate_up_per_ps,rate_down_per_ps",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let f = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| {
                    Error::Parse(format!("{}: line {}: bad number", path.display(), row + 2))
                })
        };
        out.push((f(0)?, f(1)?, f(2)?));
    }
    Ok(out)
}

/// One bias point of [`run_golden_rule`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenRulePoint {
    pub theta: f64,
    pub delta: f64,
    pub golden_up: f64,
    pub golden_down: f64,
    pub model_up: f64,
    pub model_down: f64,
}

impl GoldenRulePoint {
    pub fn rel_err_down(&self) -> f64 {
        (self.model_down - self.golden_down).abs() / self.golden_down.abs()
    }
}

/// Golden-rule rates next to the stationary rates of the full model at
/// fixed `EJ` and each configured bias angle. Writes `golden_rule.csv` and
/// `rates.csv`, the latter in the input format of the golden-rule
/// identification method.
pub fn run_golden_rule(cfg: &RunConfig) -> Result<Vec<GoldenRulePoint>> {
    cfg.validate()?;
    let noise =
        noise_model(cfg)?.ok_or_else(|| Error::invalid("golden-rule needs a noise model"))?;
    let spectra: Arc<dyn NoiseSpectra> = Arc::new(noise.clone());
    let ej = cfg.qubit_params()?.ej();
    let points = cfg
        .golden_rule
        .thetas
        .iter()
        .map(|&theta| {
            if !(theta > 0.0 && theta < PI) {
                return Err(Error::invalid(format!("theta = {theta} outside (0, pi)")));
            }
            let e_el = if (theta - PI / 2.0).abs() < 1e-15 {
                0.0
            } else {
                ej / theta.tan()
            };
            let p = ChargeQubitParams::from_bias(ej, e_el)?;
            let (golden_up, golden_down) = golden_rule_rates(&p, &noise)?;
            let down = stationary_rate(&system(&p, InitialState::Excited, spectra.clone())?)?;
            let up = stationary_rate(&system(&p, InitialState::Ground, spectra.clone())?)?;
            Ok(GoldenRulePoint {
                theta,
                delta: p.delta(),
                golden_up,
                golden_down,
                model_up: up.rate,
                model_down: down.rate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dir = cfg.out_dir();
    io::ensure_dir(&dir)?;
    write_rows(
        &dir.join("golden_rule.csv"),
        &[
            "theta_rad",
            "delta_rad_per_ps",
            "delta_ghz",
            "golden_up_per_ps",
            "golden_down_per_ps",
            "model_up_per_ps",
            "model_down_per_ps",
            "rel_err_down",
        ],
        points.iter().map(|g| {
            vec![
                e(g.theta),
                e(g.delta),
                e(rad_per_ps_to_ghz(g.delta)),
                e(g.golden_up),
                e(g.golden_down),
                e(g.model_up),
                e(g.model_down),
                e(g.rel_err_down()),
            ]
        }),
    )?;
    write_rows(
        &dir.join("rates.csv"),
        &["theta_rad", "rate_up_per_ps", "rate_down_per_ps"],
        points
            .iter()
            .map(|g| vec![e(g.theta), e(g.model_up), e(g.model_down)]),
    )?;
    Ok(points)
}

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            pass: measured <= tolerance,
            note: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

pub const SUITES: [&str; 3] = ["closed-form-equivalence", "golden-rule", "mc-born"];

/// Weak-coupling Lorentzian of the golden-rule suite, in units of the gap.
pub const GOLDEN_RULE_G2: f64 = 0.002;
pub const GOLDEN_RULE_TAU_C: f64 = 0.5;

/// Runs a named cross-validation suite and writes `validate.json`.
pub fn run_validate(cfg: &RunConfig) -> Result<Verdict> {
    cfg.validate()?;
    let suite = cfg.validate.suite.as_str();
    let delta = cfg.qubit_params()?.delta();
    let checks = match suite {
        "closed-form-equivalence" => closed_form_suite(delta)?,
        "golden-rule" => golden_rule_suite(delta)?,
        "mc-born" => mc_born_suite(delta, cfg.validate.n_traj, cfg.seed)?,
        other => {
            return Err(Error::invalid(format!(
                "unknown suite '{other}'; known: {}",
                SUITES.join(", ")
            )));
        }
    };
    let verdict = Verdict {
        suite: suite.into(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    };
    let dir = cfg.out_dir();
    io::ensure_dir(&dir)?;
    io::write_json(&dir.join("validate.json"), &verdict)?;
    Ok(verdict)
}

/// Closed-form `Q_theta(s)` (and the optimal-point reduction) against the
/// generic matrix response on 200 points of `[0.1, 3] Delta`.
pub fn closed_form_suite(delta: f64) -> Result<Vec<Check>> {
    let base = NoiseModel::lorentzian(0.01 * delta * delta, 0.2 / delta)?;
    let with_omega = base.clone().with_omega(DampedSineOmega {
        amplitude: 0.004 * delta * delta,
        tau_c: 0.2 / delta,
        tau_r: 1.0 / delta,
    })?;
    let grid: Vec<C64> = (0..200)
        .map(|i| C64::new(0.0, delta * (0.1 + 2.9 * i as f64 / 199.0)))
        .collect();
    let mut checks = Vec::new();
    for (label, model) in [("lorentzian", base), ("lorentzian+omega", with_omega)] {
        let spectra: Arc<dyn NoiseSpectra> = Arc::new(model);
        for (tlabel, theta) in [
            ("pi/4", PI / 4.0),
            ("pi/3", PI / 3.0),
            ("pi/2", PI / 2.0),
            ("2pi/3", 2.0 * PI / 3.0),
        ] {
            let p = ChargeQubitParams::from_gap_angle(delta, theta)?;
            let sys = system(&p, InitialState::ZeroCharge, spectra.clone())?;
            let mut worst = 0.0f64;
            let mut worst_opt = 0.0f64;
            for &s in &grid {
                let g = generic_q(&sys, s)?;
                let c = closed_form_q_theta(&p, spectra.as_ref(), s)?;
                worst = worst.max((c - g).norm() / g.norm());
                if p.is_optimal_point() {
                    let o = optimal_point_q(&p, spectra.as_ref(), s)?;
                    worst_opt = worst_opt.max((o - g).norm() / g.norm());
                }
            }
            checks.push(Check::at_most(
                format!("{label} theta={tlabel} closed form"),
                worst,
                1e-10,
            ));
            if p.is_optimal_point() {
                checks.push(Check::at_most(
                    format!("{label} theta={tlabel} optimal-point form"),
                    worst_opt,
                    1e-10,
                ));
            }
        }
    }
    Ok(checks)
}

/// Stationary down rate of the full model against the golden rule at weak
/// coupling.
pub fn golden_rule_suite(delta: f64) -> Result<Vec<Check>> {
    let noise = NoiseModel::lorentzian(GOLDEN_RULE_G2 * delta * delta, GOLDEN_RULE_TAU_C / delta)?;
    let spectra: Arc<dyn NoiseSpectra> = Arc::new(noise.clone());
    let mut checks = Vec::new();
    for (label, theta) in [("pi/2", PI / 2.0), ("pi/3", PI / 3.0)] {
        let p = ChargeQubitParams::from_gap_angle(delta, theta)?;
        let (_, golden) = golden_rule_rates(&p, &noise)?;
        let model = stationary_rate(&system(&p, InitialState::Excited, spectra.clone())?)?.rate;
        checks.push(Check::at_most(
            format!("down rate theta={label}"),
            (model - golden).abs() / golden,
            0.05,
        ));
    }
    Ok(checks)
}

/// Monte Carlo over OU noise against the Born-model integrator at the
/// optimal point, `g2 = 0.01 Delta^2`, `tau_c = 0.2 / Delta`.
pub fn mc_born_suite(delta: f64, n_traj: usize, seed: u64) -> Result<Vec<Check>> {
    let p = ChargeQubitParams::from_gap_angle(delta, PI / 2.0)?;
    let ou = OuProcess::new(0.01 * delta * delta, 0.2 / delta)?;
    let noise = ou.noise_model()?;
    let sim_cfg = SimConfig::new(0.02 / delta, 100.0 / delta)?;
    let sys = system(&p, InitialState::ZeroCharge, Arc::new(noise.clone()))?;
    let born = integrate_volterra(&sys, &noise, &sim_cfg)?;
    let frame = QubitFrame::new(&p, InitialState::ZeroCharge.frame());
    let mc = monte_carlo_reference(&frame.h0, &frame.h1, &ou, sys.v0(), n_traj, &sim_cfg, seed)?;
    let gap = born
        .q
        .iter()
        .zip(&mc.mean.q)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let stderr = mc.stderr.iter().fold(0.0f64, |m, x| m.max(*x));
    let mut gap_check = Check::at_most("max |q_mc - q_born|", gap, 0.02);
    let mut se_check = Check::at_most("max Monte Carlo stderr", stderr, 0.01);
    if !se_check.pass {
        // stderr ~ 1/sqrt(n): the count that would meet the budget
        let needed = (n_traj as f64 * (stderr / 0.01).powi(2)).ceil();
        se_check.note = format!(
            "statistical budget exceeded: stderr {stderr:.3e} with n_traj = {n_traj}; about {needed} trajectories needed"
        );
        if !gap_check.pass {
            gap_check.note =
                "gap is within 3 stderr of the sampling noise; not resolvable at this n_traj"
                    .into();
            if gap > 3.0 * stderr {
                gap_check.note = "gap exceeds 3 stderr".into();
            }
        }
    }
    Ok(vec![gap_check, se_check])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModelDoc;

    fn cfg_in(dir: &Path) -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.io.out_dir = Some(dir.to_path_buf());
        cfg
    }

    #[test]
    fn noiseless_simulation_is_cosine() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.acquisition.noise_stddev = 0.0;
        let out = run_simulate(&cfg).unwrap();
        let d = ghz_to_rad_per_ps(6.0);
        assert_eq!(out.trace.times.len(), 323);
        assert!(out.trace.q_stderr.is_none());
        for (t, q) in out.trace.times.iter().zip(&out.trace.q_mean) {
            assert!((q - 0.5 * (1.0 - (d * t).cos())).abs() < 1e-6);
        }
    }

    #[test]
    fn binomial_readout_statistics() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.acquisition.shots_per_point = Some(400);
        cfg.seed = 11;
        let out = run_simulate(&cfg).unwrap();
        let z: Vec<f64> = out
            .trace
            .q_mean
            .iter()
            .zip(&out.q_exact)
            .filter(|(_, e)| **e > 0.05 && **e < 0.95)
            .map(|(m, e)| (m - e) / (e * (1.0 - e) / 400.0).sqrt())
            .collect();
        let n = z.len() as f64;
        let mean = z.iter().sum::<f64>() / n;
        let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 4.0 / n.sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.3, "var {var}");
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for d in [&a, &b] {
            let mut cfg = cfg_in(d.path());
            cfg.seed = 5;
            run_simulate(&cfg).unwrap();
        }
        for f in ["trace.csv", "trace.json"] {
            let x = std::fs::read(a.path().join(f)).unwrap();
            let y = std::fs::read(b.path().join(f)).unwrap();
            assert_eq!(x, y, "{f}");
        }
    }

    #[test]
    fn user_delta_recorded() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.acquisition.noise_stddev = 0.0;
        cfg.acquisition.horizon_ps = 20_000.0;
        cfg.noise = Some(NoiseModelDoc::lorentzian(0.01, 30.0));
        let sim = run_simulate(&cfg).unwrap();
        cfg.io.input = Some(sim.path.clone());
        cfg.identify.delta_ghz = Some(6.0);
        let out = run_identify(&cfg).unwrap();
        assert_eq!(out.report.delta_source, DeltaSource::User);
        let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
        assert!(text.contains("\"delta_source\": \"user\""));
    }

    #[test]
    fn truncated_trace_warns_but_produces_spectrum() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.acquisition.noise_stddev = 0.0;
        cfg.noise = Some(NoiseModelDoc::lorentzian(1e-5, 30.0));
        let sim = run_simulate(&cfg).unwrap();
        cfg.io.input = Some(sim.path.clone());
        let out = run_identify(&cfg).unwrap();
        assert!(out.report.truncation_residual.unwrap() > ident::TRUNCATION_WARNING);
        assert!(!out.report.warnings.is_empty());
        assert!(out.spectrum.is_some());
    }

    #[test]
    fn failure_report_is_written() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("flat.csv");
        let rows: String = (0..64)
            .map(|i| format!("{},0.5\n", i as f64 * 9.0))
            .collect();
        std::fs::write(&path, format!("time_ps,q_mean\n{rows}")).unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.io.input = Some(path);
        let err = run_identify(&cfg).unwrap_err();
        assert!(matches!(err, Error::Detection(_)));
        let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
        assert!(text.contains("\"status\": \"error\""));
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.validate.suite = "everything".into();
        let err = run_validate(&cfg).unwrap_err();
        assert_eq!(err.class(), crate::error::ErrorClass::Usage);
    }

    #[test]
    fn closed_form_suite_passes() {
        let checks = closed_form_suite(1.0).unwrap();
        assert_eq!(checks.len(), 10);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }

    #[test]
    fn golden_rule_round_trip_through_rates() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.noise = Some(NoiseModelDoc::lorentzian(1e-6, 30.0));
        let pts = run_golden_rule(&cfg).unwrap();
        assert_eq!(pts.len(), 4);
        cfg.identify.method = MethodName::GoldenRule;
        cfg.io.input = Some(dir.path().join("rates.csv"));
        let out = run_identify(&cfg).unwrap();
        let samples = out.golden_rule.unwrap();
        let noise = noise_model(&cfg).unwrap().unwrap();
        for s in samples {
            let exact = noise.phi_ft(s.delta).unwrap();
            assert!((s.phi_at_plus_delta - exact).abs() / exact < 0.05);
        }
    }
}
