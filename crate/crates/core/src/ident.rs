//! Spectrum identification from measured traces.
//!
//! A trace is taken to the frequency domain with a trapezoid Laplace sum,
//! the qubit frequency is read off the coherent-oscillation peak, and the
//! optimal-point response `Q(s) = Delta^2 / (2 s (s^2 + s Gamma(s) + Delta^2))`
//! is inverted for `Gamma(iw)`.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::qubit::ChargeQubitParams;
use crate::units::rad_per_ps_to_ghz;
use crate::{Error, Result, C64};

/// Fraction of the peak value left at the end of a record above which the
/// transform is flagged as truncated.
pub const TRUNCATION_WARNING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    CoherentOscillation,
    RelaxationUp,
    RelaxationDown,
}

/// Uniformly sampled ensemble average.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementTrace {
    times: Vec<f64>,
    values: Vec<f64>,
    dt: f64,
    scenario: Scenario,
}

impl MeasurementTrace {
    pub fn new(times: Vec<f64>, values: Vec<f64>, scenario: Scenario) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid("times and values differ in length"));
        }
        if times.len() < 16 {
            return Err(Error::invalid(format!(
                "trace needs at least 16 samples, got {}",
                times.len()
            )));
        }
        let dt = times[1] - times[0];
        if !(dt > 0.0) {
            return Err(Error::invalid("sampling period must be positive"));
        }
        for (k, t) in times.iter().enumerate().skip(1) {
            let step = t - times[k - 1];
            if (step - dt).abs() > 1e-9 * dt {
                return Err(Error::invalid(format!("non-uniform sampling at index {k}")));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("trace contains non-finite values"));
        }
        Ok(Self {
            times,
            values,
            dt,
            scenario,
        })
    }

    pub fn from_uniform(dt: f64, values: Vec<f64>, scenario: Scenario) -> Result<Self> {
        let times = (0..values.len()).map(|k| k as f64 * dt).collect();
        Self::new(times, values, scenario)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `T = t_last - t_first`.
    pub fn span(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Subtracts `dc` from every sample.
    pub fn detrended(&self, dc: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v - dc).collect(),
            ..self.clone()
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `w_j = 2 pi j / T`, `j = 1 ..= floor(T / (2 dt))`.
    pub fn natural_grid(&self) -> Vec<f64> {
        let t = self.span();
        let jmax = (t / (2.0 * self.dt)).floor() as usize;
        (1..=jmax)
            .map(|j| TAU * j as f64 / t)
            .filter(|w| *w <= PI / self.dt)
            .collect()
    }
}

/// Samples of `int_0^T e^{-(sigma + iw) t} f(t) dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaplace {
    pub omegas: Vec<f64>,
    pub values: Vec<C64>,
    pub damping: f64,
    /// `|f(T)| / max |f|`.
    pub truncation_residual: f64,
    pub span: f64,
    /// `max |f|` of the transformed record.
    pub signal_scale: f64,
    pub warnings: Vec<String>,
}

impl DiscreteLaplace {
    pub fn points(&self) -> Vec<C64> {
        self.omegas
            .iter()
            .map(|&w| C64::new(self.damping, w))
            .collect()
    }

    /// Adds the exact infinite-horizon transform `dc / s` of a constant, used
    /// to restore the DC level removed before transforming.
    pub fn plus_constant(&self, dc: f64) -> Result<Self> {
        let mut out = self.clone();
        for (v, s) in out.values.iter_mut().zip(self.points()) {
            if s.norm() == 0.0 {
                return Err(Error::Singular {
                    s,
                    eigenvalue: None,
                });
            }
            *v += dc / s;
        }
        Ok(out)
    }
}

fn transform_meta(trace: &MeasurementTrace, sigma: f64) -> Result<(f64, f64, Vec<String>)> {
    if !(sigma >= 0.0) {
        return Err(Error::invalid(format!("damping must be >= 0, got {sigma}")));
    }
    let max = trace.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let last = trace.values.last().unwrap().abs();
    let residual = if max > 0.0 { last / max } else { 0.0 };
    let mut warnings = Vec::new();
    if residual > TRUNCATION_WARNING {
        warnings.push(format!(
            "truncation residual {residual:.3} exceeds {TRUNCATION_WARNING}: the record has not decayed"
        ));
    }
    Ok((residual, max, warnings))
}

/// Trapezoid quadrature of the finite-record Laplace transform at
/// `s = sigma + i w` for each `w`.
pub fn discrete_laplace(
    trace: &MeasurementTrace,
    omegas: &[f64],
    sigma: f64,
) -> Result<DiscreteLaplace> {
    let nyquist = PI / trace.dt;
    if let Some(w) = omegas.iter().find(|w| w.abs() > nyquist * (1.0 + 1e-12)) {
        return Err(Error::invalid(format!(
            "omega {w} beyond Nyquist limit {nyquist}"
        )));
    }
    let (truncation_residual, signal_scale, warnings) = transform_meta(trace, sigma)?;
    let dt = trace.dt;
    let t0 = trace.times[0];
    let f = &trace.values;
    let n = f.len();
    let values = omegas
        .par_iter()
        .map(|&w| {
            let s = C64::new(sigma, w);
            let step = (-s * dt).exp();
            let mut z = (-s * t0).exp();
            let mut acc = C64::new(0.0, 0.0);
            for (k, fk) in f.iter().enumerate() {
                // resynchronise the power to bound round-off growth
                if k % 4096 == 0 {
                    z = (-s * trace.times[k]).exp();
                }
                let wgt = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                acc += z * (fk * wgt);
                z *= step;
            }
            acc * dt
        })
        .collect();
    Ok(DiscreteLaplace {
        omegas: omegas.to_vec(),
        values,
        damping: sigma,
        truncation_residual,
        span: trace.span(),
        signal_scale,
        warnings,
    })
}

/// Same quadrature on the natural grid via one FFT. With `N = n - 1`
/// intervals, `exp(-i w_j T) = 1`, so the trapezoid end weights fold into a
/// single DFT of length `N`.
pub fn discrete_laplace_natural(trace: &MeasurementTrace, sigma: f64) -> Result<DiscreteLaplace> {
    let (truncation_residual, signal_scale, warnings) = transform_meta(trace, sigma)?;
    let omegas = trace.natural_grid();
    let n_int = trace.len() - 1;
    let dt = trace.dt;
    let t0 = trace.times[0];
    let mut buf: Vec<Complex<f64>> = trace
        .values
        .iter()
        .enumerate()
        .take(n_int)
        .map(|(k, f)| Complex::new(f * (-sigma * k as f64 * dt).exp(), 0.0))
        .collect();
    let last = trace.values[n_int] * (-sigma * n_int as f64 * dt).exp();
    buf[0] = Complex::new(0.5 * (buf[0].re + last), 0.0);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n_int).process(&mut buf);
    let values = omegas
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let shift = (-C64::new(sigma, w) * t0).exp();
            buf[i + 1] * dt * shift
        })
        .collect();
    Ok(DiscreteLaplace {
        omegas,
        values,
        damping: sigma,
        truncation_residual,
        span: trace.span(),
        signal_scale,
        warnings,
    })
}

/// Peak of `|Q_AC(iw)|` refined by a parabola through the log magnitudes of
/// the three bins around the maximum. Returns `(Delta_hat, 2 pi / T)`.
pub fn detect_delta(dl: &DiscreteLaplace) -> Result<(f64, f64)> {
    let bin = TAU / dl.span;
    let mags: Vec<f64> = dl.values.iter().map(|v| v.norm()).collect();
    if mags.len() < 3 {
        return Err(Error::Detection(
            "need at least three frequency bins".into(),
        ));
    }
    let (imax, &peak) = mags
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let mut sorted = mags.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    // a record of size |f| over T transforms to at most |f| T
    let floor = 1e-9 * dl.span * dl.signal_scale;
    if !(peak > floor) || peak <= 5.0 * median {
        return Err(Error::Detection(
            "no spectral peak stands out of the background".into(),
        ));
    }
    if imax == 0 || imax == mags.len() - 1 {
        return Err(Error::Detection(
            "maximum lies on the edge of the frequency grid".into(),
        ));
    }
    let (a, b, c) = (mags[imax - 1].ln(), mags[imax].ln(), mags[imax + 1].ln());
    let den = a - 2.0 * b + c;
    let offset = if den != 0.0 {
        (0.5 * (a - c) / den).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let h = dl.omegas[imax + 1] - dl.omegas[imax];
    Ok((dl.omegas[imax] + offset * h, bin))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Eq19Complex,
    Eq20Ft,
    Eq21AcPrinted,
    AcExactDerived,
    RelaxationPair,
    GoldenRuleSweep,
}

/// Identified `Gamma_FT(w)` with per-bin conditioning.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub omegas: Vec<f64>,
    /// NaN on masked bins.
    pub gamma_ft: Vec<f64>,
    /// Complex `Gamma(iw)`, present for the complex inversion.
    pub gamma_complex: Option<Vec<C64>>,
    pub method: Method,
    pub denominator_abs: Vec<f64>,
    pub masked: Vec<bool>,
}

impl SpectrumEstimate {
    fn build(omegas: Vec<f64>, raw: Vec<(f64, f64)>, method: Method, threshold: f64) -> Self {
        let denominator_abs: Vec<f64> = raw.iter().map(|r| r.1).collect();
        let masked: Vec<bool> = raw
            .iter()
            .map(|r| !(r.1 >= threshold) || !r.0.is_finite())
            .collect();
        let gamma_ft = raw
            .iter()
            .zip(&masked)
            .map(|(r, &m)| if m { f64::NAN } else { r.0 })
            .collect();
        Self {
            omegas,
            gamma_ft,
            gamma_complex: None,
            method,
            denominator_abs,
            masked,
        }
    }

    pub fn masked_count(&self) -> usize {
        self.masked.iter().filter(|m| **m).count()
    }

    /// Unmasked `(w, Gamma_FT)` pairs.
    pub fn unmasked(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omegas
            .iter()
            .zip(&self.gamma_ft)
            .zip(&self.masked)
            .filter(|(_, m)| !**m)
            .map(|((w, g), _)| (*w, *g))
    }

    /// CSV `omega_rad_per_ps,gamma_ft,masked,denominator_abs,frequency_ghz`;
    /// masked bins carry `NaN`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        w.write_record([
            "omega_rad_per_ps",
            "gamma_ft",
            "masked",
            "denominator_abs",
            "frequency_ghz",
        ])
        .map_err(err)?;
        for i in 0..self.omegas.len() {
            w.write_record([
                format!("{:e}", self.omegas[i]),
                format!("{:e}", self.gamma_ft[i]),
                self.masked[i].to_string(),
                format!("{:e}", self.denominator_abs[i]),
                format!("{:e}", rad_per_ps_to_ghz(self.omegas[i])),
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| Error::io("<spectrum csv>", e))?;
        Ok(())
    }
}

fn require_optimal(p: &ChargeQubitParams) -> Result<()> {
    if !p.is_optimal_point() {
        return Err(Error::invalid(
            "inversion formulas hold at the optimal point only",
        ));
    }
    Ok(())
}

/// Default mask: bins whose denominator falls below this fraction of the
/// largest one are dropped.
pub const DEFAULT_MASK: f64 = 1e-8;

fn relative_threshold(raw: &[(f64, f64)], rel: f64) -> f64 {
    rel * raw
        .iter()
        .fold(0.0f64, |m, r| if r.1.is_finite() { m.max(r.1) } else { m })
}

/// `Gamma(iw) = -Delta^2 / (2 w^2 Q(iw)) - i (w - w0^2 / w)` from the
/// transform of the full trace `Q(t)`.
pub fn identify_gamma_complex(
    dl: &DiscreteLaplace,
    p: &ChargeQubitParams,
    mask_rel: f64,
) -> Result<SpectrumEstimate> {
    require_optimal(p)?;
    let d2 = p.delta().powi(2);
    let w02 = p.omega0().powi(2);
    let mut gammas = Vec::new();
    let mut raw = Vec::new();
    let mut omegas = Vec::new();
    for (&w, &q) in dl.omegas.iter().zip(&dl.values) {
        if w == 0.0 {
            continue;
        }
        let den = q * (w * w);
        let g = -d2 / (den * 2.0) - C64::new(0.0, w - w02 / w);
        gammas.push(g);
        raw.push((2.0 * g.re, den.norm()));
        omegas.push(w);
    }
    let threshold = relative_threshold(&raw, mask_rel);
    let mut est = SpectrumEstimate::build(omegas, raw, Method::Eq19Complex, threshold);
    est.gamma_complex = Some(gammas);
    Ok(est)
}

/// `Gamma_FT(w) = -w0^2 Re[1 / (w^2 Q(iw))]`.
pub fn identify_gamma_ft(
    dl: &DiscreteLaplace,
    p: &ChargeQubitParams,
    mask_rel: f64,
) -> Result<SpectrumEstimate> {
    require_optimal(p)?;
    let w02 = p.omega0().powi(2);
    let (omegas, raw): (Vec<f64>, Vec<(f64, f64)>) = dl
        .omegas
        .iter()
        .zip(&dl.values)
        .filter(|(w, _)| **w != 0.0)
        .map(|(&w, &q)| {
            let den = q * (w * w);
            (w, (-w02 * den.inv().re, den.norm()))
        })
        .unzip();
    let threshold = relative_threshold(&raw, mask_rel);
    Ok(SpectrumEstimate::build(
        omegas,
        raw,
        Method::Eq20Ft,
        threshold,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcVariant {
    /// `-w0^2 Re[2 Q_AC / (0.5 + i w Q_AC)]` as printed.
    Printed,
    /// `-Delta^2 Re[1 / (w^2 Q_AC - i w / 2)]`, exact for `Q_AC = Q - 1/(2s)`.
    Exact,
}

/// Spectrum from the transform of the detrended trace `Q(t) - 1/2`.
pub fn identify_gamma_ft_ac(
    dl: &DiscreteLaplace,
    p: &ChargeQubitParams,
    variant: AcVariant,
    mask_rel: f64,
) -> Result<SpectrumEstimate> {
    require_optimal(p)?;
    let d2 = p.delta().powi(2);
    let w02 = p.omega0().powi(2);
    let (omegas, raw): (Vec<f64>, Vec<(f64, f64)>) = dl
        .omegas
        .iter()
        .zip(&dl.values)
        .filter(|(w, _)| **w != 0.0)
        .map(|(&w, &qac)| {
            let val = match variant {
                AcVariant::Printed => {
                    let den = C64::new(0.5, 0.0) + C64::new(0.0, w) * qac;
                    (-w02 * (qac * 2.0 / den).re, den.norm())
                }
                AcVariant::Exact => {
                    let den = qac * (w * w) - C64::new(0.0, 0.5 * w);
                    (-d2 * den.inv().re, den.norm())
                }
            };
            (w, val)
        })
        .unzip();
    let method = match variant {
        AcVariant::Printed => Method::Eq21AcPrinted,
        AcVariant::Exact => Method::AcExactDerived,
    };
    let threshold = relative_threshold(&raw, mask_rel);
    Ok(SpectrumEstimate::build(omegas, raw, method, threshold))
}

/// Modulated spectra recovered from a pair of rate transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationEstimate {
    pub s: Vec<C64>,
    /// `s (g_up + g_down) / (2 - (g_up + g_down))`.
    pub gamma_plus: Vec<C64>,
    /// Exact inverse `s (g_up - g_down) / (2 - (g_up + g_down))`.
    pub omega_minus: Vec<C64>,
    /// Printed variant `s (g_up - g_down) / (2 - (g_up - g_down))`.
    pub omega_minus_printed: Vec<C64>,
    pub denominator_abs: Vec<f64>,
    pub masked: Vec<bool>,
}

/// Inverts `g_down = (G+ - O-)/(G+ + s)`, `g_up = (G+ + O-)/(G+ + s)`.
///
/// Rates use the normalisation of [`crate::freq::transition_rate`]: the
/// transform of `-v3_0 dv3/dt`.
pub fn identify_from_relaxation_values(
    s: &[C64],
    up: &[C64],
    down: &[C64],
    mask_abs: f64,
) -> Result<RelaxationEstimate> {
    if s.len() != up.len() || s.len() != down.len() {
        return Err(Error::invalid("rate transforms are on different grids"));
    }
    let mut est = RelaxationEstimate {
        s: s.to_vec(),
        gamma_plus: Vec::with_capacity(s.len()),
        omega_minus: Vec::with_capacity(s.len()),
        omega_minus_printed: Vec::with_capacity(s.len()),
        denominator_abs: Vec::with_capacity(s.len()),
        masked: Vec::with_capacity(s.len()),
    };
    for i in 0..s.len() {
        let sum = up[i] + down[i];
        let diff = up[i] - down[i];
        let den = C64::new(2.0, 0.0) - sum;
        let den_p = C64::new(2.0, 0.0) - diff;
        est.gamma_plus.push(s[i] * sum / den);
        est.omega_minus.push(s[i] * diff / den);
        est.omega_minus_printed.push(s[i] * diff / den_p);
        est.denominator_abs.push(den.norm());
        est.masked.push(!(den.norm() >= mask_abs));
    }
    Ok(est)
}

/// [`identify_from_relaxation_values`] on two discrete transforms sharing a grid.
pub fn identify_from_relaxation(
    up: &DiscreteLaplace,
    down: &DiscreteLaplace,
    mask_abs: f64,
) -> Result<RelaxationEstimate> {
    if up.omegas != down.omegas || up.damping != down.damping {
        return Err(Error::invalid(
            "up and down transforms are on different grids",
        ));
    }
    identify_from_relaxation_values(&up.points(), &up.values, &down.values, mask_abs)
}

/// Rate series `-v3_0 dv3/dt` of a relaxation run from its excited-state
/// population `q = (1 - v3) / 2`, by centred differences.
pub fn rate_series(trace: &MeasurementTrace) -> Result<MeasurementTrace> {
    let sign = match trace.scenario {
        // v3_0 = -1: rate = dv3/dt = -2 dq/dt
        Scenario::RelaxationDown => -2.0,
        // v3_0 = +1: rate = -dv3/dt = 2 dq/dt
        Scenario::RelaxationUp => 2.0,
        Scenario::CoherentOscillation => {
            return Err(Error::invalid("rate series needs a relaxation trace"));
        }
    };
    let d = crate::sim::centred_derivative(&trace.values, trace.dt)?;
    MeasurementTrace::new(
        trace.times.clone(),
        d.into_iter().map(|x| sign * x).collect(),
        trace.scenario,
    )
}

/// One spectrum sample pair from a stationary-rate measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenRuleSample {
    pub theta: f64,
    /// `Delta = EJ / sin(theta)`.
    pub delta: f64,
    /// `Phi_FT(+Delta)` from the down rate.
    pub phi_at_plus_delta: f64,
    /// `Phi_FT(-Delta)` from the up rate.
    pub phi_at_minus_delta: f64,
}

/// `Phi_FT(+-Delta) = rate / sin^2(theta)` for each `(theta, up, down)`.
pub fn golden_rule_sweep(
    ej: f64,
    measurements: &[(f64, f64, f64)],
) -> Result<Vec<GoldenRuleSample>> {
    if !(ej > 0.0) {
        return Err(Error::invalid("EJ must be positive"));
    }
    measurements
        .iter()
        .map(|&(theta, up, down)| {
            if !(theta > 0.0 && theta < PI) {
                return Err(Error::invalid(format!("theta = {theta} outside (0, pi)")));
            }
            if !(up >= 0.0 && down >= 0.0) {
                return Err(Error::invalid("rates must be non-negative"));
            }
            let s = theta.sin();
            let s2 = s * s;
            Ok(GoldenRuleSample {
                theta,
                delta: ej / s,
                phi_at_plus_delta: down / s2,
                phi_at_minus_delta: up / s2,
            })
        })
        .collect()
}
