//! Phenomenological noise correlation functions `Phi(tau) = Gamma(tau) + i Omega(tau)`.
//!
//! `Gamma` is even and `Omega` odd in `tau`. Every model exposes the
//! one-sided Laplace transforms `Gamma(s)`, `Omega(s)` used by the master
//! equation, and parametric kinds also expose their two-sided Fourier
//! spectra in closed form so that `Gamma_FT(w) = 2 Re Gamma(iw)` can be
//! checked against an independent route.
//!
//! Conventions: the Fourier transform is `F(w) = int f(t) e^{-iwt} dt`.
//! `Gamma_FT` is real; `Omega_FT` is purely imaginary and reported through
//! its imaginary coefficient `2 Im Omega(iw)`. The golden-rule spectrum
//! [`NoiseModel::phi_ft`] is half the two-sided transform of `Phi`, so that
//! `phi_ft(+-Delta) = Gamma+(0) -+ Omega-(0)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::special::exp_e1;
use crate::{Error, Result, C64};

/// Analytic Laplace-domain view of a noise source.
pub trait NoiseSpectra: Send + Sync {
    fn laplace_gamma(&self, s: C64) -> Result<C64>;
    fn laplace_omega(&self, s: C64) -> Result<C64>;
    /// Transforms are defined for `Re(s) >= valid_region()`.
    fn valid_region(&self) -> f64;
}

/// The noiseless environment: both transforms vanish identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Silent;

impl NoiseSpectra for Silent {
    fn laplace_gamma(&self, _s: C64) -> Result<C64> {
        Ok(C64::new(0.0, 0.0))
    }
    fn laplace_omega(&self, _s: C64) -> Result<C64> {
        Ok(C64::new(0.0, 0.0))
    }
    fn valid_region(&self) -> f64 {
        f64::NEG_INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianTerm {
    pub g2: f64,
    #[serde(rename = "tau_c_ps")]
    pub tau_c: f64,
}

/// Symmetric part `Gamma(tau)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaKind {
    /// `g2 exp(-|tau| / tau_c)`.
    Lorentzian(LorentzianTerm),
    /// `gamma_w delta(tau)`; the causal half of the delta is counted, so
    /// `Gamma(s) = gamma_w / 2`.
    White { gamma_w: f64 },
    /// Sum of Lorentzians, e.g. a 1/f band.
    LorentzianSum(Vec<LorentzianTerm>),
    /// Classical ohmic spectrum with exponential cutoff,
    /// `Gamma_FT(w) = 2 pi eta |w| exp(-|w| / w_c)`, i.e.
    /// `Gamma(tau) = 2 eta w_c^2 (1 - x^2) / (1 + x^2)^2` with `x = w_c tau`.
    Ohmic { eta: f64, omega_cut: f64 },
    /// Samples on a grid starting at `tau = 0`. `omega` may be empty.
    Tabulated {
        tau: Vec<f64>,
        gamma: Vec<f64>,
        omega: Vec<f64>,
    },
}

/// Antisymmetric part,
/// `Omega(tau) = -a exp(-|tau|/tau_c) sign(tau) (1 - exp(-|tau|/tau_r))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampedSineOmega {
    pub amplitude: f64,
    #[serde(rename = "tau_c_ps")]
    pub tau_c: f64,
    #[serde(rename = "tau_r_ps")]
    pub tau_r: f64,
}

impl DampedSineOmega {
    fn rates(&self) -> (f64, f64) {
        let a = 1.0 / self.tau_c;
        (a, a + 1.0 / self.tau_r)
    }

    fn at(&self, tau: f64) -> f64 {
        -self.amplitude * (-tau / self.tau_c).exp() * (1.0 - (-tau / self.tau_r).exp())
    }

    fn laplace(&self, s: C64) -> Result<C64> {
        let (a, b) = self.rates();
        Ok(-self.amplitude * (checked_inv(s + a, s)? - checked_inv(s + b, s)?))
    }

    /// `2 Im Omega(iw)` in closed form.
    fn ft_coefficient(&self, w: f64) -> f64 {
        let (a, b) = self.rates();
        2.0 * self.amplitude * (w / (a * a + w * w) - w / (b * b + w * w))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    kind: GammaKind,
    omega_asym: Option<DampedSineOmega>,
}

fn checked_inv(den: C64, s: C64) -> Result<C64> {
    if den.norm() <= 1e-14 * (1.0 + s.norm()) {
        return Err(Error::Singular {
            s,
            eigenvalue: None,
        });
    }
    Ok(den.inv())
}

fn positive(x: f64, what: &str) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid(format!(
            "{what} must be strictly positive, got {x}"
        )));
    }
    Ok(())
}

impl NoiseModel {
    pub fn new(kind: GammaKind, omega_asym: Option<DampedSineOmega>) -> Result<Self> {
        match &kind {
            GammaKind::Lorentzian(t) => {
                positive(t.g2, "g2")?;
                positive(t.tau_c, "tau_c")?;
            }
            GammaKind::White { gamma_w } => positive(*gamma_w, "gamma_w")?,
            GammaKind::LorentzianSum(terms) => {
                if terms.is_empty() {
                    return Err(Error::invalid("lorentzian_sum needs at least one term"));
                }
                for t in terms {
                    positive(t.g2, "g2")?;
                    positive(t.tau_c, "tau_c")?;
                }
            }
            GammaKind::Ohmic { eta, omega_cut } => {
                positive(*eta, "eta")?;
                positive(*omega_cut, "omega_cut")?;
            }
            GammaKind::Tabulated { tau, gamma, omega } => {
                if tau.len() < 2 || tau[0] != 0.0 {
                    return Err(Error::invalid(
                        "tabulated grid must start at tau = 0 with >= 2 points",
                    ));
                }
                if tau.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("tabulated grid must be strictly increasing"));
                }
                if gamma.len() != tau.len() || !(omega.is_empty() || omega.len() == tau.len()) {
                    return Err(Error::invalid("tabulated samples must match the tau grid"));
                }
            }
        }
        if let Some(o) = &omega_asym {
            positive(o.amplitude, "omega amplitude")?;
            positive(o.tau_c, "omega tau_c")?;
            positive(o.tau_r, "omega tau_r")?;
        }
        Ok(Self { kind, omega_asym })
    }

    pub fn lorentzian(g2: f64, tau_c: f64) -> Result<Self> {
        Self::new(GammaKind::Lorentzian(LorentzianTerm { g2, tau_c }), None)
    }

    pub fn white(gamma_w: f64) -> Result<Self> {
        Self::new(GammaKind::White { gamma_w }, None)
    }

    pub fn ohmic(eta: f64, omega_cut: f64) -> Result<Self> {
        Self::new(GammaKind::Ohmic { eta, omega_cut }, None)
    }

    /// Approximates `Gamma_FT(w) ~ amplitude / |w|` on `[omega_lo, omega_hi]`
    /// with `per_decade` Lorentzians per decade of corner frequency.
    pub fn one_over_f(
        amplitude: f64,
        omega_lo: f64,
        omega_hi: f64,
        per_decade: usize,
    ) -> Result<Self> {
        positive(amplitude, "amplitude")?;
        positive(omega_lo, "omega_lo")?;
        if !(omega_hi > omega_lo) {
            return Err(Error::invalid("1/f band needs omega_hi > omega_lo"));
        }
        if !(3..=6).contains(&per_decade) {
            return Err(Error::invalid(
                "1/f representation uses 3 to 6 Lorentzians per decade",
            ));
        }
        let step = std::f64::consts::LN_10 / per_decade as f64;
        // Extend one decade past each band edge so the band interior is flat.
        let lo = (omega_lo / 10.0).ln();
        let hi = (omega_hi * 10.0).ln();
        let n = ((hi - lo) / step).ceil() as usize + 1;
        // sum_i 2 g2 tau_i / (1 + w^2 tau_i^2) ~ (1/step) int 2 g2 dtau/(1+w^2 tau^2) = pi g2 / (step w)
        let g2 = amplitude * step / PI;
        let terms = (0..n)
            .map(|i| LorentzianTerm {
                g2,
                tau_c: (-(lo + i as f64 * step)).exp(),
            })
            .collect();
        Self::new(GammaKind::LorentzianSum(terms), None)
    }

    pub fn with_omega(mut self, omega: DampedSineOmega) -> Result<Self> {
        self.omega_asym = Some(omega);
        Self::new(self.kind, self.omega_asym)
    }

    pub fn kind(&self) -> &GammaKind {
        &self.kind
    }

    pub fn omega_asym(&self) -> Option<&DampedSineOmega> {
        self.omega_asym.as_ref()
    }

    pub fn is_parametric(&self) -> bool {
        !matches!(self.kind, GammaKind::Tabulated { .. })
    }

    pub fn is_white(&self) -> bool {
        matches!(self.kind, GammaKind::White { .. })
    }

    /// Weight of the local (delta-correlated) part: `gamma_w / 2` for white
    /// noise, zero otherwise.
    pub fn local_weight(&self) -> f64 {
        match self.kind {
            GammaKind::White { gamma_w } => 0.5 * gamma_w,
            _ => 0.0,
        }
    }

    /// Scales every coupling strength by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let kind = match &self.kind {
            GammaKind::Lorentzian(t) => GammaKind::Lorentzian(LorentzianTerm {
                g2: t.g2 * lambda,
                ..*t
            }),
            GammaKind::White { gamma_w } => GammaKind::White {
                gamma_w: gamma_w * lambda,
            },
            GammaKind::LorentzianSum(ts) => GammaKind::LorentzianSum(
                ts.iter()
                    .map(|t| LorentzianTerm {
                        g2: t.g2 * lambda,
                        ..*t
                    })
                    .collect(),
            ),
            GammaKind::Ohmic { eta, omega_cut } => GammaKind::Ohmic {
                eta: eta * lambda,
                omega_cut: *omega_cut,
            },
            GammaKind::Tabulated { tau, gamma, omega } => GammaKind::Tabulated {
                tau: tau.clone(),
                gamma: gamma.iter().map(|g| g * lambda).collect(),
                omega: omega.iter().map(|o| o * lambda).collect(),
            },
        };
        let omega_asym = self.omega_asym.map(|o| DampedSineOmega {
            amplitude: o.amplitude * lambda,
            ..o
        });
        Self::new(kind, omega_asym)
    }

    /// Shortest correlation time of the model; `None` for white noise.
    pub fn correlation_time(&self) -> Option<f64> {
        let gamma_tc = match &self.kind {
            GammaKind::Lorentzian(t) => Some(t.tau_c),
            GammaKind::White { .. } => None,
            GammaKind::LorentzianSum(ts) => ts.iter().map(|t| t.tau_c).reduce(f64::min),
            GammaKind::Ohmic { omega_cut, .. } => Some(1.0 / omega_cut),
            GammaKind::Tabulated { tau, gamma, .. } => {
                let g0 = gamma[0].abs();
                let idx = gamma
                    .iter()
                    .position(|g| g.abs() < g0 / std::f64::consts::E);
                Some(idx.map(|i| tau[i]).unwrap_or(*tau.last().unwrap()))
            }
        };
        let omega_tc = self.omega_asym.map(|o| o.tau_c.min(o.tau_r));
        match (gamma_tc, omega_tc) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// `Gamma(tau)` for `tau > 0` of the regular part (white noise: 0).
    fn gamma_positive(&self, tau: f64) -> Result<f64> {
        Ok(match &self.kind {
            GammaKind::Lorentzian(t) => t.g2 * (-tau / t.tau_c).exp(),
            GammaKind::White { .. } => 0.0,
            GammaKind::LorentzianSum(ts) => ts.iter().map(|t| t.g2 * (-tau / t.tau_c).exp()).sum(),
            GammaKind::Ohmic { eta, omega_cut } => {
                let x = omega_cut * tau;
                let d = 1.0 + x * x;
                2.0 * eta * omega_cut * omega_cut * (1.0 - x * x) / (d * d)
            }
            GammaKind::Tabulated {
                tau: grid, gamma, ..
            } => interpolate(grid, gamma, tau)?,
        })
    }

    fn omega_positive(&self, tau: f64) -> Result<f64> {
        let mut o = self.omega_asym.map(|o| o.at(tau)).unwrap_or(0.0);
        if let GammaKind::Tabulated {
            tau: grid, omega, ..
        } = &self.kind
        {
            if !omega.is_empty() {
                o += interpolate(grid, omega, tau)?;
            }
        }
        Ok(o)
    }

    /// `(Gamma(tau), Omega(tau))` with `Gamma` even and `Omega` odd.
    ///
    /// White noise has no finite value at `tau = 0` and is reported as
    /// singular there.
    pub fn correlation_at(&self, tau: f64) -> Result<(f64, f64)> {
        let a = tau.abs();
        if a == 0.0 && self.is_white() {
            return Err(Error::Singular {
                s: C64::new(0.0, 0.0),
                eigenvalue: None,
            });
        }
        let g = self.gamma_positive(a)?;
        let o = if a == 0.0 {
            0.0
        } else {
            tau.signum() * self.omega_positive(a)?
        };
        Ok((g, o))
    }

    pub fn laplace_at(&self, s: C64) -> Result<(C64, C64)> {
        Ok((self.laplace_gamma(s)?, self.laplace_omega(s)?))
    }

    /// `(Gamma_FT(w), 2 Im Omega(iw))` from the one-sided transforms.
    pub fn fourier_spectrum_at(&self, w: f64) -> Result<(f64, f64)> {
        let (g, o) = self.laplace_at(C64::new(0.0, w))?;
        Ok((2.0 * g.re, 2.0 * o.im))
    }

    /// Closed-form two-sided spectra `(Gamma_FT(w), 2 Im Omega(iw))`,
    /// independent of the Laplace route. `None` for tabulated models.
    pub fn spectral_density(&self, w: f64) -> Option<(f64, f64)> {
        let g = match &self.kind {
            GammaKind::Lorentzian(t) => lorentz_ft(t, w),
            GammaKind::White { gamma_w } => *gamma_w,
            GammaKind::LorentzianSum(ts) => ts.iter().map(|t| lorentz_ft(t, w)).sum(),
            GammaKind::Ohmic { eta, omega_cut } => {
                2.0 * PI * eta * w.abs() * (-w.abs() / omega_cut).exp()
            }
            GammaKind::Tabulated { .. } => return None,
        };
        let o = self.omega_asym.map(|o| o.ft_coefficient(w)).unwrap_or(0.0);
        Some((g, o))
    }

    /// Golden-rule spectrum `Re Gamma(iw) - Im Omega(iw)`, half the two-sided
    /// transform of `Phi`. `phi_ft(Delta)` is the down rate, `phi_ft(-Delta)`
    /// the up rate at the optimal point.
    pub fn phi_ft(&self, w: f64) -> Result<f64> {
        let (g, o) = self.laplace_at(C64::new(0.0, w))?;
        Ok(g.re - o.im)
    }

    /// `(Gamma(tau), Omega(tau))` without the delta-correlated part, which
    /// the time-domain integrator treats as a local term.
    pub fn regular_part_at(&self, tau: f64) -> Result<(f64, f64)> {
        if self.is_white() {
            let a = tau.abs();
            let o = if a == 0.0 {
                0.0
            } else {
                tau.signum() * self.omega_positive(a)?
            };
            return Ok((0.0, o));
        }
        self.correlation_at(tau)
    }

    /// Longest decay scale of the model, used to bound kernel scans.
    fn max_timescale(&self) -> f64 {
        let g = match &self.kind {
            GammaKind::Lorentzian(t) => t.tau_c,
            GammaKind::White { .. } => 0.0,
            GammaKind::LorentzianSum(ts) => ts.iter().map(|t| t.tau_c).fold(0.0, f64::max),
            // algebraic 1/tau^2 tail
            GammaKind::Ohmic { omega_cut, .. } => 2e3 / omega_cut,
            GammaKind::Tabulated { tau, .. } => *tau.last().unwrap() / 50.0,
        };
        let o = self.omega_asym.map(|o| o.tau_c).unwrap_or(0.0);
        g.max(o)
    }

    /// Lag beyond which `|Gamma| + |Omega| < rel_tol * (Gamma(0) + max|Omega|)`.
    /// Zero for white noise without an antisymmetric part.
    pub fn default_kernel_cut(&self, rel_tol: f64) -> f64 {
        let scan_end = 50.0 * self.max_timescale();
        if scan_end == 0.0 {
            return 0.0;
        }
        let n = 200_000;
        let h = scan_end / n as f64;
        let reg = |t: f64| self.regular_part_at(t).unwrap_or((0.0, 0.0));
        let omax = (0..=n)
            .map(|i| reg(i as f64 * h).1.abs())
            .fold(0.0, f64::max);
        let scale = reg(0.0).0.abs() + omax;
        let last_big = (0..=n)
            .rev()
            .map(|i| i as f64 * h)
            .find(|&t| {
                let (g, o) = reg(t);
                g.abs() + o.abs() >= rel_tol * scale
            })
            .unwrap_or(0.0);
        (last_big + h).min(scan_end)
    }

    /// Whether a tabulated kernel has decayed by its last grid point.
    pub fn decays_within_grid(&self, rel_tol: f64) -> bool {
        match &self.kind {
            GammaKind::Tabulated { gamma, omega, .. } => {
                let scale = gamma
                    .iter()
                    .chain(omega.iter())
                    .fold(0.0f64, |m, x| m.max(x.abs()));
                let last =
                    gamma.last().unwrap().abs() + omega.last().map(|x| x.abs()).unwrap_or(0.0);
                last <= rel_tol * scale
            }
            _ => true,
        }
    }
}

fn lorentz_ft(t: &LorentzianTerm, w: f64) -> f64 {
    2.0 * t.g2 * t.tau_c / (1.0 + (w * t.tau_c).powi(2))
}

fn interpolate(grid: &[f64], vals: &[f64], tau: f64) -> Result<f64> {
    let end = *grid.last().unwrap();
    if tau > end {
        return Err(Error::Extrapolation { tau, end });
    }
    let i = match grid.binary_search_by(|g| g.partial_cmp(&tau).unwrap()) {
        Ok(i) => return Ok(vals[i]),
        Err(i) => i,
    };
    let (t0, t1) = (grid[i - 1], grid[i]);
    let w = (tau - t0) / (t1 - t0);
    Ok(vals[i - 1] * (1.0 - w) + vals[i] * w)
}

fn trapezoid_laplace(grid: &[f64], vals: &[f64], s: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..grid.len() - 1 {
        let h = grid[k + 1] - grid[k];
        let a = (-s * grid[k]).exp() * vals[k];
        let b = (-s * grid[k + 1]).exp() * vals[k + 1];
        acc += (a + b) * (0.5 * h);
    }
    acc
}

fn ohmic_laplace(eta: f64, omega_cut: f64, s: C64) -> Result<C64> {
    if s.norm() == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    if s.re < 0.0 {
        return Err(Error::invalid(format!(
            "ohmic transform needs Re(s) >= 0, got s = {s}"
        )));
    }
    // -i s / w_c and i s / w_c, built componentwise so that on the imaginary
    // axis the zero imaginary parts carry the signs of the Re(s) > 0 limit
    let zp = C64::new(s.im / omega_cut, -s.re / omega_cut);
    let zm = C64::new(-s.im / omega_cut, s.re / omega_cut);
    Ok(s * eta * (exp_e1(zp) + exp_e1(zm)))
}

impl NoiseSpectra for NoiseModel {
    fn laplace_gamma(&self, s: C64) -> Result<C64> {
        match &self.kind {
            GammaKind::Lorentzian(t) => Ok(t.g2 * checked_inv(s + 1.0 / t.tau_c, s)?),
            GammaKind::White { gamma_w } => Ok(C64::new(0.5 * gamma_w, 0.0)),
            GammaKind::LorentzianSum(ts) => ts
                .iter()
                .map(|t| checked_inv(s + 1.0 / t.tau_c, s).map(|x| x * t.g2))
                .sum(),
            GammaKind::Ohmic { eta, omega_cut } => ohmic_laplace(*eta, *omega_cut, s),
            GammaKind::Tabulated { tau, gamma, .. } => {
                if s.re < 0.0 {
                    return Err(Error::invalid("tabulated transform needs Re(s) >= 0"));
                }
                Ok(trapezoid_laplace(tau, gamma, s))
            }
        }
    }

    fn laplace_omega(&self, s: C64) -> Result<C64> {
        let mut o = match &self.omega_asym {
            Some(om) => om.laplace(s)?,
            None => C64::new(0.0, 0.0),
        };
        if let GammaKind::Tabulated { tau, omega, .. } = &self.kind {
            if !omega.is_empty() {
                if s.re < 0.0 {
                    return Err(Error::invalid("tabulated transform needs Re(s) >= 0"));
                }
                o += trapezoid_laplace(tau, omega, s);
            }
        }
        Ok(o)
    }

    fn valid_region(&self) -> f64 {
        let g = match &self.kind {
            GammaKind::Lorentzian(t) => -1.0 / t.tau_c,
            GammaKind::White { .. } => f64::NEG_INFINITY,
            GammaKind::LorentzianSum(ts) => ts
                .iter()
                .map(|t| -1.0 / t.tau_c)
                .fold(f64::NEG_INFINITY, f64::max),
            GammaKind::Ohmic { .. } | GammaKind::Tabulated { .. } => 0.0,
        };
        match &self.omega_asym {
            Some(o) => g.max(-1.0 / o.tau_c),
            None => g,
        }
    }
}

/// `Gamma+-(s)`, `Omega+-(s)`: transforms of the correlations modulated by
/// `cos(Delta t)` and `sin(Delta t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulatedSpectra {
    pub gamma_plus: C64,
    pub gamma_minus: C64,
    pub omega_plus: C64,
    pub omega_minus: C64,
}

pub fn modulated_at<N: NoiseSpectra + ?Sized>(
    spectra: &N,
    delta: f64,
    s: C64,
) -> Result<ModulatedSpectra> {
    let shift = C64::new(0.0, delta);
    let gp = spectra.laplace_gamma(s + shift)?;
    let gm = spectra.laplace_gamma(s - shift)?;
    let op = spectra.laplace_omega(s + shift)?;
    let om = spectra.laplace_omega(s - shift)?;
    let two_i = C64::new(0.0, 2.0);
    Ok(ModulatedSpectra {
        gamma_plus: (gp + gm) * 0.5,
        gamma_minus: (gp - gm) / two_i,
        omega_plus: (op + om) * 0.5,
        omega_minus: (op - om) / two_i,
    })
}

// JSON description -------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub frequency: String,
    pub time: String,
}

/// JSON form of a [`NoiseModel`]. Frequencies and rates in rad/ps, times in ps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseModelDoc {
    Lorentzian {
        g2: f64,
        tau_c_ps: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_asym: Option<DampedSineOmega>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<Units>,
    },
    White {
        gamma_w: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_asym: Option<DampedSineOmega>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<Units>,
    },
    LorentzianSum {
        terms: Vec<LorentzianTerm>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_asym: Option<DampedSineOmega>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<Units>,
    },
    OneOverF {
        amplitude: f64,
        omega_lo: f64,
        omega_hi: f64,
        per_decade: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_asym: Option<DampedSineOmega>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<Units>,
    },
    Ohmic {
        eta: f64,
        omega_cut: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_asym: Option<DampedSineOmega>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<Units>,
    },
    Tabulated {
        tau_ps: Vec<f64>,
        gamma: Vec<f64>,
        #[serde(default)]
        omega: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_asym: Option<DampedSineOmega>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<Units>,
    },
}

fn check_units(u: &Option<Units>) -> Result<()> {
    if let Some(u) = u {
        if u.frequency != "rad/ps" || u.time != "ps" {
            return Err(Error::invalid(format!(
                "noise model units must be rad/ps and ps, got {} and {}",
                u.frequency, u.time
            )));
        }
    }
    Ok(())
}

impl NoiseModelDoc {
    pub fn lorentzian(g2: f64, tau_c_ps: f64) -> Self {
        NoiseModelDoc::Lorentzian {
            g2,
            tau_c_ps,
            omega_asym: None,
            units: None,
        }
    }

    pub fn build(&self) -> Result<NoiseModel> {
        match self {
            NoiseModelDoc::Lorentzian {
                g2,
                tau_c_ps,
                omega_asym,
                units,
            } => {
                check_units(units)?;
                NoiseModel::new(
                    GammaKind::Lorentzian(LorentzianTerm {
                        g2: *g2,
                        tau_c: *tau_c_ps,
                    }),
                    *omega_asym,
                )
            }
            NoiseModelDoc::White {
                gamma_w,
                omega_asym,
                units,
            } => {
                check_units(units)?;
                NoiseModel::new(GammaKind::White { gamma_w: *gamma_w }, *omega_asym)
            }
            NoiseModelDoc::LorentzianSum {
                terms,
                omega_asym,
                units,
            } => {
                check_units(units)?;
                NoiseModel::new(GammaKind::LorentzianSum(terms.clone()), *omega_asym)
            }
            NoiseModelDoc::OneOverF {
                amplitude,
                omega_lo,
                omega_hi,
                per_decade,
                omega_asym,
                units,
            } => {
                check_units(units)?;
                let m = NoiseModel::one_over_f(*amplitude, *omega_lo, *omega_hi, *per_decade)?;
                NoiseModel::new(m.kind, *omega_asym)
            }
            NoiseModelDoc::Ohmic {
                eta,
                omega_cut,
                omega_asym,
                units,
            } => {
                check_units(units)?;
                NoiseModel::new(
                    GammaKind::Ohmic {
                        eta: *eta,
                        omega_cut: *omega_cut,
                    },
                    *omega_asym,
                )
            }
            NoiseModelDoc::Tabulated {
                tau_ps,
                gamma,
                omega,
                omega_asym,
                units,
            } => {
                check_units(units)?;
                NoiseModel::new(
                    GammaKind::Tabulated {
                        tau: tau_ps.clone(),
                        gamma: gamma.clone(),
                        omega: omega.clone(),
                    },
                    *omega_asym,
                )
            }
        }
    }

    pub fn from_json(text: &str) -> Result<NoiseModel> {
        let doc: NoiseModelDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("noise model: {e}")))?;
        doc.build()
    }
}
