//! Time-domain integration of the memory-kernel master equation
//!
//! `dv/dt = L0 v + L1 int_0^t M(t - t') v(t') dt'`,
//! `M(tau) = Gamma(tau) e^{tau L0} L1 + Omega(tau) e^{tau L0} L1+`,
//!
//! and a Monte Carlo reference for classical Ornstein-Uhlenbeck noise.

use std::io::Write;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{BlochVector, Mat2};
use crate::freq::SystemSpec;
use crate::noise::{GammaKind, NoiseModel};
use crate::{Error, Result};

/// Relative kernel magnitude below which memory is dropped.
pub const KERNEL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Implicit exponential trapezoid (default).
    TrapezoidVolterra,
    /// Explicit predictor with a single trapezoid correction.
    PredictorCorrector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(rename = "dt_ps")]
    pub dt: f64,
    #[serde(rename = "horizon_ps")]
    pub horizon: f64,
    /// Memory length in ps; derived from the kernel decay when absent.
    #[serde(
        rename = "kernel_cut_ps",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub kernel_cut: Option<f64>,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
}

fn default_scheme() -> Scheme {
    Scheme::TrapezoidVolterra
}

impl SimConfig {
    pub fn new(dt: f64, horizon: f64) -> Result<Self> {
        let cfg = Self {
            dt,
            horizon,
            kernel_cut: None,
            scheme: Scheme::TrapezoidVolterra,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_kernel_cut(mut self, cut: f64) -> Result<Self> {
        self.kernel_cut = Some(cut);
        self.validate()?;
        Ok(self)
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::StepSize(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.horizon >= self.dt) {
            return Err(Error::StepSize(format!(
                "horizon {} shorter than dt {}",
                self.horizon, self.dt
            )));
        }
        if let Some(c) = self.kernel_cut {
            if !(c >= 0.0) {
                return Err(Error::invalid(format!("kernel_cut must be >= 0, got {c}")));
            }
        }
        Ok(())
    }

    /// `dt <= 2 pi / (20 Delta)` and `dt <= tau_c / 10`.
    pub fn check_resolution(&self, delta: f64, tau_c: Option<f64>) -> Result<()> {
        self.validate()?;
        let slack = 1.0 + 1e-9;
        let osc = std::f64::consts::TAU / (20.0 * delta);
        if delta > 0.0 && self.dt > osc * slack {
            return Err(Error::StepSize(format!(
                "dt = {} does not resolve the oscillation (needs <= {osc:.6e})",
                self.dt
            )));
        }
        if let Some(tc) = tau_c {
            if self.dt > tc / 10.0 * slack {
                return Err(Error::StepSize(format!(
                    "dt = {} does not resolve the correlation time (needs <= {:.6e})",
                    self.dt,
                    tc / 10.0
                )));
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }
}

/// Uniformly sampled states with `q = (1 - v3) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochVector>,
    pub q: Vec<f64>,
}

impl Trajectory {
    fn from_states(dt: f64, states: Vec<BlochVector>) -> Self {
        let times = (0..states.len()).map(|k| k as f64 * dt).collect();
        let q = states.iter().map(|v| v.charge()).collect();
        Self { times, states, q }
    }

    pub fn dt(&self) -> f64 {
        if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with header `time_ps,v0,v1,v2,v3,q`, full round-trip precision.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        w.write_record(["time_ps", "v0", "v1", "v2", "v3", "q"])
            .map_err(io)?;
        for ((t, v), q) in self.times.iter().zip(&self.states).zip(&self.q) {
            let c = v.components();
            let row = [*t, c[0], c[1], c[2], c[3], *q].map(|x| format!("{x:e}"));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::io("<trajectory csv>", e))?;
        Ok(())
    }
}

fn lower3(m: &Matrix4<f64>) -> Matrix3<f64> {
    m.fixed_view::<3, 3>(1, 1).into_owned()
}

/// Integrates the master equation on `[0, horizon]` from `sys.v0()`.
///
/// The memory integral uses trapezoid weights on precomputed kernels
/// `K_j = L1 M(j dt)`; the free evolution is propagated exactly, so the
/// zero-noise solution is reproduced to round-off. A white-noise part of the
/// model enters as the local term `(gamma_w / 2) L1 L1`.
pub fn integrate_volterra(
    sys: &SystemSpec,
    noise: &NoiseModel,
    cfg: &SimConfig,
) -> Result<Trajectory> {
    cfg.check_resolution(sys.gap(), noise.correlation_time())?;
    if let GammaKind::Tabulated { .. } = noise.kind() {
        if !noise.decays_within_grid(1e-4) {
            return Err(Error::invalid(
                "tabulated correlation does not decay within its grid",
            ));
        }
    }
    let dt = cfg.dt;
    let n_steps = cfg.steps();
    let cut = match cfg.kernel_cut {
        Some(c) => c,
        None => noise.default_kernel_cut(KERNEL_TOL),
    };
    let n_cut = ((cut / dt).ceil() as usize).min(n_steps);
    if let GammaKind::Tabulated { tau, .. } = noise.kind() {
        let end = *tau.last().unwrap();
        if n_cut as f64 * dt > end {
            return Err(Error::Extrapolation {
                tau: n_cut as f64 * dt,
                end,
            });
        }
    }

    let l1 = *sys.l1().matrix();
    let l1p = *sys.l1_plus().matrix();
    let eig = sys.eig0();
    let kernels: Vec<Matrix4<f64>> = (0..=n_cut)
        .map(|j| {
            let tau = j as f64 * dt;
            let (g, o) = noise.regular_part_at(tau)?;
            let e = eig.propagator(tau);
            Ok(l1 * (e * (l1 * g + l1p * o)))
        })
        .collect::<Result<_>>()?;
    let w_local = l1 * l1 * noise.local_weight();
    let prop = eig.propagator(dt);
    let k0 = kernels[0];

    // Implicit part of v_{n+1}: A = I - dt/2 W - dt^2/4 K_0.
    let a = Matrix4::identity() - w_local * (0.5 * dt) - k0 * (0.25 * dt * dt);
    let a3 = lower3(&a);
    let a3_lu = a3.lu();
    if a3_lu.determinant().abs() < 1e-300 {
        return Err(Error::StepSize("implicit step matrix is singular".into()));
    }

    let mut states: Vec<Vector4<f64>> = Vec::with_capacity(n_steps + 1);
    states.push(*sys.v0().as_vector());

    // history part of dt * sum' K_j v_{n-j}, excluding j = 0
    let history = |states: &[Vector4<f64>], n: usize| -> Vector4<f64> {
        let mut acc = Vector4::zeros();
        let jmax = n.min(n_cut);
        for j in 1..=jmax {
            let w = if j == n || j == n_cut { 0.5 } else { 1.0 };
            acc += kernels[j] * states[n - j] * w;
        }
        acc * dt
    };
    let local = |v: &Vector4<f64>| -> Vector4<f64> { k0 * v * (0.5 * dt) + w_local * v };

    let mut f_prev = local(&states[0]);
    for n in 0..n_steps {
        let vn = states[n];
        let hist_next = history(&states, n + 1);
        let known = prop * (vn + f_prev * (0.5 * dt));
        let next = match cfg.scheme {
            Scheme::TrapezoidVolterra => {
                let rhs = known + hist_next * (0.5 * dt);
                let r3 = Vector3::new(rhs[1], rhs[2], rhs[3]) - a.fixed_view::<3, 1>(1, 0) * 1.0;
                let x = a3_lu
                    .solve(&r3)
                    .ok_or_else(|| Error::StepSize("implicit solve failed".into()))?;
                Vector4::new(1.0, x[0], x[1], x[2])
            }
            Scheme::PredictorCorrector => {
                let pred = prop * (vn + f_prev * dt);
                let f_pred = hist_next + local(&pred);
                let mut v = known + f_pred * (0.5 * dt);
                v[0] = 1.0;
                v
            }
        };
        states.push(next);
        f_prev = hist_next + local(&next);
    }

    Ok(Trajectory::from_states(
        dt,
        states.into_iter().map(BlochVector::from_raw).collect(),
    ))
}

/// Noiseless evolution `v(t) = exp(t L0) v0` on the integration grid.
pub fn free_evolution(sys: &SystemSpec, cfg: &SimConfig) -> Result<Trajectory> {
    cfg.check_resolution(sys.gap(), None)?;
    let v0 = *sys.v0().as_vector();
    let states = (0..=cfg.steps())
        .map(|k| {
            let mut v = sys.eig0().propagator(k as f64 * cfg.dt) * v0;
            v[0] = 1.0;
            BlochVector::from_raw(v)
        })
        .collect();
    Ok(Trajectory::from_states(cfg.dt, states))
}

/// `dc = -c/tau_c dt + noise`, stationary variance `g2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuProcess {
    pub g2: f64,
    #[serde(rename = "tau_c_ps")]
    pub tau_c: f64,
}

impl OuProcess {
    pub fn new(g2: f64, tau_c: f64) -> Result<Self> {
        if !(g2 >= 0.0) || !(tau_c > 0.0) {
            return Err(Error::invalid("OU process needs g2 >= 0 and tau_c > 0"));
        }
        Ok(Self { g2, tau_c })
    }

    /// The matching Born-model correlation `g2 exp(-|tau|/tau_c)`.
    pub fn noise_model(&self) -> Result<NoiseModel> {
        NoiseModel::lorentzian(self.g2, self.tau_c)
    }
}

/// Ensemble mean of Monte Carlo trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub mean: Trajectory,
    /// Standard error of `q` at each time.
    pub stderr: Vec<f64>,
    pub n_traj: usize,
    pub seed: u64,
}

const CHUNK: usize = 64;

fn bloch_axis(h: &Mat2) -> Vector3<f64> {
    use crate::bloch::{sigma_x, sigma_y, sigma_z};
    Vector3::new(
        (h * sigma_x()).trace().re,
        (h * sigma_y()).trace().re,
        (h * sigma_z()).trace().re,
    )
}

fn rotate(v: &Vector3<f64>, omega: &Vector3<f64>, dt: f64) -> Vector3<f64> {
    let rate = omega.norm();
    if rate == 0.0 {
        return *v;
    }
    let k = omega / rate;
    let (s, c) = (rate * dt).sin_cos();
    v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
}

/// Averages `n_traj` trajectories of `dv/dt = (L0 + c(t) L1) v` with `c`
/// an OU process.
///
/// Each step rotates the Bloch vector exactly about the axis of
/// `H0 + c_mid H1` with `c_mid` the midpoint of the exact OU update. Stream
/// `k` of a ChaCha8 generator seeded with `seed` drives trajectory `k`, and
/// partial sums are reduced in trajectory order, so the result does not
/// depend on the number of worker threads.
pub fn monte_carlo_reference(
    h0: &Mat2,
    h1: &Mat2,
    process: &OuProcess,
    v0: &BlochVector,
    n_traj: usize,
    cfg: &SimConfig,
    seed: u64,
) -> Result<EnsembleResult> {
    if n_traj < 2 {
        return Err(Error::invalid(
            "Monte Carlo needs at least two trajectories for error bars",
        ));
    }
    let delta = 2.0 * (0.5 * bloch_axis(h0)).norm();
    cfg.check_resolution(delta, Some(process.tau_c))?;
    let dt = cfg.dt;
    let n_steps = cfg.steps();
    // -i[H, .] with H = b.sigma rotates v about b at rate 2|b| = |Tr(H sigma)|
    let b0 = bloch_axis(h0);
    let b1 = bloch_axis(h1);
    let decay = (-dt / process.tau_c).exp();
    let kick = process.g2.sqrt() * (1.0 - decay * decay).sqrt();
    let g = process.g2.sqrt();
    let start = Vector3::new(v0.components()[1], v0.components()[2], v0.components()[3]);

    let n_chunks = n_traj.div_ceil(CHUNK);
    let partials: Vec<(Vec<Vector3<f64>>, Vec<f64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut sum = vec![Vector3::zeros(); n_steps + 1];
            let mut sq = vec![0.0; n_steps + 1];
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n_traj);
            for traj in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(traj as u64);
                let z0: f64 = StandardNormal.sample(&mut rng);
                let mut c = g * z0;
                let mut v = start;
                let mut record = |k: usize, v: &Vector3<f64>| {
                    sum[k] += v;
                    let q = 0.5 * (1.0 - v[2]);
                    sq[k] += q * q;
                };
                record(0, &v);
                for k in 1..=n_steps {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    let c_next = c * decay + kick * xi;
                    let omega = b0 + b1 * (0.5 * (c + c_next));
                    v = rotate(&v, &omega, dt);
                    c = c_next;
                    record(k, &v);
                }
            }
            (sum, sq)
        })
        .collect();

    let mut sum = vec![Vector3::zeros(); n_steps + 1];
    let mut sq = vec![0.0; n_steps + 1];
    for (s, q) in &partials {
        for k in 0..=n_steps {
            sum[k] += s[k];
            sq[k] += q[k];
        }
    }
    let n = n_traj as f64;
    let states: Vec<BlochVector> = sum
        .iter()
        .map(|s| BlochVector::new(s[0] / n, s[1] / n, s[2] / n))
        .collect();
    let mean = Trajectory::from_states(dt, states);
    let stderr = mean
        .q
        .iter()
        .zip(&sq)
        .map(|(m, s2)| ((s2 / n - m * m).max(0.0) * n / (n - 1.0) / n).sqrt())
        .collect();
    Ok(EnsembleResult {
        mean,
        stderr,
        n_traj,
        seed,
    })
}

/// Derivative of uniformly sampled data: centred differences inside,
/// second-order one-sided differences at the ends.
pub fn centred_derivative(values: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::invalid("derivative needs at least three samples"));
    }
    let v = values;
    let mut out = Vec::with_capacity(n);
    out.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt));
    for k in 1..n - 1 {
        out.push((v[k + 1] - v[k - 1]) / (2.0 * dt));
    }
    out.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dt));
    Ok(out)
}

/// `(1/2) dv3/dt`, the time-domain z-rate.
pub fn transition_rate_trace(traj: &Trajectory) -> Result<Vec<f64>> {
    let v3: Vec<f64> = traj.states.iter().map(|v| v.v3()).collect();
    Ok(centred_derivative(&v3, traj.dt())?
        .into_iter()
        .map(|d| 0.5 * d)
        .collect())
}
