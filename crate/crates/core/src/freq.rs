//! Laplace-domain response of the Born master equation,
//! `(sI - L0 - L1 K(s)) v(s) = v0` with
//! `K(s) = Gamma(sI - L0) L1 + Omega(sI - L0) L1+`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::bloch::{
    anticommutator_superop, commutator_superop, matrix_s_function, BlochVector, CMat4, CVec4, Mat2,
    SuperopEigendecomposition, Superoperator,
};
use crate::noise::NoiseSpectra;
use crate::{Error, Result, C64};

const POLE_CONDITION: f64 = 1e12;
const RESIDUAL_TOL: f64 = 1e-10;

/// Unperturbed generator, coupling superoperators, noise and initial state.
#[derive(Clone)]
pub struct SystemSpec {
    l0: Superoperator,
    l1: Superoperator,
    l1_plus: Superoperator,
    eig0: SuperopEigendecomposition,
    noise: Arc<dyn NoiseSpectra>,
    v0: BlochVector,
}

impl std::fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SystemSpec")
            .field("l0", &self.l0)
            .field("l1", &self.l1)
            .field("v0", &self.v0)
            .finish_non_exhaustive()
    }
}

fn coupling_from_anticommutator(l1_plus: &Superoperator) -> Mat2 {
    // {H1, I/2} = H1, so column 0 holds the components of H1.
    let col = l1_plus.matrix().column(0).into_owned();
    let basis = crate::bloch::HermitianBasis::pauli();
    let mut h = Mat2::zeros();
    for (i, m) in basis.elements().iter().enumerate() {
        h += m * C64::new(0.5 * col[i], 0.0);
    }
    h
}

impl SystemSpec {
    pub fn new(
        h0: &Mat2,
        h1: &Mat2,
        noise: Arc<dyn NoiseSpectra>,
        v0: BlochVector,
    ) -> Result<Self> {
        let l0 = commutator_superop(h0)?;
        let eig0 = SuperopEigendecomposition::from_hamiltonian(h0)?;
        let l1 = commutator_superop(h1)?;
        let l1_plus = anticommutator_superop(h1)?;
        Self::from_parts(l0, l1, l1_plus, eig0, noise, v0)
    }

    /// Checks that `eig0` decomposes `l0` and that `l1`, `l1_plus` come
    /// from one coupling operator.
    pub fn from_parts(
        l0: Superoperator,
        l1: Superoperator,
        l1_plus: Superoperator,
        eig0: SuperopEigendecomposition,
        noise: Arc<dyn NoiseSpectra>,
        v0: BlochVector,
    ) -> Result<Self> {
        let err = eig0.reconstruction_error(&l0);
        if !(err <= 1e-12) {
            return Err(Error::invalid(format!(
                "eigendecomposition error {err:.3e} exceeds 1e-12"
            )));
        }
        let h1 = coupling_from_anticommutator(&l1_plus);
        let scale = 1.0 + l1_plus.matrix().norm();
        let d1 = (commutator_superop(&h1)?.matrix() - l1.matrix()).norm();
        let d2 = (anticommutator_superop(&h1)?.matrix() - l1_plus.matrix()).norm();
        if d1 > 1e-12 * scale || d2 > 1e-12 * scale {
            return Err(Error::invalid(
                "L1 and L1+ do not derive from the same coupling operator",
            ));
        }
        Ok(Self {
            l0,
            l1,
            l1_plus,
            eig0,
            noise,
            v0,
        })
    }

    pub fn l0(&self) -> &Superoperator {
        &self.l0
    }

    pub fn l1(&self) -> &Superoperator {
        &self.l1
    }

    pub fn l1_plus(&self) -> &Superoperator {
        &self.l1_plus
    }

    pub fn eig0(&self) -> &SuperopEigendecomposition {
        &self.eig0
    }

    pub fn noise(&self) -> &Arc<dyn NoiseSpectra> {
        &self.noise
    }

    pub fn v0(&self) -> &BlochVector {
        &self.v0
    }

    pub fn with_v0(&self, v0: BlochVector) -> Self {
        Self { v0, ..self.clone() }
    }

    pub fn with_noise(&self, noise: Arc<dyn NoiseSpectra>) -> Self {
        Self {
            noise,
            ..self.clone()
        }
    }

    /// Largest oscillation frequency of the free evolution.
    pub fn gap(&self) -> f64 {
        self.eig0
            .eigenvalues()
            .iter()
            .map(|x| x.im.abs())
            .fold(0.0, f64::max)
    }

    fn v0_complex(&self) -> CVec4 {
        self.v0.as_vector().map(|x| C64::new(x, 0.0))
    }
}

pub fn kernel_k(sys: &SystemSpec, s: C64) -> Result<CMat4> {
    let noise = &sys.noise;
    let g = matrix_s_function(|z| noise.laplace_gamma(z), &sys.eig0, s)?;
    let o = matrix_s_function(|z| noise.laplace_omega(z), &sys.eig0, s)?;
    Ok(g * sys.l1.complex() + o * sys.l1_plus.complex())
}

fn system_matrix(sys: &SystemSpec, s: C64) -> Result<CMat4> {
    let k = kernel_k(sys, s)?;
    Ok(CMat4::identity() * s - sys.l0.complex() - sys.l1.complex() * k)
}

fn condition_number(m: &CMat4) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `v(s)`, solved by full-pivot LU with a condition and residual check.
pub fn bloch_response(sys: &SystemSpec, s: C64) -> Result<CVec4> {
    let a = system_matrix(sys, s)?;
    let condition = condition_number(&a);
    if !(condition <= POLE_CONDITION) {
        return Err(Error::Pole { s, condition });
    }
    let b = sys.v0_complex();
    let v = a
        .full_piv_lu()
        .solve(&b)
        .ok_or(Error::Pole { s, condition })?;
    let residual = (a * v - b).norm();
    let scale = a.norm() * v.norm() + b.norm();
    if !(residual <= RESIDUAL_TOL * scale) {
        return Err(Error::Pole { s, condition });
    }
    Ok(v)
}

/// `gamma(s) = s v(s) - v0`.
pub fn rate_response(sys: &SystemSpec, s: C64) -> Result<CVec4> {
    Ok(bloch_response(sys, s)? * s - sys.v0_complex())
}

/// `(s v3(s) - v3_0) / 2`.
pub fn z_rate(sys: &SystemSpec, s: C64) -> Result<C64> {
    Ok(rate_response(sys, s)?[3] * 0.5)
}

/// `-v3_0 (s v3(s) - v3_0)`: the Laplace transform of `dv3/dt` signed so
/// that decay out of the initial state counts positive. With `v3_0 = -1`
/// in the eigenframe this is the down-rate response, with `v3_0 = +1` the
/// up-rate response.
pub fn transition_rate(sys: &SystemSpec, s: C64) -> Result<C64> {
    let v3 = sys.v0.v3();
    Ok(-rate_response(sys, s)?[3] * v3)
}

/// Component of the response fed to [`final_value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Bloch(usize),
    Rate(usize),
    ZRate,
    TransitionRate,
}

fn component_at(sys: &SystemSpec, which: Component, s: C64) -> Result<C64> {
    match which {
        Component::Bloch(i) => Ok(bloch_response(sys, s)?[i]),
        Component::Rate(i) => Ok(rate_response(sys, s)?[i]),
        Component::ZRate => z_rate(sys, s),
        Component::TransitionRate => transition_rate(sys, s),
    }
}

const LADDER: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

fn richardson_tableau(t0: &[f64], abs_floor: f64) -> Result<f64> {
    let mut table = t0.to_vec();
    for k in 1..=2 {
        let r = 10f64.powi(k);
        table = table
            .windows(2)
            .map(|w| (r * w[1] - w[0]) / (r - 1.0))
            .collect();
    }
    let (a, b) = (table[0], table[1]);
    let mag = t0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = (1e-2 * b.abs().max(1e-9 * mag)).max(abs_floor).max(1e-300);
    if !b.is_finite() || (a - b).abs() > tol {
        return Err(Error::NonConvergent {
            iterates: t0.to_vec(),
        });
    }
    Ok(b)
}

/// `lim_{s -> 0+} f(s)` from samples at `s = h * scale`, `h` in
/// `{1e-2, 1e-3, 1e-4, 1e-5}`, by Richardson extrapolation removing the
/// `O(s)` and `O(s^2)` terms. `scale` must be small against the distance
/// from the origin to the nearest singularity of `f`.
pub fn richardson_limit(scale: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if !(scale > 0.0) {
        return Err(Error::invalid("extrapolation scale must be positive"));
    }
    let t0: Vec<f64> = LADDER.iter().map(|h| f(h * scale)).collect::<Result<_>>()?;
    richardson_tableau(&t0, 0.0)
}

/// Generator `L0 + L1 K(s)` of the Laplace-domain equation.
fn generator(sys: &SystemSpec, s: f64) -> Result<CMat4> {
    Ok(sys.l0.complex() + sys.l1.complex() * kernel_k(sys, C64::new(s, 0.0))?)
}

/// Scale on which the noise transforms vary near the origin.
fn analytic_scale(sys: &SystemSpec) -> f64 {
    let gap = sys.gap();
    let r = -sys.noise.valid_region();
    let scale = if r > 0.0 && r.is_finite() {
        gap.min(r)
    } else {
        gap
    };
    if scale > 0.0 {
        scale
    } else {
        1.0
    }
}

/// Laurent coefficients of `v(s) = v_ss / s + a + O(s)` at the origin.
///
/// The trace component is `1/s` exactly, so the lower 3x3 block obeys
/// `N(s) w = w0 + c(s) / s` with `N = sI - A(s)`. Then `w_ss = N(0)^{-1} c(0)`
/// and `a = N(0)^{-1} (w0 + G'(0) v_ss - w_ss)`, where `G'(0)` is the
/// derivative of the generator, the only quantity taken numerically. Fails
/// when `N(0)` is singular, i.e. when the noise leaves a conserved quantity
/// besides the trace.
fn origin_expansion(sys: &SystemSpec) -> Result<(CVec4, CVec4)> {
    let g0 = generator(sys, 0.0)?;
    let n0: nalgebra::Matrix3<C64> = -g0.fixed_view::<3, 3>(1, 1).into_owned();
    let c0: nalgebra::Vector3<C64> = g0.fixed_view::<3, 1>(1, 0).into_owned();
    let sv = n0.singular_values();
    let origin = C64::new(0.0, 0.0);
    if !(sv.min() > 0.0 && sv.max() / sv.min() <= POLE_CONDITION) {
        return Err(Error::Singular {
            s: origin,
            eigenvalue: None,
        });
    }
    let lu = n0.full_piv_lu();
    let w_ss = lu.solve(&c0).ok_or(Error::Singular {
        s: origin,
        eigenvalue: None,
    })?;
    let mut v_ss = CVec4::zeros();
    v_ss[0] = C64::new(1.0, 0.0);
    v_ss.fixed_rows_mut::<3>(1).copy_from(&w_ss);

    let scale = analytic_scale(sys);
    let diffs: Vec<CVec4> = LADDER
        .iter()
        .map(|h| {
            let s = h * scale;
            Ok((generator(sys, s)? - g0) * v_ss / C64::new(s, 0.0))
        })
        .collect::<Result<_>>()?;
    let mut d = nalgebra::Vector3::<C64>::zeros();
    for i in 0..3 {
        let re: Vec<f64> = diffs.iter().map(|x| x[i + 1].re).collect();
        let floor = 1e-12 * g0.norm();
        d[i] = C64::new(richardson_tableau(&re, floor)?, 0.0);
    }
    let w0 = sys.v0_complex().fixed_rows::<3>(1).into_owned();
    let a_low = lu.solve(&(w0 + d - w_ss)).ok_or(Error::Singular {
        s: origin,
        eigenvalue: None,
    })?;
    let mut a = CVec4::zeros();
    a.fixed_rows_mut::<3>(1).copy_from(&a_low);
    Ok((v_ss, a))
}

/// `lim_{s -> 0+} s f(s)` for the selected component (final-value theorem).
///
/// Uses the exact Laurent expansion at the origin when the stationary state
/// is unique; otherwise extrapolates `s f(s)` numerically.
pub fn final_value(sys: &SystemSpec, which: Component) -> Result<f64> {
    if let Ok((v_ss, _)) = origin_expansion(sys) {
        return Ok(match which {
            Component::Bloch(i) => v_ss[i].re,
            // s (s v - v0) -> 0 when v has a simple pole at the origin
            Component::Rate(_) | Component::ZRate | Component::TransitionRate => 0.0,
        });
    }
    let scale = analytic_scale(sys);
    let t0: Vec<f64> = LADDER
        .iter()
        .map(|h| Ok((component_at(sys, which, C64::new(h * scale, 0.0))? * (h * scale)).re))
        .collect::<Result<_>>()?;
    // the limits are dimensionless and O(1)
    richardson_tableau(&t0, 1e-12)
}

/// Relaxation summary extracted from the small-`s` structure of `v3(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryRate {
    /// `lim s v3(s)`: the stationary polarisation.
    pub v3_stationary: f64,
    /// Decay constant of `v3(t)` towards its stationary value.
    pub relaxation_rate: f64,
    /// Initial slope `-v3_0 dv3/dt` of the equivalent single-exponential
    /// relaxation: `relaxation_rate * (1 - v3_0 v3_stationary)`. Compare
    /// with the golden-rule rates.
    pub rate: f64,
    /// `lim s * transition_rate(s)`, zero whenever `v3(s)` has a simple pole
    /// at the origin.
    pub transition_final_value: f64,
}

/// Writes `v3(s) = v_ss / s + A + O(s)` and matches it to a single
/// exponential approach `v_ss + (v3_0 - v_ss) exp(-lambda t)`, whose
/// transform has `A = (v3_0 - v_ss) / lambda`.
pub fn stationary_rate(sys: &SystemSpec) -> Result<StationaryRate> {
    let (v_ss, a) = origin_expansion(sys)?;
    let (v_ss, a) = (v_ss[3].re, a[3].re);
    let v30 = sys.v0.v3();
    if a == 0.0 {
        return Err(Error::NonConvergent {
            iterates: vec![v_ss, a],
        });
    }
    let lambda = (v30 - v_ss) / a;
    Ok(StationaryRate {
        v3_stationary: v_ss,
        relaxation_rate: lambda,
        rate: lambda * (1.0 - v30 * v_ss),
        transition_final_value: 0.0,
    })
}

/// Responses on a grid of complex frequencies.
#[derive(Debug, Clone)]
pub struct FrequencyResponse {
    pub grid: Vec<C64>,
    pub v_of_s: Vec<CVec4>,
    pub gamma_of_s: Vec<CVec4>,
}

/// Evaluates `v(s)` and `gamma(s)` on every grid point in parallel.
pub fn sweep(sys: &SystemSpec, grid: &[C64]) -> Result<FrequencyResponse> {
    let v0 = sys.v0_complex();
    let v_of_s: Vec<CVec4> = grid
        .par_iter()
        .map(|&s| bloch_response(sys, s))
        .collect::<Result<_>>()?;
    let gamma_of_s = v_of_s.iter().zip(grid).map(|(v, &s)| v * s - v0).collect();
    Ok(FrequencyResponse {
        grid: grid.to_vec(),
        v_of_s,
        gamma_of_s,
    })
}

/// Resolvent `(sI - L0)^{-1}` applied to `v0`, the zero-noise response.
pub fn free_response(sys: &SystemSpec, s: C64) -> Result<CVec4> {
    let r = matrix_s_function(
        |z| {
            if z.norm() == 0.0 {
                Err(Error::Singular {
                    s: z,
                    eigenvalue: None,
                })
            } else {
                Ok(z.inv())
            }
        },
        &sys.eig0,
        s,
    )?;
    Ok(r * sys.v0_complex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{sigma_theta, sigma_z};
    use crate::noise::{DampedSineOmega, NoiseModel};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn charge_system(theta: f64, noise: NoiseModel, v0: BlochVector) -> SystemSpec {
        let h0 = sigma_theta(theta) * c(0.5, 0.0);
        let h1 = sigma_z() * c(0.5, 0.0);
        SystemSpec::new(&h0, &h1, Arc::new(noise), v0).unwrap()
    }

    fn eigen_system(theta: f64, noise: NoiseModel, v0: BlochVector) -> SystemSpec {
        let h0 = sigma_z() * c(0.5, 0.0);
        let h1 = sigma_theta(theta) * c(0.5, 0.0);
        SystemSpec::new(&h0, &h1, Arc::new(noise), v0).unwrap()
    }

    fn lor() -> NoiseModel {
        NoiseModel::lorentzian(0.01, 2.0).unwrap()
    }

    fn weak(g2: f64) -> NoiseModel {
        NoiseModel::lorentzian(g2, 2.0).unwrap()
    }

    #[test]
    fn zero_strength_kernel_vanishes() {
        // strengths must be positive, so zero coupling stands in for g2 = 0
        let h0 = sigma_theta(1.0) * c(0.5, 0.0);
        let sys = SystemSpec::new(&h0, &Mat2::zeros(), Arc::new(lor()), BlochVector::up()).unwrap();
        for s in [c(0.3, 0.0), c(0.1, 2.0)] {
            assert_eq!(kernel_k(&sys, s).unwrap(), CMat4::zeros());
        }
    }

    #[test]
    fn omega_free_kernel_is_gamma_term() {
        let sys = charge_system(1.0, lor(), BlochVector::up());
        let s = c(0.2, 0.7);
        let g = matrix_s_function(|z| sys.noise.laplace_gamma(z), &sys.eig0, s).unwrap();
        assert_eq!(kernel_k(&sys, s).unwrap(), g * sys.l1.complex());
    }

    #[test]
    fn residual_and_large_s() {
        let sys = charge_system(
            1.1,
            lor()
                .with_omega(DampedSineOmega {
                    amplitude: 0.003,
                    tau_c: 1.0,
                    tau_r: 0.5,
                })
                .unwrap(),
            BlochVector::up(),
        );
        let s = c(1e6, 0.0);
        let v = bloch_response(&sys, s).unwrap();
        // v = v0/s + L0 v0/s^2 + O(|L0|^2/s^3, |K|/s^2)
        let want = sys.v0_complex() / s + sys.l0.complex() * sys.v0_complex() / (s * s);
        assert!((v - want).norm() < 1e-10 * (sys.v0_complex() / s).norm());
        let g = rate_response(&sys, s).unwrap();
        let l0v0 = sys.l0.complex() * sys.v0_complex();
        assert!((g * s - l0v0).norm() < 1e-5);
    }

    #[test]
    fn mixed_state_is_stationary() {
        let sys = charge_system(FRAC_PI_2, lor(), BlochVector::maximally_mixed());
        for s in [c(0.5, 0.0), c(0.1, 1.3), c(2.0, -0.4)] {
            let v = bloch_response(&sys, s).unwrap();
            let want = CVec4::new(s.inv(), c(0., 0.), c(0., 0.), c(0., 0.));
            assert!((v - want).norm() < 1e-14);
        }
    }

    #[test]
    fn free_coherence_peaks_at_gap() {
        let h0 = sigma_theta(FRAC_PI_2) * c(0.5, 0.0);
        let sys = SystemSpec::new(&h0, &Mat2::zeros(), Arc::new(lor()), BlochVector::up()).unwrap();
        // v3(s) = s / (s^2 + 1): |v3(i w)| blows up at w = 1
        let mags: Vec<f64> = (1..400)
            .map(|k| {
                let w = k as f64 * 0.005 + 0.001;
                bloch_response(&sys, c(1e-3, w)).unwrap()[3].norm()
            })
            .collect();
        let imax = mags
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let wmax = (imax + 1) as f64 * 0.005 + 0.001;
        assert!((wmax - 1.0).abs() < 0.006);
        let s = c(0.3, 0.2);
        let v3 = bloch_response(&sys, s).unwrap()[3];
        assert!((v3 - s / (s * s + 1.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenstate_has_no_z_rate_without_noise() {
        let h0 = sigma_z() * c(0.5, 0.0);
        let sys =
            SystemSpec::new(&h0, &Mat2::zeros(), Arc::new(lor()), BlochVector::down()).unwrap();
        for s in [c(0.4, 0.0), c(0.1, 3.0)] {
            assert!(z_rate(&sys, s).unwrap().norm() < 1e-15);
        }
        assert!(final_value(&sys, Component::ZRate).unwrap().abs() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let h0 = sigma_z() * c(0.5, 0.0);
        let sys = SystemSpec::new(&h0, &Mat2::zeros(), Arc::new(lor()), BlochVector::up()).unwrap();
        assert!(matches!(
            bloch_response(&sys, c(0.0, 1.0)),
            Err(Error::Singular { .. }) | Err(Error::Pole { .. })
        ));
        assert!(matches!(
            bloch_response(&sys, c(1e-15, 1.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn inconsistent_couplings_rejected() {
        let h0 = sigma_z() * c(0.5, 0.0);
        let a = commutator_superop(&(sigma_z() * c(0.5, 0.0))).unwrap();
        let b = anticommutator_superop(&(sigma_theta(1.0) * c(0.5, 0.0))).unwrap();
        let l0 = commutator_superop(&h0).unwrap();
        let eig = SuperopEigendecomposition::from_hamiltonian(&h0).unwrap();
        assert!(SystemSpec::from_parts(l0, a, b, eig, Arc::new(lor()), BlochVector::up()).is_err());
    }

    #[test]
    fn weak_excited_state_decays() {
        let sys = eigen_system(FRAC_PI_2, weak(1e-3), BlochVector::down());
        let r = stationary_rate(&sys).unwrap();
        assert!(r.rate > 0.0);
        // Omega = 0: populations equalise
        assert!(r.v3_stationary.abs() < 1e-6);
        // literal lim s * gamma(s) of the transform with a simple pole at 0
        assert!(r.transition_final_value.abs() < 1e-6);
    }

    #[test]
    fn white_noise_rate_matches_two_pole_inversion() {
        // theta = pi/2 eigenframe, excited start: v3(s) = -1/(s + gw/2) for
        // Gamma+(s) = gw/2, a single pole.
        let gw = 0.004;
        let sys = eigen_system(
            FRAC_PI_2,
            NoiseModel::white(gw).unwrap(),
            BlochVector::down(),
        );
        let r = stationary_rate(&sys).unwrap();
        assert!((r.relaxation_rate - gw / 2.0).abs() < 1e-10);
        assert!((r.rate - gw / 2.0).abs() < 1e-10);
    }

    #[test]
    fn sweep_matches_pointwise() {
        let sys = charge_system(1.0, lor(), BlochVector::up());
        let grid: Vec<C64> = (1..20).map(|k| c(0.05, 0.1 * k as f64)).collect();
        let fr = sweep(&sys, &grid).unwrap();
        for (i, &s) in grid.iter().enumerate() {
            assert_eq!(fr.v_of_s[i], bloch_response(&sys, s).unwrap());
        }
    }

    #[test]
    fn richardson_handles_polynomials() {
        let v = richardson_limit(1.0, |s| Ok(3.0 + 2.0 * s - 5.0 * s * s)).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert!(matches!(
            richardson_limit(1.0, |s| Ok(1.0 / s)),
            Err(Error::NonConvergent { .. })
        ));
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(re in 0.01f64..2.0, im in -3.0f64..3.0, theta in 0.2f64..3.0) {
            let sys = charge_system(theta, lor(), BlochVector::up());
            let a = bloch_response(&sys, c(re, im)).unwrap();
            let b = bloch_response(&sys, c(re, -im)).unwrap();
            prop_assert!((a - b.conjugate()).norm() <= 1e-12 * a.norm());
        }

        #[test]
        fn perturbative_scaling(re in 0.2f64..1.0, im in 0.0f64..0.6) {
            let s = c(re, im);
            let free = charge_system(1.0, lor(), BlochVector::up());
            let v_free = free_response(&free, s).unwrap();
            let d = |lambda: f64| {
                let sys = charge_system(1.0, lor().scaled(lambda).unwrap(), BlochVector::up());
                (bloch_response(&sys, s).unwrap() - v_free).norm()
            };
            let ratio = d(1e-4) / d(2e-4);
            prop_assert!((ratio - 0.5).abs() < 1e-3);
        }
    }
}
