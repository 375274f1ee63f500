//! Charge-qubit geometry and closed-form responses.
//!
//! Two frames are used. In the charge frame `H0 = (Delta/2) sigma_theta`
//! and the noise couples through `H1 = sigma_z / 2`; in the eigenframe
//! `H0 = (Delta/2) sigma_z` and `H1 = sigma_theta / 2`, with
//! `sigma_theta = sigma_z cos(theta) + sigma_x sin(theta)`. The half factors
//! make `Delta` the observed oscillation frequency.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bloch::{rotation_eigenbasis, sigma_z, BlochVector, CMat4, Mat2};
use crate::freq::{self, SystemSpec};
use crate::noise::{modulated_at, NoiseSpectra};
use crate::units::ghz_to_rad_per_ps;
use crate::{Error, Result, C64};

/// Energies in rad/ps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeQubitParams {
    ej: f64,
    ec: Option<f64>,
    ng: Option<f64>,
    e_el: f64,
    delta: f64,
    theta: f64,
}

impl ChargeQubitParams {
    /// `Delta = sqrt(EJ^2 + E_el^2)`, `theta = atan2(EJ, E_el)` in `(0, pi)`.
    pub fn from_bias(ej: f64, e_el: f64) -> Result<Self> {
        if !(ej > 0.0 && ej.is_finite()) {
            return Err(Error::invalid(format!("EJ must be positive, got {ej}")));
        }
        if !e_el.is_finite() {
            return Err(Error::invalid("E_el must be finite"));
        }
        Ok(Self {
            ej,
            ec: None,
            ng: None,
            e_el,
            delta: ej.hypot(e_el),
            theta: ej.atan2(e_el),
        })
    }

    /// `E_el = EC (1 - 2 ng)`.
    pub fn from_gate(ej: f64, ec: f64, ng: f64) -> Result<Self> {
        if !(ec > 0.0) {
            return Err(Error::invalid(format!("EC must be positive, got {ec}")));
        }
        let mut p = Self::from_bias(ej, ec * (1.0 - 2.0 * ng))?;
        p.ec = Some(ec);
        p.ng = Some(ng);
        Ok(p)
    }

    /// Inverse parametrisation; `E_el` is snapped to zero when it is below
    /// round-off so that `theta = pi/2` lands on the optimal point exactly.
    pub fn from_gap_angle(delta: f64, theta: f64) -> Result<Self> {
        if !(delta > 0.0) || !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(Error::invalid("need Delta > 0 and theta in (0, pi)"));
        }
        let mut e_el = delta * theta.cos();
        if e_el.abs() < 1e-15 * delta {
            e_el = 0.0;
        }
        let ej = if e_el == 0.0 {
            delta
        } else {
            delta * theta.sin()
        };
        Self::from_bias(ej, e_el)
    }

    pub fn ej(&self) -> f64 {
        self.ej
    }

    pub fn ec(&self) -> Option<f64> {
        self.ec
    }

    pub fn ng(&self) -> Option<f64> {
        self.ng
    }

    pub fn e_el(&self) -> f64 {
        self.e_el
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `omega0 = EJ`.
    pub fn omega0(&self) -> f64 {
        self.ej
    }

    pub fn sin_theta(&self) -> f64 {
        self.ej / self.delta
    }

    pub fn cos_theta(&self) -> f64 {
        self.e_el / self.delta
    }

    pub fn cot_theta(&self) -> f64 {
        self.e_el / self.ej
    }

    pub fn is_optimal_point(&self) -> bool {
        self.e_el == 0.0
    }

    fn sigma_theta(&self) -> Mat2 {
        let (c, s) = (self.cos_theta(), self.sin_theta());
        crate::bloch::sigma_z() * C64::new(c, 0.0) + crate::bloch::sigma_x() * C64::new(s, 0.0)
    }
}

/// JSON form: `ej_ghz` plus either `eel_ghz` or `ng` with `ec_ghz`. GHz are
/// ordinary frequencies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitDoc {
    pub ej_ghz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eel_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ng: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ec_ghz: Option<f64>,
}

impl QubitDoc {
    pub fn build(&self) -> Result<ChargeQubitParams> {
        let ej = ghz_to_rad_per_ps(self.ej_ghz);
        match (self.eel_ghz, self.ng, self.ec_ghz) {
            (Some(eel), None, None) => ChargeQubitParams::from_bias(ej, ghz_to_rad_per_ps(eel)),
            (None, Some(ng), Some(ec)) => {
                ChargeQubitParams::from_gate(ej, ghz_to_rad_per_ps(ec), ng)
            }
            _ => Err(Error::invalid(
                "qubit needs either eel_ghz, or ng together with ec_ghz",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    ChargeBasis,
    EigenBasis,
}

/// Initial state of a protocol, which also fixes the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// `|0><0|` in the charge basis, start of a coherent-oscillation run.
    ZeroCharge,
    /// Excited eigenstate, start of a down-relaxation run.
    Excited,
    /// Ground eigenstate, start of an up-relaxation run.
    Ground,
}

impl InitialState {
    pub fn frame(self) -> Frame {
        match self {
            InitialState::ZeroCharge => Frame::ChargeBasis,
            InitialState::Excited | InitialState::Ground => Frame::EigenBasis,
        }
    }

    pub fn bloch(self) -> BlochVector {
        match self {
            InitialState::ZeroCharge | InitialState::Ground => BlochVector::up(),
            InitialState::Excited => BlochVector::down(),
        }
    }
}

/// Hamiltonians and eigenbasis of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitFrame {
    pub frame: Frame,
    pub h0: Mat2,
    pub h1: Mat2,
    /// Rows are left eigenvectors of `L0`; `L0 = P^{-1} diag P`.
    pub p: CMat4,
    pub p_inv: CMat4,
}

impl QubitFrame {
    pub fn new(p: &ChargeQubitParams, frame: Frame) -> Self {
        let half = C64::new(0.5, 0.0);
        let (h0, h1, axis) = match frame {
            Frame::ChargeBasis => (
                p.sigma_theta() * (half * p.delta),
                sigma_z() * half,
                nalgebra::Vector3::new(p.sin_theta(), 0.0, p.cos_theta()),
            ),
            Frame::EigenBasis => (
                sigma_z() * (half * p.delta),
                p.sigma_theta() * half,
                nalgebra::Vector3::z(),
            ),
        };
        let (pm, pinv) = rotation_eigenbasis(&axis);
        Self {
            frame,
            h0,
            h1,
            p: pm,
            p_inv: pinv,
        }
    }
}

/// `P_theta` of the charge frame: rows `(1,0,0,0)`, `(0,sin,0,cos)`,
/// `(0,cos,i,-sin)`, `(0,cos,-i,-sin)`.
pub fn p_theta(p: &ChargeQubitParams) -> (CMat4, CMat4) {
    let f = QubitFrame::new(p, Frame::ChargeBasis);
    (f.p, f.p_inv)
}

/// Generic Laplace-domain system for a protocol.
pub fn system(
    p: &ChargeQubitParams,
    init: InitialState,
    noise: Arc<dyn NoiseSpectra>,
) -> Result<SystemSpec> {
    let f = QubitFrame::new(p, init.frame());
    SystemSpec::new(&f.h0, &f.h1, noise, init.bloch())
}

/// `Q(s) = (1/s - v3(s)) / 2` from the generic response.
pub fn generic_q(sys: &SystemSpec, s: C64) -> Result<C64> {
    let v = freq::bloch_response(sys, s)?;
    Ok((s.inv() - v[3]) * 0.5)
}

fn nonzero(s: C64) -> Result<()> {
    if s.norm() == 0.0 {
        return Err(Error::invalid("s = 0 is not allowed here"));
    }
    Ok(())
}

fn checked_div(n: C64, d: C64, s: C64) -> Result<C64> {
    if d.norm() <= 1e-300 || !(n / d).is_finite() {
        return Err(Error::Singular {
            s,
            eigenvalue: None,
        });
    }
    Ok(n / d)
}

/// Rational form of the charge-frame coherent-oscillation response,
/// `Q(s) = Delta/(2s) (N0 cos + N1) / (D0 cot^2 + D1)`.
pub fn closed_form_q_theta<N: NoiseSpectra + ?Sized>(
    p: &ChargeQubitParams,
    spectra: &N,
    s: C64,
) -> Result<C64> {
    nonzero(s)?;
    let d = p.delta;
    let m = modulated_at(spectra, d, s)?;
    let g = spectra.laplace_gamma(s)?;
    let o = spectra.laplace_omega(s)?;
    let sg = s + m.gamma_plus;
    let dg = m.gamma_minus + d;
    let n0 = sg * (m.omega_plus - o) + dg * m.omega_minus;
    let n1 = sg * d;
    let quad = s * s + s * g + d * d;
    let d0 = s * (sg * sg + dg * dg);
    let d1 = sg * quad;
    let cot2 = p.cot_theta().powi(2);
    let r = checked_div(n0 * p.cos_theta() + n1, d0 * cot2 + d1, s)?;
    Ok(r * d / (s * 2.0))
}

/// `Q(s) = Delta^2 / (2 s (s^2 + s Gamma(s) + Delta^2))` at the optimal point.
pub fn optimal_point_q<N: NoiseSpectra + ?Sized>(
    p: &ChargeQubitParams,
    spectra: &N,
    s: C64,
) -> Result<C64> {
    if !p.is_optimal_point() {
        return Err(Error::invalid("optimal-point response needs theta = pi/2"));
    }
    nonzero(s)?;
    let d2 = p.delta * p.delta;
    let g = spectra.laplace_gamma(s)?;
    checked_div(C64::new(d2, 0.0), s * 2.0 * (s * s + s * g + d2), s)
}

/// Down-rate response `-v3_0 (s v3(s) - v3_0)` from the excited state.
///
/// At the optimal point this is the rational `(Gamma+ - Omega-)/(Gamma+ + s)`;
/// elsewhere it comes from the generic matrix evaluation in the eigenframe.
pub fn closed_form_rate_down(
    p: &ChargeQubitParams,
    spectra: Arc<dyn NoiseSpectra>,
    s: C64,
) -> Result<C64> {
    rate(p, spectra, s, InitialState::Excited)
}

/// Up-rate counterpart from the ground state: every `Omega` term flips sign.
pub fn closed_form_rate_up(
    p: &ChargeQubitParams,
    spectra: Arc<dyn NoiseSpectra>,
    s: C64,
) -> Result<C64> {
    rate(p, spectra, s, InitialState::Ground)
}

fn rate(
    p: &ChargeQubitParams,
    spectra: Arc<dyn NoiseSpectra>,
    s: C64,
    init: InitialState,
) -> Result<C64> {
    if p.is_optimal_point() {
        let m = modulated_at(spectra.as_ref(), p.delta, s)?;
        let sign = if init == InitialState::Excited {
            -1.0
        } else {
            1.0
        };
        return checked_div(m.gamma_plus + m.omega_minus * sign, m.gamma_plus + s, s);
    }
    let sys = system(p, init, spectra)?;
    freq::transition_rate(&sys, s)
}

/// First-order rates `(sin^2/s)(Gamma+ +- Omega-)`, returned as `(up, down)`.
pub fn lowest_order_rates<N: NoiseSpectra + ?Sized>(
    p: &ChargeQubitParams,
    spectra: &N,
    s: C64,
) -> Result<(C64, C64)> {
    nonzero(s)?;
    let m = modulated_at(spectra, p.delta, s)?;
    let k = p.sin_theta().powi(2) / s;
    Ok((
        k * (m.gamma_plus + m.omega_minus),
        k * (m.gamma_plus - m.omega_minus),
    ))
}

/// Golden-rule spectrum `Re Gamma(iw) - Im Omega(iw)`, equal to
/// `Gamma+(0) -+ Omega-(0)` at `w = +-Delta`.
pub fn phi_ft<N: NoiseSpectra + ?Sized>(spectra: &N, w: f64) -> Result<f64> {
    let s = C64::new(0.0, w);
    Ok(spectra.laplace_gamma(s)?.re - spectra.laplace_omega(s)?.im)
}

/// Stationary rates `(up, down) = sin^2(theta) (Phi(-Delta), Phi(Delta))`.
pub fn golden_rule_rates<N: NoiseSpectra + ?Sized>(
    p: &ChargeQubitParams,
    spectra: &N,
) -> Result<(f64, f64)> {
    let s2 = p.sin_theta().powi(2);
    Ok((
        s2 * phi_ft(spectra, -p.delta)?,
        s2 * phi_ft(spectra, p.delta)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{DampedSineOmega, NoiseModel, Silent};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lor() -> NoiseModel {
        NoiseModel::lorentzian(0.01, 2.0).unwrap()
    }

    fn lor_omega() -> NoiseModel {
        lor()
            .with_omega(DampedSineOmega {
                amplitude: 0.004,
                tau_c: 1.5,
                tau_r: 0.4,
            })
            .unwrap()
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn bias_examples() {
        let p = ChargeQubitParams::from_bias(1.0, 0.0).unwrap();
        assert_eq!((p.delta(), p.theta()), (1.0, FRAC_PI_2));
        assert!(p.is_optimal_point() && p.omega0() == p.delta());
        let p = ChargeQubitParams::from_bias(1.0, 1.0).unwrap();
        assert!((p.delta() - 2f64.sqrt()).abs() < 1e-15 && (p.theta() - FRAC_PI_4).abs() < 1e-15);
        let p = ChargeQubitParams::from_bias(3.0, 4.0).unwrap();
        assert_eq!(p.delta(), 5.0);
        assert!((p.theta() - 0.6435011087932844).abs() < 1e-15);
        let p = ChargeQubitParams::from_bias(1.0, -1.0).unwrap();
        assert!((p.theta() - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert!(ChargeQubitParams::from_bias(0.0, 1.0).is_err());
        let p = ChargeQubitParams::from_gate(2.0, 5.0, 0.5).unwrap();
        assert!(p.is_optimal_point() && p.delta() == 2.0);
        assert!(ChargeQubitParams::from_gap_angle(1.0, FRAC_PI_2)
            .unwrap()
            .is_optimal_point());
    }

    #[test]
    fn json_qubit() {
        let q: QubitDoc = serde_json::from_str(r#"{"ej_ghz": 6.0, "eel_ghz": 0.0}"#).unwrap();
        let p = q.build().unwrap();
        assert!((p.delta() - 0.0376991118430775).abs() < 1e-15);
        let q: QubitDoc =
            serde_json::from_str(r#"{"ej_ghz": 6.0, "ng": 0.5, "ec_ghz": 20.0}"#).unwrap();
        assert!(q.build().unwrap().is_optimal_point());
        let q: QubitDoc = serde_json::from_str(r#"{"ej_ghz": 6.0}"#).unwrap();
        assert!(q.build().is_err());
    }

    #[test]
    fn p_theta_structure() {
        let p = ChargeQubitParams::from_bias(1.0, 0.0).unwrap();
        let (pm, pinv) = p_theta(&p);
        let want = CMat4::new(
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 1.),
            c(-1., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., -1.),
            c(-1., 0.),
        );
        assert!((pm - want).norm() < 1e-15);
        assert!((pm * pinv - CMat4::identity()).norm() < 1e-15);
        for theta in [0.3, FRAC_PI_3, 2.0] {
            let p = ChargeQubitParams::from_gap_angle(1.7, theta).unwrap();
            let f = QubitFrame::new(&p, Frame::ChargeBasis);
            let eig = crate::bloch::SuperopEigendecomposition::from_hamiltonian(&f.h0).unwrap();
            let l0 = crate::bloch::commutator_superop(&f.h0).unwrap();
            assert!(eig.reconstruction_error(&l0) < 1e-12);
            assert!((eig.p() - f.p).norm() < 1e-14);
            let mut ev: Vec<f64> = eig.eigenvalues().iter().map(|x| x.im).collect();
            ev.sort_by(f64::total_cmp);
            assert!((ev[0] + 1.7).abs() < 1e-14 && (ev[3] - 1.7).abs() < 1e-14);
        }
    }

    #[test]
    fn optimal_point_collapse() {
        let p = ChargeQubitParams::from_bias(1.3, 0.0).unwrap();
        for s in [c(0.3, 0.0), c(0.05, 1.2), c(1.0, -0.7)] {
            let a = closed_form_q_theta(&p, &lor_omega(), s).unwrap();
            let b = optimal_point_q(&p, &lor_omega(), s).unwrap();
            assert!(rel(a, b) < 1e-13);
        }
    }

    #[test]
    fn free_q_partial_fractions() {
        let p = ChargeQubitParams::from_bias(1.0, 0.0).unwrap();
        let w = Silent;
        // Q = 1/(2s) - s/(2(s^2+1)) at w = 1/2
        let s = c(0.0, 0.5);
        let want = (s.inv() - s / (s * s + 1.0)) * 0.5;
        let got = optimal_point_q(&p, &w, s).unwrap();
        assert!(rel(got, want) < 1e-14);
        let hand = c(1.0, 0.0) / (c(0.0, 0.5) * 2.0 * (1.0 - 0.25));
        assert!(rel(got, hand) < 1e-14);
        // large-s asymptotics
        let s = c(1e4, 0.0);
        let q = optimal_point_q(&p, &w, s).unwrap();
        assert!((q.re * 2.0 * 1e12 - 1.0).abs() < 1e-6);
        assert!(optimal_point_q(&ChargeQubitParams::from_bias(1.0, 0.5).unwrap(), &w, s).is_err());
        assert!(optimal_point_q(&p, &w, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn closed_form_matches_generic_charge_frame() {
        for theta in [FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, 2.0 * PI / 3.0] {
            for noise in [lor(), lor_omega()] {
                let p = ChargeQubitParams::from_gap_angle(1.0, theta).unwrap();
                let sys = system(&p, InitialState::ZeroCharge, Arc::new(noise.clone())).unwrap();
                for k in 0..200 {
                    let s = c(0.0, 0.1 + 2.9 * k as f64 / 199.0);
                    let a = closed_form_q_theta(&p, &noise, s).unwrap();
                    let b = generic_q(&sys, s).unwrap();
                    assert!(rel(a, b) < 1e-10, "theta {theta} s {s}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn optimal_rate_matches_generic_eigenframe() {
        let p = ChargeQubitParams::from_bias(1.0, 0.0).unwrap();
        let noise: Arc<dyn NoiseSpectra> = Arc::new(lor_omega());
        for init in [InitialState::Excited, InitialState::Ground] {
            let sys = system(&p, init, noise.clone()).unwrap();
            for k in 0..50 {
                let s = c(0.01, 0.1 + 0.05 * k as f64);
                let a = rate(&p, noise.clone(), s, init).unwrap();
                let b = freq::transition_rate(&sys, s).unwrap();
                assert!(rel(a, b) < 1e-10);
            }
        }
    }

    #[test]
    fn omega_sign_duality() {
        let p = ChargeQubitParams::from_gap_angle(1.0, 1.1).unwrap();
        let om = DampedSineOmega {
            amplitude: 0.004,
            tau_c: 1.5,
            tau_r: 0.4,
        };
        let fwd: Arc<dyn NoiseSpectra> = Arc::new(lor().with_omega(om).unwrap());
        struct Flipped(NoiseModel);
        impl NoiseSpectra for Flipped {
            fn laplace_gamma(&self, s: C64) -> Result<C64> {
                self.0.laplace_gamma(s)
            }
            fn laplace_omega(&self, s: C64) -> Result<C64> {
                Ok(-self.0.laplace_omega(s)?)
            }
            fn valid_region(&self) -> f64 {
                self.0.valid_region()
            }
        }
        let rev: Arc<dyn NoiseSpectra> = Arc::new(Flipped(lor().with_omega(om).unwrap()));
        for s in [c(0.2, 0.0), c(0.1, 0.9)] {
            let up = closed_form_rate_up(&p, fwd.clone(), s).unwrap();
            let down_rev = closed_form_rate_down(&p, rev.clone(), s).unwrap();
            assert!(rel(up, down_rev) < 1e-10);
        }
        let sym: Arc<dyn NoiseSpectra> = Arc::new(lor());
        let s = c(0.3, 0.4);
        let up = closed_form_rate_up(&p, sym.clone(), s).unwrap();
        let down = closed_form_rate_down(&p, sym, s).unwrap();
        assert!(rel(up, down) < 1e-10);
    }

    #[test]
    fn lowest_order_examples() {
        let p = ChargeQubitParams::from_bias(1.0, 0.0).unwrap();
        let (u, d) = lowest_order_rates(&p, &lor(), c(0.5, 0.0)).unwrap();
        assert_eq!(u, d);
        let tiny = ChargeQubitParams::from_gap_angle(1.0, 1e-6).unwrap();
        let (u, _) = lowest_order_rates(&tiny, &lor(), c(0.5, 0.0)).unwrap();
        assert!(u.norm() < 1e-13);
        assert!(lowest_order_rates(&p, &lor(), c(0.0, 0.0)).is_err());
        let weak = NoiseModel::lorentzian(1e-4, 2.0).unwrap();
        let arc: Arc<dyn NoiseSpectra> = Arc::new(weak.clone());
        for k in 0..=30 {
            let s = c(0.5 + 1.5 * k as f64 / 30.0, 0.0);
            let (_, d) = lowest_order_rates(&p, &weak, s).unwrap();
            let exact = closed_form_rate_down(&p, arc.clone(), s).unwrap();
            assert!(rel(d, exact) <= 0.01);
        }
    }

    #[test]
    fn golden_rule_examples() {
        let p = ChargeQubitParams::from_bias(1.0, 0.0).unwrap();
        let (u, d) = golden_rule_rates(&p, &lor()).unwrap();
        assert_eq!(u, d);
        // half the two-sided spectrum: Gamma_FT(1)/2 = 0.004
        assert!((d - 0.004).abs() < 1e-16);
        let m = modulated_at(&lor_omega(), 1.0, c(0.0, 0.0)).unwrap();
        let (u, d) = golden_rule_rates(&p, &lor_omega()).unwrap();
        assert!((d - (m.gamma_plus.re - m.omega_minus.re)).abs() < 1e-15);
        assert!((u - (m.gamma_plus.re + m.omega_minus.re)).abs() < 1e-15);
        let p6 = ChargeQubitParams::from_gap_angle(1.0, FRAC_PI_6).unwrap();
        let (_, d6) = golden_rule_rates(&p6, &lor()).unwrap();
        assert!((d6 - 0.25 * 0.004).abs() < 1e-15);
    }

    #[test]
    fn white_noise_rate_down() {
        let p = ChargeQubitParams::from_bias(1.0, 0.0).unwrap();
        let gw = 0.02;
        let s = c(0.3, 0.1);
        let r = closed_form_rate_down(&p, Arc::new(NoiseModel::white(gw).unwrap()), s).unwrap();
        let want = c(gw / 2.0, 0.0) / (s + gw / 2.0);
        assert!(rel(r, want) < 1e-15);
    }
}
