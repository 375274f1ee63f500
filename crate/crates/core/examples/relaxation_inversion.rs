// Modulated spectra from a pair of up/down relaxation measurements.
//
// `cargo run --release --example relaxation_inversion`

use std::sync::Arc;

use noisespec::ident::{
    discrete_laplace_natural, identify_from_relaxation, identify_from_relaxation_values,
    rate_series, MeasurementTrace, Scenario,
};
use noisespec::noise::{modulated_at, DampedSineOmega, NoiseModel, NoiseSpectra};
use noisespec::qubit::{
    closed_form_rate_down, closed_form_rate_up, system, ChargeQubitParams, InitialState,
};
use noisespec::sim::{integrate_volterra, SimConfig};
use noisespec::{Result, C64};

pub fn run_example() -> Result<()> {
    let p = ChargeQubitParams::from_gap_angle(1.0, std::f64::consts::FRAC_PI_2)?;
    let noise = NoiseModel::lorentzian(0.02, 0.7)?.with_omega(DampedSineOmega {
        amplitude: 0.008,
        tau_c: 0.7,
        tau_r: 1.5,
    })?;
    let spectra: Arc<dyn NoiseSpectra> = Arc::new(noise.clone());

    // analytic rate transforms on a real s grid
    let s: Vec<C64> = (0..5)
        .map(|k| C64::new(0.1 + 0.4 * k as f64, 0.0))
        .collect();
    let up: Vec<C64> = s
        .iter()
        .map(|&x| closed_form_rate_up(&p, spectra.clone(), x))
        .collect::<Result<_>>()?;
    let down: Vec<C64> = s
        .iter()
        .map(|&x| closed_form_rate_down(&p, spectra.clone(), x))
        .collect::<Result<_>>()?;
    let est = identify_from_relaxation_values(&s, &up, &down, 0.0)?;
    for (i, &x) in s.iter().enumerate() {
        let m = modulated_at(&noise, 1.0, x)?;
        println!(
            "s = {:.2}: Gamma+ {:.6e} (exact {:.6e}), Omega- {:.6e} (exact {:.6e}), printed Omega- {:.6e}",
            x.re, est.gamma_plus[i].re, m.gamma_plus.re, est.omega_minus[i].re, m.omega_minus.re,
            est.omega_minus_printed[i].re
        );
    }

    // the same from simulated relaxation traces
    let cfg = SimConfig::new(0.05, 1500.0)?;
    let trace = |init: InitialState, sc: Scenario| -> Result<MeasurementTrace> {
        let tr = integrate_volterra(&system(&p, init, spectra.clone())?, &noise, &cfg)?;
        MeasurementTrace::new(tr.times, tr.q, sc)
    };
    let up = rate_series(&trace(InitialState::Ground, Scenario::RelaxationUp)?)?;
    let down = rate_series(&trace(InitialState::Excited, Scenario::RelaxationDown)?)?;
    let est = identify_from_relaxation(
        &discrete_laplace_natural(&up, 0.0)?,
        &discrete_laplace_natural(&down, 0.0)?,
        1e-6,
    )?;
    let m = modulated_at(&noise, 1.0, est.s[1])?;
    println!(
        "from traces at s = {:.4}i: Gamma+ {:.4e} (exact {:.4e}), Omega- {:.4e} (exact {:.4e})",
        est.s[1].im, est.gamma_plus[1], m.gamma_plus, est.omega_minus[1], m.omega_minus
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
