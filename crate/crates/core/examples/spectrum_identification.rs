// Recover the noise spectrum from a simulated coherent-oscillation trace.
//
// `cargo run --release --example spectrum_identification`

use std::sync::Arc;

use noisespec::ident::{
    detect_delta, discrete_laplace_natural, identify_gamma_complex, identify_gamma_ft,
    identify_gamma_ft_ac, AcVariant, MeasurementTrace, Scenario, DEFAULT_MASK,
};
use noisespec::noise::{NoiseModel, NoiseSpectra};
use noisespec::qubit::{system, ChargeQubitParams, InitialState};
use noisespec::sim::{integrate_volterra, SimConfig};
use noisespec::{Result, C64};

pub fn run_example() -> Result<()> {
    let p = ChargeQubitParams::from_gap_angle(1.0, std::f64::consts::FRAC_PI_2)?;
    let noise = NoiseModel::lorentzian(0.02, 0.2)?;
    let sys = system(&p, InitialState::ZeroCharge, Arc::new(noise.clone()))?;
    let tr = integrate_volterra(&sys, &noise, &SimConfig::new(0.02, 6000.0)?)?;
    let trace = MeasurementTrace::new(tr.times, tr.q, Scenario::CoherentOscillation)?;

    let dl_ac = discrete_laplace_natural(&trace.detrended(0.5), 0.0)?;
    let (d, _) = detect_delta(&dl_ac)?;
    let p_hat = ChargeQubitParams::from_bias(d, 0.0)?;
    println!(
        "detected gap {d:.5}, truncation residual {:.1e}",
        dl_ac.truncation_residual
    );

    let dl_q = dl_ac.plus_constant(0.5)?;
    let estimates = [
        identify_gamma_complex(&dl_q, &p_hat, DEFAULT_MASK)?,
        identify_gamma_ft(&dl_q, &p_hat, DEFAULT_MASK)?,
        identify_gamma_ft_ac(&dl_ac, &p_hat, AcVariant::Exact, DEFAULT_MASK)?,
        identify_gamma_ft_ac(&dl_ac, &p_hat, AcVariant::Printed, DEFAULT_MASK)?,
    ];
    for est in &estimates {
        let mut worst = 0.0f64;
        for (w, g) in est.unmasked().filter(|(w, _)| (0.5..=1.5).contains(w)) {
            let want = 2.0 * noise.laplace_gamma(C64::new(0.0, w))?.re;
            worst = worst.max((g - want).abs() / want);
        }
        println!(
            "{:?}: {} masked bins, worst error on [0.5, 1.5] {:.2}%",
            est.method,
            est.masked_count(),
            100.0 * worst
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
