// Ensemble over classical Ornstein-Uhlenbeck noise against the Born model.
//
// `cargo run --release --example monte_carlo_vs_born`

use std::sync::Arc;

use noisespec::qubit::{system, ChargeQubitParams, InitialState, QubitFrame};
use noisespec::sim::{integrate_volterra, monte_carlo_reference, OuProcess, SimConfig};
use noisespec::Result;

pub fn run_example() -> Result<()> {
    let p = ChargeQubitParams::from_gap_angle(1.0, std::f64::consts::FRAC_PI_2)?;
    let frame = QubitFrame::new(&p, InitialState::ZeroCharge.frame());
    let cfg = SimConfig::new(0.02, 60.0)?;
    for (g2, tau_c) in [(0.01, 0.2), (0.25, 2.0)] {
        let ou = OuProcess::new(g2, tau_c)?;
        let noise = ou.noise_model()?;
        let sys = system(&p, InitialState::ZeroCharge, Arc::new(noise.clone()))?;
        let born = integrate_volterra(&sys, &noise, &cfg)?;
        let mc = monte_carlo_reference(&frame.h0, &frame.h1, &ou, sys.v0(), 1000, &cfg, 42)?;
        let gap = born
            .q
            .iter()
            .zip(&mc.mean.q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let se = mc.stderr.iter().cloned().fold(0.0, f64::max);
        println!(
            "g2 = {g2}, tau_c = {tau_c}: max |q_mc - q_born| = {gap:.4}, max stderr = {se:.4}"
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
