// Spectrum samples from stationary rates at several bias angles.
//
// `cargo run --example golden_rule_sweep`

use std::f64::consts::PI;
use std::sync::Arc;

use noisespec::freq::stationary_rate;
use noisespec::ident::golden_rule_sweep;
use noisespec::noise::{NoiseModel, NoiseSpectra};
use noisespec::qubit::{golden_rule_rates, system, ChargeQubitParams, InitialState};
use noisespec::Result;

pub fn run_example() -> Result<()> {
    let ej = 1.0;
    let noise = NoiseModel::lorentzian(0.002, 0.5)?;
    let spectra: Arc<dyn NoiseSpectra> = Arc::new(noise.clone());
    let mut measurements = Vec::new();
    for theta in [PI / 2.0, PI / 3.0, PI / 4.0, PI / 6.0] {
        let p = ChargeQubitParams::from_bias(ej, ej / theta.tan())?;
        let down = stationary_rate(&system(&p, InitialState::Excited, spectra.clone())?)?.rate;
        let up = stationary_rate(&system(&p, InitialState::Ground, spectra.clone())?)?.rate;
        let (g_up, g_down) = golden_rule_rates(&p, &noise)?;
        println!("theta = {theta:.3}: model down {down:.4e} vs golden {g_down:.4e}; up {up:.4e} vs {g_up:.4e}");
        measurements.push((theta, up, down));
    }
    for s in golden_rule_sweep(ej, &measurements)? {
        println!(
            "Delta = {:.4}: Phi_FT(+Delta) = {:.4e} (model {:.4e})",
            s.delta,
            s.phi_at_plus_delta,
            noise.phi_ft(s.delta)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
