// Laplace-domain response `v(s)`, rates and stationary values.
//
// `cargo run --example frequency_response`

use std::sync::Arc;

use noisespec::freq::{
    bloch_response, final_value, stationary_rate, sweep, transition_rate, Component,
};
use noisespec::noise::NoiseModel;
use noisespec::qubit::{system, ChargeQubitParams, InitialState};
use noisespec::{Result, C64};

pub fn run_example() -> Result<()> {
    let p = ChargeQubitParams::from_gap_angle(1.0, std::f64::consts::FRAC_PI_3)?;
    let noise = Arc::new(NoiseModel::lorentzian(0.004, 0.5)?);

    // coherent oscillation in the charge frame
    let sys = system(&p, InitialState::ZeroCharge, noise.clone())?;
    let s = C64::new(0.05, 0.9);
    println!(
        "v(s) at s = {s}: {:.4?}",
        bloch_response(&sys, s)?.as_slice()
    );

    let grid: Vec<C64> = (1..=5).map(|k| C64::new(0.01, 0.4 * k as f64)).collect();
    let fr = sweep(&sys, &grid)?;
    for (s, v) in fr.grid.iter().zip(&fr.v_of_s) {
        println!("  |v3({:.2})| = {:.4}", s, v[3].norm());
    }
    println!(
        "stationary v3 = {:.6}",
        final_value(&sys, Component::Bloch(3))?
    );

    // relaxation from the excited eigenstate
    let down = system(&p, InitialState::Excited, noise)?;
    println!(
        "down-rate response at s = 0.1: {:.4e}",
        transition_rate(&down, C64::new(0.1, 0.0))?
    );
    let r = stationary_rate(&down)?;
    println!(
        "stationary v3 = {:.4}, relaxation rate = {:.4e}, transition rate = {:.4e}",
        r.v3_stationary, r.relaxation_rate, r.rate
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
