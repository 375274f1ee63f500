// Time-domain integration of the memory-kernel master equation.
//
// `cargo run --example volterra_simulation`

use std::sync::Arc;

use noisespec::noise::NoiseModel;
use noisespec::qubit::{system, ChargeQubitParams, InitialState};
use noisespec::sim::{integrate_volterra, transition_rate_trace, Scheme, SimConfig};
use noisespec::Result;

pub fn run_example() -> Result<()> {
    let p = ChargeQubitParams::from_gap_angle(1.0, std::f64::consts::FRAC_PI_2)?;
    let noise = NoiseModel::lorentzian(0.01, 0.2)?;

    // coherent oscillation with damping
    let sys = system(&p, InitialState::ZeroCharge, Arc::new(noise.clone()))?;
    let cfg = SimConfig::new(0.02, 400.0)?;
    let tr = integrate_volterra(&sys, &noise, &cfg)?;
    for k in (0..tr.len()).step_by(tr.len() / 8) {
        println!("t = {:7.2}  q = {:.5}", tr.times[k], tr.q[k]);
    }

    // the explicit scheme agrees to second order
    let pc = integrate_volterra(&sys, &noise, &cfg.with_scheme(Scheme::PredictorCorrector))?;
    let diff =
        tr.q.iter()
            .zip(&pc.q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
    println!("trapezoid vs predictor-corrector: max |dq| = {diff:.2e}");

    // relaxation from the excited state and its rate trace
    let down = system(&p, InitialState::Excited, Arc::new(noise.clone()))?;
    let tr = integrate_volterra(&down, &noise, &SimConfig::new(0.02, 200.0)?)?;
    let rate = transition_rate_trace(&tr)?;
    println!("rate trace at t = 100: {:.4e}", rate[5000]);

    let mut csv = Vec::new();
    tr.write_csv(&mut csv)?;
    println!(
        "{}",
        String::from_utf8_lossy(&csv)
            .lines()
            .next()
            .unwrap_or_default()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
