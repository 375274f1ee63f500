// Finite-record Laplace transforms of sampled traces and gap detection.
//
// `cargo run --example discrete_laplace`

use noisespec::ident::{
    detect_delta, discrete_laplace, discrete_laplace_natural, MeasurementTrace, Scenario,
};
use noisespec::units::{ghz_to_rad_per_ps, rad_per_ps_to_ghz};
use noisespec::Result;

pub fn run_example() -> Result<()> {
    // damped oscillation sampled every 9 ps for 2.9 ns
    let delta = ghz_to_rad_per_ps(6.0);
    let dt = 9.0;
    let values: Vec<f64> = (0..323)
        .map(|k| {
            let t = k as f64 * dt;
            0.5 * (1.0 - (-t / 900.0).exp() * (delta * t).cos())
        })
        .collect();
    let trace = MeasurementTrace::from_uniform(dt, values, Scenario::CoherentOscillation)?;

    let dl = discrete_laplace_natural(&trace.detrended(0.5), 0.0)?;
    println!(
        "{} bins, truncation residual {:.3}",
        dl.omegas.len(),
        dl.truncation_residual
    );
    for w in &dl.warnings {
        println!("warning: {w}");
    }
    let (d, bin) = detect_delta(&dl)?;
    println!(
        "detected {:.4} GHz (truth 6.0), bin width {:.4} GHz",
        rad_per_ps_to_ghz(d),
        rad_per_ps_to_ghz(bin)
    );

    // arbitrary grid with damping
    let omegas: Vec<f64> = (0..5).map(|k| delta * (0.8 + 0.1 * k as f64)).collect();
    let dl = discrete_laplace(&trace.detrended(0.5), &omegas, 2.0 / trace.span())?;
    for (w, v) in dl.omegas.iter().zip(&dl.values) {
        println!("  w = {w:.4}: {v:.3}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
