// Charge-qubit parameters, closed-form responses and golden-rule rates.
//
// `cargo run --example charge_qubit`

use std::sync::Arc;

use noisespec::noise::{DampedSineOmega, NoiseModel, NoiseSpectra};
use noisespec::qubit::{
    closed_form_q_theta, closed_form_rate_down, closed_form_rate_up, generic_q, golden_rule_rates,
    lowest_order_rates, optimal_point_q, system, ChargeQubitParams, InitialState, QubitDoc,
};
use noisespec::units::ghz_to_rad_per_ps;
use noisespec::{Result, C64};

pub fn run_example() -> Result<()> {
    // gate-charge parametrisation; GHz are ordinary frequencies
    let doc: QubitDoc = serde_json::from_str(r#"{"ej_ghz": 6.0, "ng": 0.45, "ec_ghz": 20.0}"#)
        .map_err(|e| noisespec::Error::Parse(e.to_string()))?;
    let p = doc.build()?;
    println!(
        "EJ = {:.4} rad/ps, E_el = {:.4}, Delta = {:.4}, theta = {:.4}",
        p.ej(),
        p.e_el(),
        p.delta(),
        p.theta()
    );
    println!("6 GHz = {:.4} rad/ps", ghz_to_rad_per_ps(6.0));

    let d = p.delta();
    let model = NoiseModel::lorentzian(0.01 * d * d, 0.2 / d)?.with_omega(DampedSineOmega {
        amplitude: 0.003 * d * d,
        tau_c: 0.2 / d,
        tau_r: 1.0 / d,
    })?;
    let spectra: Arc<dyn NoiseSpectra> = Arc::new(model.clone());

    // closed form against the generic matrix response
    let s = C64::new(0.0, 0.8 * d);
    let sys = system(&p, InitialState::ZeroCharge, spectra.clone())?;
    let (a, b) = (
        closed_form_q_theta(&p, spectra.as_ref(), s)?,
        generic_q(&sys, s)?,
    );
    println!("Q_theta(s): closed form {a:.6e}, generic {b:.6e}");

    // at the optimal point the response depends on Gamma alone
    let opt = ChargeQubitParams::from_gap_angle(d, std::f64::consts::FRAC_PI_2)?;
    println!(
        "optimal-point Q(s) = {:.6e}",
        optimal_point_q(&opt, spectra.as_ref(), s)?
    );

    let sr = C64::new(0.1 * d, 0.0);
    println!(
        "rates at s = {sr}: down {:.4e}, up {:.4e}",
        closed_form_rate_down(&opt, spectra.clone(), sr)?,
        closed_form_rate_up(&opt, spectra.clone(), sr)?
    );
    let (up, down) = lowest_order_rates(&p, spectra.as_ref(), sr)?;
    println!("lowest order: up {up:.4e}, down {down:.4e}");
    let (up, down) = golden_rule_rates(&p, &model)?;
    println!("golden rule: up {up:.4e} /ps, down {down:.4e} /ps");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
