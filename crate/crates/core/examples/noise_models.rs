// Parametric noise correlations and their transforms.
//
// `cargo run --example noise_models`

use noisespec::noise::{modulated_at, DampedSineOmega, NoiseModel, NoiseModelDoc};
use noisespec::{Result, C64};

pub fn run_example() -> Result<()> {
    let lor = NoiseModel::lorentzian(0.01, 2.0)?.with_omega(DampedSineOmega {
        amplitude: 0.004,
        tau_c: 2.0,
        tau_r: 1.0,
    })?;
    let white = NoiseModel::white(0.004)?;
    let ohmic = NoiseModel::ohmic(0.01, 5.0)?;
    let flicker = NoiseModel::one_over_f(1e-3, 0.01, 10.0, 4)?;

    for (name, m) in [
        ("lorentzian+omega", &lor),
        ("white", &white),
        ("ohmic", &ohmic),
        ("1/f", &flicker),
    ] {
        let (g, o) = m.correlation_at(0.5)?;
        let (gs, os) = m.laplace_at(C64::new(0.1, 1.0))?;
        let (gft, oft) = m.fourier_spectrum_at(1.0)?;
        println!("{name:>16}: Gamma(0.5) = {g:.3e}, Omega(0.5) = {o:.3e}");
        println!(
            "{:>16}  Gamma(s) = {gs:.3e}, Omega(s) = {os:.3e} at s = 0.1 + i",
            ""
        );
        println!(
            "{:>16}  Gamma_FT(1) = {gft:.4e}, 2 Im Omega(i) = {oft:.4e}",
            ""
        );
    }

    // noise as seen at the qubit frequency; Phi_FT(+-Delta) = Gamma+(0) -+ Omega-(0)
    let delta = 1.0;
    let ms = modulated_at(&lor, delta, C64::new(0.0, 0.0))?;
    println!(
        "Gamma+(0) = {:.4e}, Omega-(0) = {:.4e}",
        ms.gamma_plus.re, ms.omega_minus.re
    );
    println!(
        "Phi_FT(+Delta) = {:.4e}, Phi_FT(-Delta) = {:.4e}",
        lor.phi_ft(delta)?,
        lor.phi_ft(-delta)?
    );

    // JSON form; frequencies in rad/ps, times in ps
    let m = NoiseModelDoc::from_json(r#"{"kind": "lorentzian", "g2": 1.4e-5, "tau_c_ps": 5.3}"#)?;
    println!("from JSON: correlation time {:?} ps", m.correlation_time());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
