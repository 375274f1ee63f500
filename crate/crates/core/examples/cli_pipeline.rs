// The `noisespec` command drivers, called from code: simulate a trace at
// the default acquisition settings, identify it, and run a validation suite.
//
// `cargo run --example cli_pipeline`

use noisespec::noise::NoiseModelDoc;
use noisespec::pipeline::{run_identify, run_simulate, run_validate, MethodName, RunConfig};
use noisespec::units::ghz_to_rad_per_ps;
use noisespec::Result;

pub fn run_example() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("noisespec-example-{}", std::process::id()));
    let d = ghz_to_rad_per_ps(6.0);
    let mut cfg = RunConfig::from_json(
        r#"{
            "qubit": {"ej_ghz": 6.0, "eel_ghz": 0.0},
            "acquisition": {"dt_ps": 9.0, "horizon_ps": 2900.0, "noise_stddev": 0.02},
            "seed": 1
        }"#,
    )?;
    cfg.noise = Some(NoiseModelDoc::lorentzian(0.01 * d * d, 0.2 / d));
    cfg.io.out_dir = Some(dir.clone());

    let sim = run_simulate(&cfg)?;
    println!(
        "simulated {} samples into {}",
        sim.trace.times.len(),
        sim.path.display()
    );

    cfg.io.input = Some(sim.path.clone());
    cfg.identify.method = MethodName::AcExact;
    let out = run_identify(&cfg)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&out.report).unwrap_or_default()
    );

    cfg.validate.suite = "closed-form-equivalence".into();
    let v = run_validate(&cfg)?;
    println!(
        "suite {} pass = {} ({} checks)",
        v.suite,
        v.pass,
        v.checks.len()
    );
    std::fs::remove_dir_all(&dir).map_err(|e| noisespec::Error::io(&dir, e))?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
