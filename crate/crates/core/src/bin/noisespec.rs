use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use noisespec::error::ErrorClass;
use noisespec::pipeline::{self, MethodName, RunConfig};
use noisespec::Error;

/// Colored-noise qubit simulation and noise-spectrum identification.
///
/// Configuration is a single JSON document (`--config`); flags override the
/// matching keys. GHz values are ordinary frequencies.
#[derive(Parser)]
#[command(name = "noisespec", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `io.out_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate a protocol and write a synthetic trace.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Recover the noise spectrum from measured traces.
    Identify {
        #[command(flatten)]
        common: Common,
        /// eq19, eq20, eq21, ac-exact, relaxation or golden-rule.
        #[arg(long)]
        method: Option<String>,
        /// Gap in GHz; skips detection.
        #[arg(long)]
        delta_ghz: Option<f64>,
        /// Real part of the transform variable in units of 1/T.
        #[arg(long)]
        damping_per_t: Option<f64>,
        /// Trace CSV, or rate CSV for golden-rule.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        input_up: Option<PathBuf>,
        #[arg(long)]
        input_down: Option<PathBuf>,
    },
    /// Golden-rule and full-model stationary rates over bias angles.
    GoldenRule {
        #[command(flatten)]
        common: Common,
    },
    /// Run a named cross-validation suite.
    Validate {
        #[command(flatten)]
        common: Common,
        /// closed-form-equivalence, golden-rule or mc-born.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        n_traj: Option<usize>,
    },
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(o) = &common.out {
        cfg.io.out_dir = Some(o.clone());
    }
    Ok(cfg)
}

fn run(cmd: Cmd) -> Result<bool, Error> {
    match cmd {
        Cmd::Simulate { common } => {
            let out = pipeline::run_simulate(&load(&common)?)?;
            println!("wrote {}", out.path.display());
        }
        Cmd::Identify {
            common,
            method,
            delta_ghz,
            damping_per_t,
            input,
            input_up,
            input_down,
        } => {
            let mut cfg = load(&common)?;
            if let Some(m) = method {
                cfg.identify.method = MethodName::parse(&m)?;
            }
            if delta_ghz.is_some() {
                cfg.identify.delta_ghz = delta_ghz;
            }
            if let Some(d) = damping_per_t {
                cfg.identify.damping_per_t = d;
            }
            cfg.io.input = input.or(cfg.io.input);
            cfg.io.input_up = input_up.or(cfg.io.input_up);
            cfg.io.input_down = input_down.or(cfg.io.input_down);
            let out = pipeline::run_identify(&cfg)?;
            for w in &out.report.warnings {
                eprintln!("noisespec: warning: {w}");
            }
            for p in &out.report.outputs {
                println!("wrote {}", p.display());
            }
        }
        Cmd::GoldenRule { common } => {
            let cfg = load(&common)?;
            let pts = pipeline::run_golden_rule(&cfg)?;
            println!(
                "wrote {} bias points to {}",
                pts.len(),
                cfg.out_dir().join("golden_rule.csv").display()
            );
        }
        Cmd::Validate {
            common,
            suite,
            n_traj,
        } => {
            let mut cfg = load(&common)?;
            if let Some(s) = suite {
                cfg.validate.suite = s;
            }
            if let Some(n) = n_traj {
                cfg.validate.n_traj = n;
            }
            let v = pipeline::run_validate(&cfg)?;
            for c in &v.checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                println!(
                    "{tag} {}: {:.3e} (tolerance {:.1e}) {}",
                    c.name, c.measured, c.tolerance, c.note
                );
            }
            return Ok(v.pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let first = e.to_string();
                let first = first
                    .lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: ");
                eprintln!("noisespec: error[usage]: {first}");
                return ExitCode::from(2);
            }
            // help and version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("noisespec: error[numerical]: validation failed");
            ExitCode::from(3)
        }
        Err(e) => {
            let (tag, code) = match e.class() {
                ErrorClass::Usage => ("usage", 2),
                ErrorClass::Numerical => ("numerical", 3),
                ErrorClass::Io => ("io", 4),
            };
            let msg = e.to_string().replace('\n', " ");
            eprintln!("noisespec: error[{tag}]: {msg}");
            ExitCode::from(code)
        }
    }
}
