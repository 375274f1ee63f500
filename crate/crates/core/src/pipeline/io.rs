//! Trace files: CSV `time_ps,q_mean[,q_stderr]` with a JSON sidecar of the
//! same stem.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ident::{MeasurementTrace, Scenario};
use crate::noise::NoiseModelDoc;
use crate::qubit::ChargeQubitParams;
use crate::units::rad_per_ps_to_ghz;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitRecord {
    pub ej_ghz: f64,
    pub eel_ghz: f64,
    pub delta_rad_per_ps: f64,
    pub delta_ghz: f64,
    pub theta_rad: f64,
}

impl QubitRecord {
    pub fn from_params(p: &ChargeQubitParams) -> Self {
        Self {
            ej_ghz: rad_per_ps_to_ghz(p.ej()),
            eel_ghz: rad_per_ps_to_ghz(p.e_el()),
            delta_rad_per_ps: p.delta(),
            delta_ghz: rad_per_ps_to_ghz(p.delta()),
            theta_rad: p.theta(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionRecord {
    pub dt_ps: f64,
    pub horizon_ps: f64,
    pub integration_dt_ps: f64,
    pub noise_stddev: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots_per_point: Option<u64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceUnits {
    pub time: String,
    pub q: String,
}

impl Default for TraceUnits {
    fn default() -> Self {
        Self {
            time: "ps".into(),
            q: "probability".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub scenario: Scenario,
    pub qubit: QubitRecord,
    pub acquisition: AcquisitionRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseModelDoc>,
    #[serde(default)]
    pub units: TraceUnits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub times: Vec<f64>,
    pub q_mean: Vec<f64>,
    pub q_stderr: Option<Vec<f64>>,
    pub meta: Option<TraceMeta>,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

impl TraceFile {
    /// Scenario from the sidecar, or coherent oscillation without one.
    pub fn scenario(&self) -> Scenario {
        self.meta
            .as_ref()
            .map(|m| m.scenario)
            .unwrap_or(Scenario::CoherentOscillation)
    }

    pub fn to_trace(&self) -> Result<MeasurementTrace> {
        MeasurementTrace::new(self.times.clone(), self.q_mean.clone(), self.scenario())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        match &self.q_stderr {
            Some(_) => w.write_record(["time_ps", "q_mean", "q_stderr"]),
            None => w.write_record(["time_ps", "q_mean"]),
        }
        .map_err(err)?;
        for i in 0..self.times.len() {
            let mut row = vec![
                format!("{:e}", self.times[i]),
                format!("{:e}", self.q_mean[i]),
            ];
            if let Some(se) = &self.q_stderr {
                row.push(format!("{:e}", se[i]));
            }
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|e| Error::io("<trace csv>", e))?;
        Ok(())
    }

    /// Writes `path` and its sidecar.
    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f))
            .map_err(|e| relabel(e, path))?;
        if let Some(meta) = &self.meta {
            let side = sidecar_path(path);
            write_json(&side, meta)?;
        }
        Ok(())
    }

    /// Reads a trace and, when present, its sidecar.
    pub fn load(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(e, path))?;
        let headers = rdr.headers().map_err(|e| csv_error(e, path))?.clone();
        let cols: Vec<&str> = headers.iter().collect();
        let with_stderr = match cols.as_slice() {
            ["time_ps", "q_mean"] => false,
            ["time_ps", "q_mean", "q_stderr"] => true,
            _ => {
                return Err(Error::Parse(format!(
                    "{}: expected header time_ps,q_mean[,q_stderr], got {}",
                    path.display(),
                    cols.join(",")
                )))
            }
        };
        let (mut times, mut q, mut se) = (Vec::new(), Vec::new(), Vec::new());
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| csv_error(e, path))?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|x| x.trim().parse().ok())
                    .ok_or_else(|| {
                        Error::Parse(format!(
                            "{}: line {}: bad number in column {}",
                            path.display(),
                            row + 2,
                            i + 1
                        ))
                    })
            };
            times.push(field(0)?);
            q.push(field(1)?);
            if with_stderr {
                se.push(field(2)?);
            }
        }
        let side = sidecar_path(path);
        let meta = if side.exists() {
            let text = std::fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
            Some(
                serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", side.display())))?,
            )
        } else {
            None
        };
        Ok(Self {
            times,
            q_mean: q,
            q_stderr: with_stderr.then_some(se),
            meta,
        })
    }
}

fn relabel(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    }
}

fn csv_error(e: csv::Error, path: &Path) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::Parse(format!("{}: {e}", path.display()))
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Opens `path` for writing, wrapping errors with the path.
pub fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(std::io::BufWriter::new(f))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}
