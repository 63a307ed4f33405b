//! JSON and CSV file formats.
//!
//! * CPWL function: `{"c0", "c1", "knots", "coeffs"}`;
//! * ReLU network: `{"K", "v", "w", "b", "c0", "c1"}`;
//! * solver report: `{"z", "iterations", "primal_residual", "dual_residual",
//!   "objective", "converged"}`;
//! * data: CSV with header `x,y`; envelope samples: CSV with header `x,lo,hi`.
//!
//! Floats are written with the shortest representation that round-trips.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use lipreg_core::{AdmmReport, CpwlFunction, DataSet, EnvelopeBand, ReluNetParams};
use serde::{Deserialize, Serialize};

use crate::pipeline::{FitMetrics, FitResult};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{path}: expected header `{expected}`")]
    Header {
        path: String,
        expected: &'static str,
    },
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        source: lipreg_core::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpwlJson {
    pub c0: f64,
    pub c1: f64,
    pub knots: Vec<f64>,
    pub coeffs: Vec<f64>,
}

impl From<&CpwlFunction> for CpwlJson {
    fn from(f: &CpwlFunction) -> Self {
        Self {
            c0: f.c0(),
            c1: f.c1(),
            knots: f.knots().to_vec(),
            coeffs: f.coeffs().to_vec(),
        }
    }
}

impl TryFrom<CpwlJson> for CpwlFunction {
    type Error = lipreg_core::Error;

    fn try_from(j: CpwlJson) -> Result<Self, Self::Error> {
        CpwlFunction::new(j.c0, j.c1, j.knots, j.coeffs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReluJson {
    #[serde(rename = "K")]
    pub k: usize,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
}

impl From<&ReluNetParams> for ReluJson {
    fn from(p: &ReluNetParams) -> Self {
        Self {
            k: p.width(),
            v: p.v.clone(),
            w: p.w.clone(),
            b: p.b.clone(),
            c0: p.c0,
            c1: p.c1,
        }
    }
}

impl TryFrom<ReluJson> for ReluNetParams {
    type Error = lipreg_core::Error;

    fn try_from(j: ReluJson) -> Result<Self, Self::Error> {
        if j.k != j.v.len() {
            return Err(lipreg_core::Error::LengthMismatch {
                expected: j.k,
                found: j.v.len(),
            });
        }
        ReluNetParams::new(j.v, j.w, j.b, j.c0, j.c1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmmReportJson {
    pub z: Vec<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub objective: f64,
    pub converged: bool,
}

impl From<&AdmmReport> for AdmmReportJson {
    fn from(r: &AdmmReport) -> Self {
        Self {
            z: r.z.clone(),
            iterations: r.iterations,
            primal_residual: r.primal_residual,
            dual_residual: r.dual_residual,
            objective: r.objective,
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResultJson {
    pub model: CpwlJson,
    pub z: Vec<f64>,
    pub metrics: FitMetrics,
    pub solver: AdmmReportJson,
}

impl From<&FitResult> for FitResultJson {
    fn from(r: &FitResult) -> Self {
        Self {
            model: (&r.model).into(),
            z: r.z.clone(),
            metrics: r.metrics.clone(),
            solver: (&r.solver).into(),
        }
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn create(path: &Path) -> Result<BufWriter<File>, FormatError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| FormatError::Io {
            path: path_str(path),
            source,
        })
}

fn read_to_string(path: &Path) -> Result<String, FormatError> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|source| FormatError::Io {
            path: path_str(path),
            source,
        })?;
    Ok(s)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut w = create(path)?;
    w.write_all(to_json_string(value).as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| FormatError::Io {
            path: path_str(path),
            source,
        })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    serde_json::from_str(&read_to_string(path)?).map_err(|source| FormatError::Json {
        path: path_str(path),
        source,
    })
}

pub fn read_cpwl_json(path: &Path) -> Result<CpwlFunction, FormatError> {
    let j: CpwlJson = read_json(path)?;
    CpwlFunction::try_from(j).map_err(|source| FormatError::Invalid {
        path: path_str(path),
        source,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> FormatError + '_ {
    move |source| FormatError::Csv {
        path: path_str(path),
        source,
    }
}

fn write_rows<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl Iterator<Item = [f64; N]>,
) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io {
        path: path_str(path),
        source,
    })
}

pub fn write_data_csv(path: &Path, data: &DataSet) -> Result<(), FormatError> {
    let rows = data.xs().iter().zip(data.ys()).map(|(&x, &y)| [x, y]);
    write_rows(path, ["x", "y"], rows)
}

/// Reads an `x,y` CSV with header. Rows are sorted by `x`; the data must
/// then be strictly increasing and finite.
pub fn read_data_csv(path: &Path) -> Result<DataSet, FormatError> {
    let text = read_to_string(path)?;
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err(path))?;
    if header.len() != 2 || &header[0] != "x" || &header[1] != "y" {
        return Err(FormatError::Header {
            path: path_str(path),
            expected: "x,y",
        });
    }
    let mut pts = Vec::new();
    for row in r.deserialize::<(f64, f64)>() {
        pts.push(row.map_err(csv_err(path))?);
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (xs, ys) = pts.into_iter().unzip();
    DataSet::new(xs, ys).map_err(|source| FormatError::Invalid {
        path: path_str(path),
        source,
    })
}

pub fn write_envelope_csv(path: &Path, bands: &[EnvelopeBand]) -> Result<(), FormatError> {
    write_rows(
        path,
        ["x", "lo", "hi"],
        bands.iter().map(|b| [b.x, b.lo, b.hi]),
    )
}
