//! File formats: complex-matrix CSV, metadata sidecars, and plan files.
//!
//! A joint signal or spectrum is a headerless CSV with one row per Hilbert
//! index and two columns (re, im) per vertex, every number printed with 17
//! significant digits so files are byte-stable across runs. A JSON sidecar
//! `{m, n, alpha, beta}` travels next to each CSV (same path, `.json`
//! extension); raw signals carry orders (0, 0).

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::transform::{JointSignal, JointSpectrum};

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Sidecar metadata for a signal or spectrum CSV.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SignalMeta {
    pub m: usize,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

/// Sidecar path: the CSV path with its extension replaced by `json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn write_matrix_csv(path: &Path, x: &CMatrix) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for i in 0..x.nrows() {
        let mut row = String::new();
        for j in 0..x.ncols() {
            if j > 0 {
                row.push(',');
            }
            let z = x[(i, j)];
            row.push_str(&fmt_f64(z.re));
            row.push(',');
            row.push_str(&fmt_f64(z.im));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

pub fn read_matrix_csv(path: &Path) -> Result<CMatrix> {
    let file = std::fs::File::open(path)?;
    read_matrix(std::io::BufReader::new(file))
}

pub fn read_matrix(reader: impl BufRead) -> Result<CMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if !fields.len().is_multiple_of(2) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("odd field count {}; need (re, im) pairs", fields.len()),
            });
        }
        let mut row = Vec::with_capacity(fields.len() / 2);
        for pair in fields.chunks(2) {
            let re: f64 = pair[0].parse().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad real part: {e}"),
            })?;
            let im: f64 = pair[1].parse().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad imaginary part: {e}"),
            })?;
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "non-finite entry".into(),
                });
            }
            row.push(Complex64::new(re, im));
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "ragged row width".into(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty matrix file".into(),
        });
    }
    let m = rows.len();
    let n = rows[0].len();
    Ok(CMatrix::from_fn(m, n, |i, j| rows[i][j]))
}

fn write_meta(csv: &Path, meta: &SignalMeta) -> Result<()> {
    let json = serde_json::to_string_pretty(meta)?;
    std::fs::write(sidecar_path(csv), json + "\n")?;
    Ok(())
}

fn read_meta(csv: &Path) -> Result<SignalMeta> {
    let text = std::fs::read_to_string(sidecar_path(csv))?;
    Ok(serde_json::from_str(&text)?)
}

/// Write a signal CSV plus its `(0, 0)`-order sidecar.
pub fn write_signal(path: &Path, sig: &JointSignal) -> Result<()> {
    write_matrix_csv(path, sig.matrix())?;
    write_meta(
        path,
        &SignalMeta {
            m: sig.m(),
            n: sig.n(),
            alpha: 0.0,
            beta: 0.0,
        },
    )
}

/// Read a signal CSV; the sidecar is optional for raw signals.
pub fn read_signal(path: &Path) -> Result<JointSignal> {
    let x = read_matrix_csv(path)?;
    Ok(JointSignal::new(x))
}

/// Write a spectrum CSV plus its sidecar carrying the fractional orders.
pub fn write_spectrum(path: &Path, spec: &JointSpectrum) -> Result<()> {
    write_matrix_csv(path, spec.coeff())?;
    write_meta(
        path,
        &SignalMeta {
            m: spec.m(),
            n: spec.n(),
            alpha: spec.alpha(),
            beta: spec.beta(),
        },
    )
}

/// Read a spectrum CSV; the sidecar is required because it carries the
/// fractional orders.
pub fn read_spectrum(path: &Path) -> Result<JointSpectrum> {
    let coeff = read_matrix_csv(path)?;
    let meta = read_meta(path)?;
    if meta.m != coeff.nrows() || meta.n != coeff.ncols() {
        return Err(Error::DimensionMismatch {
            context: "spectrum sidecar",
            expected: format!("{}x{}", meta.m, meta.n),
            got: format!("{}x{}", coeff.nrows(), coeff.ncols()),
        });
    }
    Ok(JointSpectrum::from_parts(coeff, meta.alpha, meta.beta))
}
