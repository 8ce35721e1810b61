//! File formats: distance matrices (CSV and binary), label vectors,
//! newline-delimited trace records, and co-clustering exports.
//!
//! All on-disk indices and labels are 1-based; everything in memory is
//! 0-based.

use crate::core::{validate_distance_matrix, validate_distance_matrix_flat, DistanceMatrix, MatrixError};
use crate::posterior::CoClusteringMatrix;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

/// magic prefix of the binary matrix format
pub const BINARY_MAGIC: &[u8; 4] = b"BDCM";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: cannot parse '{token}' as a number")]
    Parse { path: String, line: usize, token: String },
    #[error("{path}: bad magic (expected BDCM)")]
    BadMagic { path: String },
    #[error("{path}: truncated binary matrix")]
    Truncated { path: String },
    #[error("{path}: {source}")]
    Matrix {
        path: String,
        #[source]
        source: MatrixError,
    },
    #[error("{path}:{line}: {msg}")]
    Record { path: String, line: usize, msg: String },
}

fn file_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::File { path: path.display().to_string(), source }
}

/// Read a square matrix from CSV. A single leading header line is
/// allowed and detected by its first field failing to parse as a number.
pub fn read_matrix_csv(path: &Path) -> Result<DistanceMatrix, IoError> {
    let file = File::open(path).map_err(|e| file_err(path, e))?;
    let reader = BufReader::new(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| file_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut failed = None;
        for token in trimmed.split(',') {
            match token.trim().parse::<f64>() {
                Ok(v) => row.push(v),
                Err(_) => {
                    failed = Some(token.trim().to_string());
                    break;
                }
            }
        }
        if let Some(token) = failed {
            if rows.is_empty() && lineno == 0 {
                continue; // header line
            }
            return Err(IoError::Parse { path: path.display().to_string(), line: lineno + 1, token });
        }
        rows.push(row);
    }
    validate_distance_matrix(&rows)
        .map_err(|source| IoError::Matrix { path: path.display().to_string(), source })
}

/// Write a matrix as headerless CSV with shortest-round-trip floats.
pub fn write_matrix_csv(path: &Path, d: &DistanceMatrix) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| file_err(path, e))?;
    let mut w = BufWriter::new(file);
    for i in 0..d.n() {
        let row: Vec<String> = d.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", row.join(",")).map_err(|e| file_err(path, e))?;
    }
    Ok(())
}

/// Binary matrix format: b"BDCM", u64 little-endian N, then N*N f64
/// little-endian values in row-major order.
pub fn write_matrix_binary(path: &Path, d: &DistanceMatrix) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| file_err(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(BINARY_MAGIC).map_err(|e| file_err(path, e))?;
    w.write_all(&(d.n() as u64).to_le_bytes()).map_err(|e| file_err(path, e))?;
    for v in d.values() {
        w.write_all(&v.to_le_bytes()).map_err(|e| file_err(path, e))?;
    }
    Ok(())
}

pub fn read_matrix_binary(path: &Path) -> Result<DistanceMatrix, IoError> {
    let file = File::open(path).map_err(|e| file_err(path, e))?;
    let mut r = BufReader::new(file);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| IoError::Truncated { path: path.display().to_string() })?;
    if &magic != BINARY_MAGIC {
        return Err(IoError::BadMagic { path: path.display().to_string() });
    }
    let mut nbuf = [0u8; 8];
    r.read_exact(&mut nbuf)
        .map_err(|_| IoError::Truncated { path: path.display().to_string() })?;
    let n = u64::from_le_bytes(nbuf) as usize;
    let mut flat = Vec::with_capacity(n * n);
    let mut vbuf = [0u8; 8];
    for _ in 0..n * n {
        r.read_exact(&mut vbuf)
            .map_err(|_| IoError::Truncated { path: path.display().to_string() })?;
        flat.push(f64::from_le_bytes(vbuf));
    }
    validate_distance_matrix_flat(n, &flat)
        .map_err(|source| IoError::Matrix { path: path.display().to_string(), source })
}

/// Read a matrix in either format, sniffing the binary magic.
pub fn read_matrix_auto(path: &Path) -> Result<DistanceMatrix, IoError> {
    let mut file = File::open(path).map_err(|e| file_err(path, e))?;
    let mut magic = [0u8; 4];
    let is_binary = file.read_exact(&mut magic).is_ok() && &magic == BINARY_MAGIC;
    drop(file);
    if is_binary {
        read_matrix_binary(path)
    } else {
        read_matrix_csv(path)
    }
}

/// Read a label vector: one 1-based label per line (header allowed),
/// returned 0-based.
pub fn read_labels_csv(path: &Path) -> Result<Vec<usize>, IoError> {
    let file = File::open(path).map_err(|e| file_err(path, e))?;
    let reader = BufReader::new(file);
    let mut labels = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| file_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.parse::<usize>() {
            Ok(v) if v >= 1 => labels.push(v - 1),
            _ => {
                if labels.is_empty() && lineno == 0 {
                    continue; // header
                }
                return Err(IoError::Parse {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    token: trimmed.to_string(),
                });
            }
        }
    }
    Ok(labels)
}

/// Write 0-based labels as one 1-based label per line.
pub fn write_labels_csv(path: &Path, labels: &[usize]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| file_err(path, e))?;
    let mut w = BufWriter::new(file);
    for &z in labels {
        writeln!(w, "{}", z + 1).map_err(|e| file_err(path, e))?;
    }
    Ok(())
}

/// One retained MCMC draw as stored in the newline-delimited trace file.
/// Medoid indices and labels are 1-based on disk.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TraceRecord {
    pub iter: u64,
    pub chain: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub medoids: Option<Vec<Vec<usize>>>,
    pub labels: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub log_post: f64,
}

pub fn write_trace_jsonl<'a, I: IntoIterator<Item = &'a TraceRecord>>(
    path: &Path,
    records: I,
) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| file_err(path, e))?;
    let mut w = BufWriter::new(file);
    for rec in records {
        let line = serde_json::to_string(rec).expect("serializable record");
        writeln!(w, "{line}").map_err(|e| file_err(path, e))?;
    }
    Ok(())
}

pub fn read_trace_jsonl(path: &Path) -> Result<Vec<TraceRecord>, IoError> {
    let file = File::open(path).map_err(|e| file_err(path, e))?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| file_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TraceRecord = serde_json::from_str(&line).map_err(|e| IoError::Record {
            path: path.display().to_string(),
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Label matrix export: one retained draw per row, 1-based labels.
pub fn write_label_matrix_csv(path: &Path, draws: &[Vec<usize>]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| file_err(path, e))?;
    let mut w = BufWriter::new(file);
    for z in draws {
        let row: Vec<String> = z.iter().map(|&v| (v + 1).to_string()).collect();
        writeln!(w, "{}", row.join(",")).map_err(|e| file_err(path, e))?;
    }
    Ok(())
}

pub fn write_coclustering_csv(path: &Path, m: &CoClusteringMatrix) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| file_err(path, e))?;
    let mut w = BufWriter::new(file);
    for i in 0..m.n() {
        let row: Vec<String> = (0..m.n()).map(|j| m.get(i, j).to_string()).collect();
        writeln!(w, "{}", row.join(",")).map_err(|e| file_err(path, e))?;
    }
    Ok(())
}

/// Binary PGM (P5) rendering of the co-clustering matrix; probability 1
/// maps to black on a white background.
pub fn write_coclustering_pgm(path: &Path, m: &CoClusteringMatrix) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| file_err(path, e))?;
    let mut w = BufWriter::new(file);
    write!(w, "P5\n{} {}\n255\n", m.n(), m.n()).map_err(|e| file_err(path, e))?;
    let mut bytes = Vec::with_capacity(m.n() * m.n());
    for i in 0..m.n() {
        for j in 0..m.n() {
            let v = (255.0 * (1.0 - m.get(i, j))).round().clamp(0.0, 255.0) as u8;
            bytes.push(v);
        }
    }
    w.write_all(&bytes).map_err(|e| file_err(path, e))?;
    Ok(())
}
