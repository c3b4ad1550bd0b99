//! File formats: JSON instances and paths, CSV ingest, plot export.
//!
//! JSON numbers are written with shortest-round-trip formatting, so a
//! save/load cycle reproduces every `f64` bit for bit. Paths serialize their
//! records verbatim (including the segment sign pattern, which is not
//! recoverable from the values alone at a leave kink).

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Kink, ModelError, PathKind, ProblemInstance, RegularizationPath, SignPattern,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}, column '{column}': {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },
    #[error("column '{column}' is degenerate after centering")]
    DegenerateColumn { column: String },
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Free-form provenance attached to a stored instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_factor: Option<f64>,
}

impl InstanceMeta {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// On-disk form of a problem instance: `y` and the row-major design matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub y: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "InstanceMeta::is_empty")]
    pub meta: InstanceMeta,
}

impl InstanceFile {
    pub fn from_instance(inst: &ProblemInstance, meta: InstanceMeta) -> Self {
        let x = inst
            .x()
            .rows()
            .into_iter()
            .map(|row| row.to_vec())
            .collect();
        Self {
            y: inst.y().to_vec(),
            x,
            meta,
        }
    }

    pub fn to_instance(&self) -> Result<ProblemInstance, IoError> {
        let n = self.x.len();
        if n == 0 {
            return Err(IoError::Format("instance has no rows".into()));
        }
        let p = self.x[0].len();
        if let Some(i) = self.x.iter().position(|row| row.len() != p) {
            return Err(IoError::Format(format!(
                "row {i} has {} entries, expected {p}",
                self.x[i].len()
            )));
        }
        let flat: Vec<f64> = self.x.iter().flatten().copied().collect();
        let x = Array2::from_shape_vec((n, p), flat)
            .map_err(|e| IoError::Format(e.to_string()))?;
        Ok(ProblemInstance::new(Array1::from_vec(self.y.clone()), x)?)
    }
}

/// On-disk form of one path record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KinkRecord {
    pub lambda: f64,
    pub active: Vec<usize>,
    pub values: Vec<f64>,
    pub pattern: Vec<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid_until: Option<f64>,
}

/// On-disk form of a regularization path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathFile {
    /// `"exact"` or `"approximate"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub lambda_max: f64,
    pub p: usize,
    /// Present (and true) only when the computation stopped early.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
    pub kinks: Vec<KinkRecord>,
}

impl PathFile {
    pub fn from_path(path: &RegularizationPath) -> Self {
        let (kind, epsilon) = match path.kind {
            PathKind::Exact => ("exact".to_string(), None),
            PathKind::Approximate { epsilon } => ("approximate".to_string(), Some(epsilon)),
        };
        Self {
            kind,
            epsilon,
            lambda_max: path.lambda_max(),
            p: path.p(),
            truncated: !path.complete,
            kinks: path
                .kinks
                .iter()
                .map(|k| KinkRecord {
                    lambda: k.lambda,
                    active: k.active_set.clone(),
                    values: k.values.clone(),
                    pattern: k.pattern.as_slice().to_vec(),
                    valid_until: k.valid_until,
                })
                .collect(),
        }
    }

    pub fn to_path(&self) -> Result<RegularizationPath, IoError> {
        let kind = match self.kind.as_str() {
            "exact" => PathKind::Exact,
            "approximate" => PathKind::Approximate {
                epsilon: self.epsilon.ok_or_else(|| {
                    IoError::Format("approximate path is missing its epsilon".into())
                })?,
            },
            other => {
                return Err(IoError::Format(format!(
                    "unknown path kind '{other}', expected 'exact' or 'approximate'"
                )))
            }
        };
        let kinks = self
            .kinks
            .iter()
            .map(|k| {
                if k.active.len() != k.values.len() {
                    return Err(IoError::Format(format!(
                        "record at lambda = {} has {} active indices but {} values",
                        k.lambda,
                        k.active.len(),
                        k.values.len()
                    )));
                }
                if k.pattern.len() != self.p {
                    return Err(IoError::Format(format!(
                        "record at lambda = {} has a pattern of length {}, expected {}",
                        k.lambda,
                        k.pattern.len(),
                        self.p
                    )));
                }
                Ok(Kink {
                    lambda: k.lambda,
                    active_set: k.active.clone(),
                    values: k.values.clone(),
                    pattern: SignPattern::new(k.pattern.clone())?,
                    valid_until: k.valid_until,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(RegularizationPath {
            kind,
            kinks,
            complete: !self.truncated,
        })
    }
}

pub fn save_instance(
    file: &Path,
    inst: &ProblemInstance,
    meta: InstanceMeta,
) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(file)?);
    serde_json::to_writer_pretty(&mut out, &InstanceFile::from_instance(inst, meta))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn load_instance(file: &Path) -> Result<(ProblemInstance, InstanceMeta), IoError> {
    let parsed: InstanceFile = serde_json::from_reader(BufReader::new(File::open(file)?))?;
    Ok((parsed.to_instance()?, parsed.meta))
}

pub fn save_path(file: &Path, path: &RegularizationPath) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(file)?);
    serde_json::to_writer_pretty(&mut out, &PathFile::from_path(path))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn load_path(file: &Path) -> Result<RegularizationPath, IoError> {
    let parsed: PathFile = serde_json::from_reader(BufReader::new(File::open(file)?))?;
    parsed.to_path()
}

/// Reads an instance from CSV with a header row. The response column is the
/// one named `y`, or the last column when none is. Returns the instance and
/// the feature column names in design order.
///
/// With `normalize` set, every feature column is centered and scaled to unit
/// norm and `y` is centered; a column that is (numerically) constant cannot
/// be scaled and is reported as degenerate.
pub fn read_csv_instance(
    file: &Path,
    normalize: bool,
) -> Result<(ProblemInstance, Vec<String>), IoError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(file)?;
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.len() < 2 {
        return Err(IoError::Format(
            "need at least one feature column and one response column".into(),
        ));
    }
    let y_col = headers
        .iter()
        .position(|h| h == "y")
        .unwrap_or(headers.len() - 1);
    let feature_cols: Vec<usize> = (0..headers.len()).filter(|&j| j != y_col).collect();
    let names: Vec<String> = feature_cols.iter().map(|&j| headers[j].clone()).collect();
    let mut y_vals: Vec<f64> = Vec::new();
    let mut x_vals: Vec<f64> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(IoError::Format(format!(
                "line {line}: expected {} fields, found {}",
                headers.len(),
                record.len()
            )));
        }
        let parse = |j: usize| -> Result<f64, IoError> {
            let raw = record.get(j).unwrap_or("").trim();
            raw.parse::<f64>().map_err(|e| IoError::Parse {
                line,
                column: headers[j].clone(),
                message: format!("'{raw}': {e}"),
            })
        };
        y_vals.push(parse(y_col)?);
        for &j in &feature_cols {
            x_vals.push(parse(j)?);
        }
    }
    let n = y_vals.len();
    if n == 0 {
        return Err(IoError::Format("CSV contains no data rows".into()));
    }
    let mut y = Array1::from_vec(y_vals);
    let mut x = Array2::from_shape_vec((n, feature_cols.len()), x_vals)
        .map_err(|e| IoError::Format(e.to_string()))?;
    if normalize {
        normalize_in_place(&mut y, &mut x, &names)?;
    }
    Ok((ProblemInstance::new(y, x)?, names))
}

/// Centers each column of `x`, scales it to unit norm, and centers `y`.
fn normalize_in_place(
    y: &mut Array1<f64>,
    x: &mut Array2<f64>,
    names: &[String],
) -> Result<(), IoError> {
    let n = x.nrows();
    for (j, name) in names.iter().enumerate() {
        let mut col = x.column_mut(j);
        let before: f64 = col.dot(&col).sqrt();
        let mean = col.sum() / n as f64;
        col.mapv_inplace(|v| v - mean);
        let norm: f64 = col.dot(&col).sqrt();
        if norm <= 1e-12 * before.max(f64::MIN_POSITIVE) {
            return Err(IoError::DegenerateColumn {
                column: name.clone(),
            });
        }
        col.mapv_inplace(|v| v / norm);
    }
    let y_mean = y.sum() / n as f64;
    y.mapv_inplace(|v| v - y_mean);
    Ok(())
}

/// Compresses a coefficient for plotting: `sign(v) |v|^0.1` keeps signs and
/// ordering while making the geometrically shrinking scales of worst-case
/// paths visible on one axis.
pub fn plot_transform(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(0.1)
    }
}

/// Writes per-record plot rows as CSV: `lambda` followed by the transformed
/// dense coefficients.
pub fn write_plot_data<W: Write>(mut out: W, path: &RegularizationPath) -> Result<(), IoError> {
    let p = path.p();
    let header: Vec<String> = std::iter::once("lambda".to_string())
        .chain((0..p).map(|j| format!("w{j}")))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for kink in &path.kinks {
        let dense = kink.dense(p);
        let mut row = Vec::with_capacity(p + 1);
        row.push(format!("{:e}", kink.lambda));
        for &v in dense.iter() {
            row.push(format!("{:e}", plot_transform(v)));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::gen_pathological;
    use crate::approx::{compute_approx_path, ApproxOptions};
    use crate::homotopy::{compute_exact_path, HomotopyOptions};

    fn roundtrip_instance(inst: &ProblemInstance) -> ProblemInstance {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("inst.json");
        save_instance(&file, inst, InstanceMeta::default()).unwrap();
        load_instance(&file).unwrap().0
    }

    #[test]
    fn instance_json_roundtrip_is_bitwise() {
        let inst = gen_pathological(4).unwrap();
        let back = roundtrip_instance(&inst);
        assert_eq!(inst.n(), back.n());
        assert_eq!(inst.p(), back.p());
        for (a, b) in inst.y().iter().zip(back.y()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for (a, b) in inst.x().iter().zip(back.x()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn path_json_roundtrip_is_exact() {
        let inst = gen_pathological(3).unwrap();
        let exact = compute_exact_path(&inst, &HomotopyOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("path.json");
        save_path(&file, &exact).unwrap();
        assert_eq!(load_path(&file).unwrap(), exact);
        let approx = compute_approx_path(&inst, &ApproxOptions::new(0.05, 1e-3))
            .unwrap()
            .path;
        save_path(&file, &approx).unwrap();
        assert_eq!(load_path(&file).unwrap(), approx);
    }

    #[test]
    fn truncated_flag_survives_the_roundtrip() {
        let inst = gen_pathological(3).unwrap();
        let mut path = compute_exact_path(&inst, &HomotopyOptions::default()).unwrap();
        path.complete = false;
        let json = serde_json::to_string(&PathFile::from_path(&path)).unwrap();
        assert!(json.contains("\"truncated\":true"));
        let back: PathFile = serde_json::from_str(&json).unwrap();
        assert!(!back.to_path().unwrap().complete);
        path.complete = true;
        let json = serde_json::to_string(&PathFile::from_path(&path)).unwrap();
        assert!(!json.contains("truncated"));
    }

    #[test]
    fn csv_picks_the_named_response_column() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("data.csv");
        std::fs::write(&file, "a,y,b\n1.0,10.0,2.0\n3.0,20.0,4.0\n0.5,15.0,1.5\n").unwrap();
        let (inst, names) = read_csv_instance(&file, false).unwrap();
        assert_eq!(names, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(inst.y().to_vec(), vec![10.0, 20.0, 15.0]);
        assert_eq!(inst.x()[[1, 1]], 4.0);
    }

    #[test]
    fn csv_defaults_to_the_last_column() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("data.csv");
        std::fs::write(&file, "a,b,target\n1.0,2.0,3.0\n4.0,5.0,6.0\n").unwrap();
        let (inst, names) = read_csv_instance(&file, false).unwrap();
        assert_eq!(names, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(inst.y().to_vec(), vec![3.0, 6.0]);
    }

    #[test]
    fn csv_parse_errors_carry_the_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("data.csv");
        std::fs::write(&file, "a,y\n1.0,2.0\nnope,3.0\n").unwrap();
        match read_csv_instance(&file, false) {
            Err(IoError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, "a");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn normalization_centers_and_scales() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("data.csv");
        std::fs::write(&file, "a,b,y\n1.0,5.0,1.0\n2.0,6.0,2.0\n4.0,10.0,3.0\n").unwrap();
        let (inst, _) = read_csv_instance(&file, true).unwrap();
        for j in 0..inst.p() {
            let col = inst.column(j);
            assert!((col.sum()).abs() < 1e-12);
            assert!((col.dot(&col) - 1.0).abs() < 1e-12);
        }
        assert!(inst.y().sum().abs() < 1e-12);
    }

    #[test]
    fn constant_columns_are_degenerate_under_normalization() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("data.csv");
        std::fs::write(&file, "a,c,y\n1.0,0.1,1.0\n2.0,0.1,2.0\n3.0,0.1,3.0\n").unwrap();
        match read_csv_instance(&file, true) {
            Err(IoError::DegenerateColumn { column }) => assert_eq!(column, "c"),
            other => panic!("expected a degenerate column error, got {other:?}"),
        }
    }

    #[test]
    fn plot_rows_transform_and_align() {
        assert_eq!(plot_transform(0.0), 0.0);
        assert!((plot_transform(1e-10) - 0.1).abs() < 1e-12);
        assert!(plot_transform(-1e-10) < 0.0);
        let inst = gen_pathological(2).unwrap();
        let path = compute_exact_path(&inst, &HomotopyOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_plot_data(&mut buf, &path).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), path.kinks.len() + 1);
        assert_eq!(lines[0], "lambda,w0,w1");
    }
}
