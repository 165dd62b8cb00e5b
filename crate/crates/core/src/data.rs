//! Synthetic point clouds and CSV input/output.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mapper::{MapperError, PointCloud};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("invalid dataset: {0}")]
    SpecInvalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    Parse { row: usize, column: String, value: String },
    #[error("row {row} has {found} fields, header has {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("no column named `{0}`")]
    MissingLabelColumn(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Cloud(#[from] MapperError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Independent uniform parameters.
    #[default]
    Random,
    /// Evenly spaced parameters, without noise unless `noise_sd` is set.
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetKind {
    Circle {
        #[serde(default = "default_circle_n")]
        n: usize,
        #[serde(default = "default_radius")]
        radius: f64,
        #[serde(default = "default_center")]
        center: [f64; 2],
        /// Radial noise; `None` means 1% of the radius for random sampling
        /// and no noise on a grid.
        #[serde(default)]
        noise_sd: Option<f64>,
        #[serde(default)]
        sampling: Sampling,
    },
    TwoCircles {
        #[serde(default = "default_circle_n")]
        n: usize,
        #[serde(default = "default_r_inner")]
        r_inner: f64,
        #[serde(default = "default_r_outer")]
        r_outer: f64,
        #[serde(default)]
        noise_sd: Option<f64>,
        #[serde(default)]
        sampling: Sampling,
    },
    KleinBottle {
        #[serde(default = "default_klein_n")]
        n: usize,
        #[serde(default)]
        sampling: Sampling,
    },
    Csv {
        path: PathBuf,
        #[serde(default)]
        label_column: Option<String>,
    },
}

fn default_circle_n() -> usize {
    5000
}
fn default_radius() -> f64 {
    0.5
}
fn default_center() -> [f64; 2] {
    [0.5, 0.5]
}
fn default_r_inner() -> f64 {
    0.8
}
fn default_r_outer() -> f64 {
    1.0
}
fn default_klein_n() -> usize {
    15875
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    #[serde(flatten)]
    pub kind: DatasetKind,
    #[serde(default)]
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(kind: DatasetKind, seed: u64) -> Self {
        DatasetSpec { kind, seed }
    }

    /// Circle of radius 1/2 centred at (1/2, 1/2).
    pub fn circle(n: usize, seed: u64) -> Self {
        Self::new(
            DatasetKind::Circle {
                n,
                radius: default_radius(),
                center: default_center(),
                noise_sd: None,
                sampling: Sampling::Random,
            },
            seed,
        )
    }

    pub fn two_circles(n: usize, seed: u64) -> Self {
        Self::new(
            DatasetKind::TwoCircles {
                n,
                r_inner: default_r_inner(),
                r_outer: default_r_outer(),
                noise_sd: None,
                sampling: Sampling::Random,
            },
            seed,
        )
    }

    pub fn klein_bottle(n: usize, seed: u64) -> Self {
        Self::new(
            DatasetKind::KleinBottle {
                n,
                sampling: Sampling::Random,
            },
            seed,
        )
    }

    pub fn validate(&self) -> Result<(), DataError> {
        let bad = |msg: String| Err(DataError::SpecInvalid(msg));
        let check_noise = |sd: Option<f64>| match sd {
            Some(s) if !(s >= 0.0 && s.is_finite()) => bad(format!("noise_sd must be non-negative, got {s}")),
            _ => Ok(()),
        };
        match &self.kind {
            DatasetKind::Circle {
                n,
                radius,
                center,
                noise_sd,
                ..
            } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("radius must be positive, got {radius}"));
                }
                if !center.iter().all(|c| c.is_finite()) {
                    return bad("center must be finite".into());
                }
                check_noise(*noise_sd)
            }
            DatasetKind::TwoCircles {
                n,
                r_inner,
                r_outer,
                noise_sd,
                ..
            } => {
                if *n < 2 {
                    return bad("two_circles needs n of at least 2".into());
                }
                if !(*r_inner > 0.0 && r_inner < r_outer && r_outer.is_finite()) {
                    return bad(format!("need 0 < r_inner < r_outer, got {r_inner} and {r_outer}"));
                }
                check_noise(*noise_sd)
            }
            DatasetKind::KleinBottle { n, .. } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
                Ok(())
            }
            DatasetKind::Csv { .. } => Ok(()),
        }
    }
}

/// Samples the dataset described by `spec`, or loads it for the CSV kind.
pub fn generate(spec: &DatasetSpec) -> Result<PointCloud, DataError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.kind {
        DatasetKind::Circle {
            n,
            radius,
            center,
            noise_sd,
            sampling,
        } => {
            let sd = noise_sd.unwrap_or(default_noise(*radius, *sampling));
            let rows = circle_points(&mut rng, *n, *radius, *center, sd, *sampling)?;
            Ok(PointCloud::from_rows(rows)?)
        }
        DatasetKind::TwoCircles {
            n,
            r_inner,
            r_outer,
            noise_sd,
            sampling,
        } => {
            let n_outer = n - n / 2;
            let sd_outer = noise_sd.unwrap_or(default_noise(*r_outer, *sampling));
            let sd_inner = noise_sd.unwrap_or(default_noise(*r_inner, *sampling));
            let mut rows = circle_points(&mut rng, n_outer, *r_outer, [0.0, 0.0], sd_outer, *sampling)?;
            rows.extend(circle_points(&mut rng, n / 2, *r_inner, [0.0, 0.0], sd_inner, *sampling)?);
            let labels = (0..*n)
                .map(|i| if i < n_outer { "outer" } else { "inner" }.to_string())
                .collect();
            Ok(PointCloud::from_rows(rows)?.with_labels(labels)?)
        }
        DatasetKind::KleinBottle { n, sampling } => {
            let params: Vec<(f64, f64)> = match sampling {
                Sampling::Random => (0..*n).map(|_| (rng.random::<f64>() * TAU, rng.random::<f64>() * TAU)).collect(),
                Sampling::Grid => {
                    let nu = (*n as f64).sqrt().ceil() as usize;
                    let nv = n.div_ceil(nu);
                    (0..*n)
                        .map(|k| (TAU * (k % nu) as f64 / nu as f64, TAU * (k / nu) as f64 / nv as f64))
                        .collect()
                }
            };
            let rows = params.into_iter().map(|(u, v)| klein_embedding(u, v).to_vec()).collect();
            Ok(PointCloud::from_rows(rows)?)
        }
        DatasetKind::Csv { path, label_column } => load_csv(path, label_column.as_deref()),
    }
}

fn default_noise(radius: f64, sampling: Sampling) -> f64 {
    match sampling {
        Sampling::Random => 0.01 * radius,
        Sampling::Grid => 0.0,
    }
}

fn circle_points(
    rng: &mut ChaCha8Rng,
    n: usize,
    radius: f64,
    center: [f64; 2],
    noise_sd: f64,
    sampling: Sampling,
) -> Result<Vec<Vec<f64>>, DataError> {
    let noise = Normal::new(0.0, noise_sd).map_err(|e| DataError::SpecInvalid(e.to_string()))?;
    Ok((0..n)
        .map(|k| {
            let theta = match sampling {
                Sampling::Random => rng.random::<f64>() * TAU,
                Sampling::Grid => TAU * k as f64 / n as f64,
            };
            let r = if noise_sd > 0.0 { radius + noise.sample(rng) } else { radius };
            vec![center[0] + r * theta.cos(), center[1] + r * theta.sin()]
        })
        .collect())
}

/// Klein bottle in R^5: the standard R^4 embedding with a fifth coordinate
/// `0.1 cos u`.
pub fn klein_embedding(u: f64, v: f64) -> [f64; 5] {
    let ring = 2.0 + v.cos();
    [
        ring * u.cos(),
        ring * u.sin(),
        v.sin() * (u / 2.0).cos(),
        v.sin() * (u / 2.0).sin(),
        0.1 * u.cos(),
    ]
}

fn io_error(path: &Path, source: std::io::Error) -> DataError {
    DataError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_error(path: &Path, e: csv::Error) -> DataError {
    if e.is_io_error() {
        if let csv::ErrorKind::Io(io) = e.into_kind() {
            return io_error(path, io);
        }
        unreachable!()
    }
    DataError::Csv(e.to_string())
}

/// Reads a comma-separated table with a header row. Every column other than
/// `label_column` must be numeric. Rows are numbered from 1, not counting
/// the header.
pub fn load_csv(path: &Path, label_column: Option<&str>) -> Result<PointCloud, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let label_index = match label_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| DataError::MissingLabelColumn(name.to_string()))?,
        ),
        None => None,
    };
    let coords: Vec<usize> = (0..header.len()).filter(|&j| Some(j) != label_index).collect();
    if coords.is_empty() {
        return Err(DataError::SpecInvalid("no coordinate columns".into()));
    }

    let mut data = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = r + 1;
        if record.len() != header.len() {
            return Err(DataError::RaggedRows {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        for &j in &coords {
            let cell = record[j].trim();
            let value: f64 = cell.parse().map_err(|_| DataError::Parse {
                row,
                column: header[j].clone(),
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(DataError::Parse {
                    row,
                    column: header[j].clone(),
                    value: cell.to_string(),
                });
            }
            data.push(value);
        }
        if let Some(j) = label_index {
            labels.push(record[j].trim().to_string());
        }
    }
    if data.is_empty() {
        return Err(DataError::SpecInvalid(format!("{} has no data rows", path.display())));
    }
    let mut cloud = PointCloud::from_flat(data, coords.len())?;
    cloud.column_names = Some(coords.iter().map(|&j| header[j].clone()).collect());
    if label_index.is_some() {
        cloud = cloud.with_labels(labels)?;
    }
    Ok(cloud)
}

/// Writes coordinates (and labels, as a trailing `label` column) with a
/// header row. Unnamed columns are called `x0, x1, ...`.
pub fn write_csv(cloud: &PointCloud, path: &Path) -> Result<(), DataError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut header: Vec<String> = match &cloud.column_names {
        Some(names) => names.clone(),
        None => (0..cloud.dim()).map(|j| format!("x{j}")).collect(),
    };
    if cloud.labels.is_some() {
        header.push("label".into());
    }
    writer.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (i, p) in cloud.rows().enumerate() {
        let mut record: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        if let Some(labels) = &cloud.labels {
            record.push(labels[i].clone());
        }
        writer.write_record(&record).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| io_error(path, e))
}
