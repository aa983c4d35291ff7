//! Feature matrix and evaluation config ingestion.
//!
//! The matrix is comma-separated text: a header row naming the features
//! (the first header cell labels the platform column) and one row per
//! platform. The evaluation config is TOML and declares, per feature, a
//! direction, an optional weight, and an optional token encoding map.
//! Qualitative cells such as `FHD` are resolved only through that map.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NcapError, Result};
use crate::level::CapabilityProfile;
use crate::normalize::StdDev;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(alias = "more", alias = "more_is_better")]
    MoreIsBetter,
    #[serde(alias = "less", alias = "less_is_better")]
    LessIsBetter,
}

impl Direction {
    /// +1 for more-is-better, -1 for less-is-better.
    pub fn sign(self) -> f64 {
        match self {
            Self::MoreIsBetter => 1.0,
            Self::LessIsBetter => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    #[serde(default)]
    pub unit: String,
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<BTreeMap<String, f64>>,
}

impl FeatureSpec {
    pub fn new(name: impl Into<String>, direction: Direction) -> Self {
        Self {
            name: name.into(),
            unit: String::new(),
            direction,
            encoding: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(NcapError::Config("feature with empty name".into()));
        }
        if let Some(enc) = &self.encoding {
            for (token, value) in enc {
                if !(value.is_finite() && *value > 0.0) {
                    return Err(NcapError::Config(format!(
                        "feature `{}`: encoding for `{token}` must be positive and finite, got {value}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Number(f64),
    Missing,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(v),
            Cell::Missing => None,
        }
    }

    pub fn is_missing(self) -> bool {
        matches!(self, Cell::Missing)
    }
}

/// Platforms × features grid of finite numbers or missing cells.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    platforms: Vec<String>,
    features: Vec<FeatureSpec>,
    values: Vec<Vec<Cell>>,
}

impl FeatureMatrix {
    pub fn new(
        platforms: Vec<String>,
        features: Vec<FeatureSpec>,
        values: Vec<Vec<Cell>>,
    ) -> Result<Self> {
        if platforms.is_empty() {
            return Err(NcapError::Format("matrix has no platforms".into()));
        }
        if features.is_empty() {
            return Err(NcapError::Format("matrix has no features".into()));
        }
        if values.len() != platforms.len() {
            return Err(NcapError::Format(format!(
                "{} platform ids but {} value rows",
                platforms.len(),
                values.len()
            )));
        }
        let mut seen = HashSet::new();
        for f in &features {
            f.validate()?;
            if !seen.insert(f.name.as_str()) {
                return Err(NcapError::Format(format!("duplicate feature `{}`", f.name)));
            }
        }
        let mut seen = HashSet::new();
        for p in &platforms {
            if !seen.insert(p.as_str()) {
                return Err(NcapError::Format(format!("duplicate platform `{p}`")));
            }
        }
        for (p, row) in platforms.iter().zip(&values) {
            if row.len() != features.len() {
                return Err(NcapError::Format(format!(
                    "platform `{p}` has {} cells, expected {}",
                    row.len(),
                    features.len()
                )));
            }
            if let Some(Cell::Number(v)) = row
                .iter()
                .find(|c| matches!(c, Cell::Number(v) if !v.is_finite()))
            {
                return Err(NcapError::Format(format!(
                    "platform `{p}` has non-finite value {v}"
                )));
            }
        }
        Ok(Self {
            platforms,
            features,
            values,
        })
    }

    pub fn platforms(&self) -> &[String] {
        &self.platforms
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.values
    }

    pub fn cell(&self, platform: usize, feature: usize) -> Cell {
        self.values[platform][feature]
    }

    pub fn n_platforms(&self) -> usize {
        self.platforms.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn missing_count(&self) -> usize {
        self.values
            .iter()
            .flatten()
            .filter(|c| c.is_missing())
            .count()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingValuePolicy {
    #[default]
    Error,
    #[serde(alias = "mean", alias = "column_mean")]
    ColumnMean,
    Exclude,
}

impl FromStr for MissingValuePolicy {
    type Err = NcapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "error" => Ok(Self::Error),
            "mean" | "columnmean" | "column_mean" => Ok(Self::ColumnMean),
            "exclude" => Ok(Self::Exclude),
            other => Err(NcapError::Config(format!(
                "unknown missing-value policy `{other}`"
            ))),
        }
    }
}

impl fmt::Display for MissingValuePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Error => "error",
            Self::ColumnMean => "mean",
            Self::Exclude => "exclude",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureEntry {
    #[serde(flatten)]
    pub spec: FeatureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

/// Evaluation config as read from TOML.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    #[serde(default)]
    pub missing: MissingValuePolicy,
    #[serde(default)]
    pub zscore: StdDev,
    #[serde(default)]
    pub features: Vec<FeatureEntry>,
    #[serde(default)]
    pub profiles: Vec<CapabilityProfile>,
}

impl EvalConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: EvalConfig = toml::from_str(text).map_err(|e| NcapError::Config(e.to_string()))?;
        let mut seen = HashSet::new();
        for f in &cfg.features {
            f.spec.validate()?;
            if !seen.insert(f.spec.name.as_str()) {
                return Err(NcapError::Config(format!(
                    "feature `{}` declared twice",
                    f.spec.name
                )));
            }
        }
        Ok(cfg)
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureEntry> {
        self.features.iter().find(|f| f.spec.name == name)
    }

    /// User-defined weights in the order of `features`. Every feature must
    /// carry a `weight` entry.
    pub fn weights_for(&self, features: &[FeatureSpec]) -> Result<Vec<f64>> {
        features
            .iter()
            .map(|f| {
                self.feature(&f.name).and_then(|e| e.weight).ok_or_else(|| {
                    NcapError::Config(format!("no weight declared for feature `{}`", f.name))
                })
            })
            .collect()
    }
}

fn is_missing_token(token: &str) -> bool {
    token.is_empty() || token == "-" || token.eq_ignore_ascii_case("n/a")
}

fn parse_cell(token: &str, spec: &FeatureSpec, row: usize) -> Result<Cell> {
    let token = token.trim();
    if is_missing_token(token) {
        return Ok(Cell::Missing);
    }
    if let Ok(v) = token.parse::<f64>() {
        if v.is_finite() {
            return Ok(Cell::Number(v));
        }
    }
    spec.encoding
        .as_ref()
        .and_then(|enc| enc.get(token))
        .map(|v| Cell::Number(*v))
        .ok_or_else(|| NcapError::Encoding {
            row,
            column: spec.name.clone(),
            token: token.to_string(),
        })
}

fn csv_error(e: csv::Error) -> NcapError {
    NcapError::Format(format!("malformed csv: {e}"))
}

/// Parse a comma-separated feature matrix, resolving directions and
/// encodings from `config`. Rows in errors are 1-based data rows.
pub fn parse_feature_matrix(text: &str, config: &EvalConfig) -> Result<FeatureMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(csv_error)?.clone();
    if header.len() < 2 {
        return Err(NcapError::Format(
            "header needs a platform column and at least one feature".into(),
        ));
    }
    let mut features = Vec::with_capacity(header.len() - 1);
    let mut seen = HashSet::new();
    for name in header.iter().skip(1) {
        if !seen.insert(name.to_string()) {
            return Err(NcapError::Format(format!("duplicate feature `{name}`")));
        }
        let entry = config.feature(name).ok_or_else(|| {
            NcapError::Config(format!("no direction declared for feature `{name}`"))
        })?;
        features.push(entry.spec.clone());
    }

    let mut platforms = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let row = i + 1;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != header.len() {
            return Err(NcapError::Format(format!(
                "row {row}: expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        let id = record.get(0).unwrap_or_default();
        if id.is_empty() {
            return Err(NcapError::Format(format!("row {row}: empty platform id")));
        }
        let cells = record
            .iter()
            .skip(1)
            .zip(&features)
            .map(|(token, spec)| parse_cell(token, spec, row))
            .collect::<Result<Vec<_>>>()?;
        platforms.push(id.to_string());
        values.push(cells);
    }
    FeatureMatrix::new(platforms, features, values)
}

/// Serialize a matrix back to comma-separated text. Missing cells are
/// written as `-`; numbers use the shortest round-trip representation.
pub fn write_feature_matrix(m: &FeatureMatrix, platform_label: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once(platform_label).chain(m.features.iter().map(|f| f.name.as_str()));
    w.write_record(header).map_err(csv_error)?;
    for (p, row) in m.platforms.iter().zip(&m.values) {
        let mut record = vec![p.clone()];
        record.extend(row.iter().map(|c| match c {
            Cell::Number(v) => v.to_string(),
            Cell::Missing => "-".to_string(),
        }));
        w.write_record(&record).map_err(csv_error)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| NcapError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| NcapError::Format(e.to_string()))
}

/// A matrix after applying a [`MissingValuePolicy`]. Under `Error` and
/// `ColumnMean` it holds no missing cells; under `Exclude` the remaining
/// missing cells form the per-platform exclusion mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedMatrix {
    matrix: FeatureMatrix,
    policy: MissingValuePolicy,
}

impl ResolvedMatrix {
    pub fn matrix(&self) -> &FeatureMatrix {
        &self.matrix
    }

    pub fn policy(&self) -> MissingValuePolicy {
        self.policy
    }

    pub fn platforms(&self) -> &[String] {
        self.matrix.platforms()
    }

    pub fn features(&self) -> &[FeatureSpec] {
        self.matrix.features()
    }

    pub fn is_present(&self, platform: usize, feature: usize) -> bool {
        !self.matrix.cell(platform, feature).is_missing()
    }

    /// `mask[p][f]` is true when the cell takes part in aggregation.
    pub fn mask(&self) -> Vec<Vec<bool>> {
        self.matrix
            .rows()
            .iter()
            .map(|row| row.iter().map(|c| !c.is_missing()).collect())
            .collect()
    }

    /// Present entries of one feature column as `(platform index, value)`.
    pub fn column(&self, feature: usize) -> Vec<(usize, f64)> {
        self.matrix
            .rows()
            .iter()
            .enumerate()
            .filter_map(|(p, row)| row[feature].value().map(|v| (p, v)))
            .collect()
    }
}

pub fn resolve_missing(m: &FeatureMatrix, policy: MissingValuePolicy) -> Result<ResolvedMatrix> {
    for (j, f) in m.features.iter().enumerate() {
        if m.values.iter().all(|row| row[j].is_missing()) {
            return Err(NcapError::DegenerateColumn {
                feature: f.name.clone(),
            });
        }
    }
    let matrix = match policy {
        MissingValuePolicy::Error => {
            for (p, row) in m.platforms.iter().zip(&m.values) {
                if let Some(j) = row.iter().position(|c| c.is_missing()) {
                    return Err(NcapError::MissingValue {
                        platform: p.clone(),
                        feature: m.features[j].name.clone(),
                    });
                }
            }
            m.clone()
        }
        MissingValuePolicy::ColumnMean => {
            let means: Vec<f64> = (0..m.n_features())
                .map(|j| {
                    let present: Vec<f64> = m.values.iter().filter_map(|r| r[j].value()).collect();
                    present.iter().sum::<f64>() / present.len() as f64
                })
                .collect();
            let values = m
                .values
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&means)
                        .map(|(c, mean)| match c {
                            Cell::Missing => Cell::Number(*mean),
                            number => *number,
                        })
                        .collect()
                })
                .collect();
            FeatureMatrix {
                platforms: m.platforms.clone(),
                features: m.features.clone(),
                values,
            }
        }
        MissingValuePolicy::Exclude => m.clone(),
    };
    Ok(ResolvedMatrix { matrix, policy })
}
