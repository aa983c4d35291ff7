//! Component-performance aggregation: four weighted normalized sums and
//! the weighted product.
//!
//! Weights are stored as magnitudes on a simplex; direction lives on the
//! feature. A less-is-better feature contributes `-w * eta` to a sum and
//! `phi^(-w)` to the product.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NcapError, Result};
use crate::ingest::ResolvedMatrix;
use crate::normalize::{normalize, NormalizationMethod, StdDev};

const WEIGHT_SUM_TOL: f64 = 1e-9;

/// One of the five combination methods producing an N_CP score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Max,
    Sum,
    Map,
    Zsc,
    Product,
}

impl Method {
    /// Column order used by the reported score tables.
    pub const ALL: [Method; 5] = [Self::Max, Self::Map, Self::Zsc, Self::Sum, Self::Product];

    pub fn name(self) -> &'static str {
        match self {
            Self::Max => "max",
            Self::Sum => "sum",
            Self::Map => "map",
            Self::Zsc => "zsc",
            Self::Product => "product",
        }
    }

    /// Table heading, e.g. `S_max` or `P`.
    pub fn label(self) -> &'static str {
        match self {
            Self::Max => "S_max",
            Self::Sum => "S_sum",
            Self::Map => "S_map",
            Self::Zsc => "S_zsc",
            Self::Product => "P",
        }
    }

    pub fn normalization(self) -> Option<NormalizationMethod> {
        match self {
            Self::Max => Some(NormalizationMethod::Max),
            Self::Sum => Some(NormalizationMethod::Sum),
            Self::Map => Some(NormalizationMethod::Map),
            Self::Zsc => Some(NormalizationMethod::Zsc),
            Self::Product => None,
        }
    }

    /// Parse a comma-separated method list such as `max,sum,product`.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out: Vec<Method> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let m: Method = part.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(NcapError::Config("no methods requested".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = NcapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" | "s_max" => Ok(Self::Max),
            "sum" | "s_sum" => Ok(Self::Sum),
            "map" | "s_map" => Ok(Self::Map),
            "zsc" | "s_zsc" => Ok(Self::Zsc),
            "product" | "p" => Ok(Self::Product),
            other => Err(NcapError::Config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightScheme {
    Uniform,
    UserDefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    scheme: WeightScheme,
}

impl WeightVector {
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(NcapError::EmptyInput(
                "uniform weights over zero features".into(),
            ));
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
            scheme: WeightScheme::Uniform,
        })
    }

    pub fn user_defined(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(NcapError::EmptyInput("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(NcapError::Config(format!(
                "weights must be finite and non-negative, got {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(NcapError::Config(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            weights,
            scheme: WeightScheme::UserDefined,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Per-platform N_CP scores, one column per method in request order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreTable {
    platforms: Vec<String>,
    columns: Vec<(Method, Vec<f64>)>,
}

impl ScoreTable {
    pub fn new(platforms: Vec<String>) -> Self {
        Self {
            platforms,
            columns: Vec::new(),
        }
    }

    pub fn with_columns(platforms: Vec<String>, columns: Vec<(Method, Vec<f64>)>) -> Result<Self> {
        let mut table = Self::new(platforms);
        for (m, scores) in columns {
            table.insert(m, scores)?;
        }
        Ok(table)
    }

    /// Add or replace a method column.
    pub fn insert(&mut self, method: Method, scores: Vec<f64>) -> Result<()> {
        if scores.len() != self.platforms.len() {
            return Err(NcapError::Dimension(format!(
                "{} scores for {} platforms",
                scores.len(),
                self.platforms.len()
            )));
        }
        if let Some(v) = scores.iter().find(|v| !v.is_finite()) {
            return Err(NcapError::Domain(format!("non-finite {method} score {v}")));
        }
        match self.columns.iter_mut().find(|(m, _)| *m == method) {
            Some(slot) => slot.1 = scores,
            None => self.columns.push((method, scores)),
        }
        Ok(())
    }

    pub fn platforms(&self) -> &[String] {
        &self.platforms
    }

    pub fn methods(&self) -> Vec<Method> {
        self.columns.iter().map(|(m, _)| *m).collect()
    }

    pub fn column(&self, method: Method) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, v)| v.as_slice())
    }

    pub fn columns(&self) -> &[(Method, Vec<f64>)] {
        &self.columns
    }
}

fn check_dims(m: &ResolvedMatrix, w: &WeightVector) -> Result<()> {
    if w.len() != m.features().len() {
        return Err(NcapError::Dimension(format!(
            "{} weights for {} features",
            w.len(),
            m.features().len()
        )));
    }
    Ok(())
}

/// Per-platform weights, renormalized over the features present for that
/// platform. Without missing cells these are the input weights unchanged.
fn effective_weights(m: &ResolvedMatrix, w: &WeightVector) -> Result<Vec<Vec<f64>>> {
    m.platforms()
        .iter()
        .enumerate()
        .map(|(p, id)| {
            let n = w.len();
            if (0..n).all(|f| m.is_present(p, f)) {
                return Ok(w.weights().to_vec());
            }
            let present: f64 = (0..n)
                .filter(|&f| m.is_present(p, f))
                .map(|f| w.weights()[f])
                .sum();
            if present <= 0.0 {
                return Err(NcapError::Dimension(format!(
                    "platform `{id}` has no weighted features present"
                )));
            }
            Ok((0..n)
                .map(|f| {
                    if m.is_present(p, f) {
                        w.weights()[f] / present
                    } else {
                        0.0
                    }
                })
                .collect())
        })
        .collect()
}

/// `S_k = sum_i s_i * w_i * eta_k(phi_i)` per platform.
pub fn weighted_sum(
    m: &ResolvedMatrix,
    w: &WeightVector,
    method: NormalizationMethod,
    std_dev: StdDev,
) -> Result<Vec<f64>> {
    check_dims(m, w)?;
    let weights = effective_weights(m, w)?;
    let mut scores = vec![0.0; m.platforms().len()];
    for (f, spec) in m.features().iter().enumerate() {
        let entries = m.column(f);
        let raw: Vec<f64> = entries.iter().map(|(_, v)| *v).collect();
        let eta = normalize(&raw, method, std_dev).map_err(|e| match e {
            NcapError::Domain(msg) => NcapError::Domain(format!("feature `{}`: {msg}", spec.name)),
            other => other,
        })?;
        let sign = spec.direction.sign();
        for ((p, _), value) in entries.iter().zip(&eta.values) {
            scores[*p] += sign * weights[*p][f] * value;
        }
    }
    Ok(scores)
}

/// `P = prod_i phi_i^(s_i * w_i)` per platform, on raw values.
pub fn weighted_product(m: &ResolvedMatrix, w: &WeightVector) -> Result<Vec<f64>> {
    check_dims(m, w)?;
    let weights = effective_weights(m, w)?;
    let features = m.features();
    m.platforms()
        .iter()
        .enumerate()
        .map(|(p, id)| {
            let mut score = 1.0;
            for (f, spec) in features.iter().enumerate() {
                let Some(phi) = m.matrix().cell(p, f).value() else {
                    continue;
                };
                if phi <= 0.0 {
                    return Err(NcapError::ProductDomain {
                        platform: id.clone(),
                        feature: spec.name.clone(),
                        value: phi,
                    });
                }
                score *= phi.powf(spec.direction.sign() * weights[p][f]);
            }
            Ok(score)
        })
        .collect()
}

pub fn score_method(
    m: &ResolvedMatrix,
    w: &WeightVector,
    method: Method,
    std_dev: StdDev,
) -> Result<Vec<f64>> {
    match method.normalization() {
        Some(norm) => weighted_sum(m, w, norm, std_dev),
        None => weighted_product(m, w),
    }
}

/// Score every requested method into one table.
pub fn score_table(
    m: &ResolvedMatrix,
    w: &WeightVector,
    methods: &[Method],
    std_dev: StdDev,
) -> Result<ScoreTable> {
    let mut table = ScoreTable::new(m.platforms().to_vec());
    for &method in methods {
        table.insert(method, score_method(m, w, method, std_dev)?)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{
        resolve_missing, Cell, Direction, FeatureMatrix, FeatureSpec, MissingValuePolicy,
    };

    fn matrix(rows: &[&[f64]], dirs: &[Direction]) -> ResolvedMatrix {
        let features = dirs
            .iter()
            .enumerate()
            .map(|(i, d)| FeatureSpec::new(format!("f{i}"), *d))
            .collect();
        let m = FeatureMatrix::new(
            (0..rows.len()).map(|i| format!("p{i}")).collect(),
            features,
            rows.iter()
                .map(|r| r.iter().map(|v| Cell::Number(*v)).collect())
                .collect(),
        )
        .unwrap();
        resolve_missing(&m, MissingValuePolicy::Error).unwrap()
    }

    use Direction::{LessIsBetter as Less, MoreIsBetter as More};

    #[test]
    fn sum_of_prenormalized_values() {
        // Two platforms so that eta_max of [0.5, x] leaves platform 0 at 0.5
        // and [1.0, 0.5] leaves platform 0 at 1.0.
        let m = matrix(&[&[0.5, 1.0], &[1.0, 0.5]], &[More, More]);
        let w = WeightVector::user_defined(vec![0.5, 0.5]).unwrap();
        let s = weighted_sum(&m, &w, NormalizationMethod::Max, StdDev::Population).unwrap();
        assert!((s[0] - 0.75).abs() < 1e-15);

        let m = matrix(&[&[0.5, 1.0], &[1.0, 0.5]], &[More, Less]);
        let s = weighted_sum(&m, &w, NormalizationMethod::Max, StdDev::Population).unwrap();
        assert!((s[0] - (-0.25)).abs() < 1e-15);
    }

    #[test]
    fn single_feature_max() {
        let m = matrix(&[&[2.0], &[4.0]], &[More]);
        let w = WeightVector::uniform(1).unwrap();
        let s = weighted_sum(&m, &w, NormalizationMethod::Max, StdDev::Population).unwrap();
        assert_eq!(s, vec![0.5, 1.0]);
    }

    #[test]
    fn product_examples() {
        let w = WeightVector::user_defined(vec![0.5, 0.5]).unwrap();
        let p = weighted_product(&matrix(&[&[4.0, 9.0]], &[More, More]), &w).unwrap();
        assert!((p[0] - 6.0).abs() < 1e-12);

        let w = WeightVector::uniform(1).unwrap();
        let p = weighted_product(&matrix(&[&[4.0]], &[Less]), &w).unwrap();
        assert!((p[0] - 0.25).abs() < 1e-15);

        let w = WeightVector::user_defined(vec![0.75, 0.25]).unwrap();
        let p = weighted_product(&matrix(&[&[2.0, 8.0]], &[More, More]), &w).unwrap();
        assert!((p[0] - 2.8284).abs() < 1e-4);
    }

    #[test]
    fn product_rejects_non_positive() {
        let w = WeightVector::uniform(2).unwrap();
        let err = weighted_product(&matrix(&[&[1.0, 0.0]], &[More, More]), &w).unwrap_err();
        assert_eq!(err.class(), "ProductDomainError");
    }

    #[test]
    fn weight_vector_validation() {
        let u = WeightVector::uniform(4).unwrap();
        assert!(u.weights().iter().all(|w| *w == 0.25));
        assert_eq!(u.scheme(), WeightScheme::Uniform);
        assert!(WeightVector::user_defined(vec![0.5, 0.4]).is_err());
        assert!(WeightVector::user_defined(vec![1.5, -0.5]).is_err());
        let survey = vec![0.07, 0.03, 0.10, 0.10, 0.05, 0.10, 0.05, 0.05, 0.15, 0.30];
        assert!(WeightVector::user_defined(survey).is_ok());
    }

    #[test]
    fn dimension_mismatch() {
        let m = matrix(&[&[1.0, 2.0]], &[More, More]);
        let w = WeightVector::uniform(3).unwrap();
        assert_eq!(
            weighted_product(&m, &w).unwrap_err().class(),
            "DimensionError"
        );
        assert_eq!(
            weighted_sum(&m, &w, NormalizationMethod::Sum, StdDev::Population)
                .unwrap_err()
                .class(),
            "DimensionError"
        );
    }

    #[test]
    fn exclusion_renormalizes_weights() {
        let m = FeatureMatrix::new(
            vec!["a".into(), "b".into()],
            vec![FeatureSpec::new("x", More), FeatureSpec::new("y", More)],
            vec![
                vec![Cell::Number(4.0), Cell::Missing],
                vec![Cell::Number(2.0), Cell::Number(9.0)],
            ],
        )
        .unwrap();
        let r = resolve_missing(&m, MissingValuePolicy::Exclude).unwrap();
        let w = WeightVector::user_defined(vec![0.25, 0.75]).unwrap();
        // platform a only has x, so its exponent becomes 1
        let p = weighted_product(&r, &w).unwrap();
        assert!((p[0] - 4.0).abs() < 1e-12);
        assert!((p[1] - 2f64.powf(0.25) * 9f64.powf(0.75)).abs() < 1e-12);
        // eta_max over present x = [4, 2] -> [1, 0.5]; y = [9] -> [1]
        let s = weighted_sum(&r, &w, NormalizationMethod::Max, StdDev::Population).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!((s[1] - (0.25 * 0.5 + 0.75)).abs() < 1e-15);
    }

    // Raising p's value can lower z_p - z_q when another platform sits
    // between the mean and q, so multi-feature zsc scores do not preserve
    // the raised platform's rank in general.
    #[test]
    fn zscore_gap_can_shrink_when_value_rises() {
        let gap = |xp: f64| {
            let z = crate::normalize::eta_zsc(&[xp, 10.0, 6.0], StdDev::Population).unwrap();
            z.values[0] - z.values[1]
        };
        assert!(gap(1.0) < gap(0.0));
    }

    #[test]
    fn method_list_parsing() {
        assert_eq!(
            Method::parse_list("max, sum,product,max").unwrap(),
            vec![Method::Max, Method::Sum, Method::Product]
        );
        assert!(Method::parse_list("").is_err());
        assert!(Method::parse_list("max,median").is_err());
    }
}
