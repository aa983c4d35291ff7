//! Column-wise normalization techniques.
//!
//! Each function takes one feature column (one value per platform) and
//! returns a [`NormalizedColumn`] of the same length and order. Direction
//! (more/less is better) is not applied here; see [`crate::aggregate`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NcapError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationMethod {
    /// Divide by the column maximum.
    Max,
    /// Divide by the column sum.
    Sum,
    /// Min-max range mapping onto `[0, 1]`.
    Map,
    /// Standard score.
    Zsc,
}

impl NormalizationMethod {
    pub const ALL: [NormalizationMethod; 4] = [Self::Max, Self::Sum, Self::Map, Self::Zsc];

    pub fn name(self) -> &'static str {
        match self {
            Self::Max => "max",
            Self::Sum => "sum",
            Self::Map => "map",
            Self::Zsc => "zsc",
        }
    }
}

impl fmt::Display for NormalizationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormalizationMethod {
    type Err = NcapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" => Ok(Self::Max),
            "sum" => Ok(Self::Sum),
            "map" => Ok(Self::Map),
            "zsc" | "zscore" | "z-score" => Ok(Self::Zsc),
            other => Err(NcapError::Config(format!(
                "unknown normalization `{other}`"
            ))),
        }
    }
}

/// Standard deviation convention used by the z-score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdDev {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`.
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedColumn {
    pub values: Vec<f64>,
    pub method: NormalizationMethod,
}

fn check_len(column: &[f64], needed: usize) -> Result<()> {
    if column.len() < needed {
        return Err(NcapError::EmptyColumn {
            needed,
            got: column.len(),
        });
    }
    Ok(())
}

fn check_positive(column: &[f64]) -> Result<()> {
    if let Some((i, v)) = column
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        return Err(NcapError::Domain(format!(
            "expected strictly positive finite values, found {v} at index {i}"
        )));
    }
    Ok(())
}

fn check_finite(column: &[f64]) -> Result<()> {
    if let Some((i, v)) = column.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(NcapError::Domain(format!(
            "expected finite values, found {v} at index {i}"
        )));
    }
    Ok(())
}

/// Divide every value by the column maximum. The maximum maps to exactly 1.
pub fn eta_max(column: &[f64]) -> Result<NormalizedColumn> {
    check_len(column, 1)?;
    check_positive(column)?;
    let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(NormalizedColumn {
        values: column.iter().map(|v| v / max).collect(),
        method: NormalizationMethod::Max,
    })
}

/// Divide every value by the column sum, giving proportional shares.
pub fn eta_sum(column: &[f64]) -> Result<NormalizedColumn> {
    check_len(column, 1)?;
    check_positive(column)?;
    let total: f64 = column.iter().sum();
    Ok(NormalizedColumn {
        values: column.iter().map(|v| v / total).collect(),
        method: NormalizationMethod::Sum,
    })
}

/// Map `[min, max]` onto `[0, 1]`. An all-equal column maps to 0.5.
pub fn eta_map(column: &[f64]) -> Result<NormalizedColumn> {
    check_len(column, 1)?;
    check_finite(column)?;
    let (min, max) = column
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = max - min;
    let values = if range > 0.0 {
        column
            .iter()
            .map(|v| ((v - min) / range).clamp(0.0, 1.0))
            .collect()
    } else {
        vec![0.5; column.len()]
    };
    Ok(NormalizedColumn {
        values,
        method: NormalizationMethod::Map,
    })
}

/// Standard score. A zero-variance column maps to all zeros.
pub fn eta_zsc(column: &[f64], std_dev: StdDev) -> Result<NormalizedColumn> {
    check_len(column, 2)?;
    check_finite(column)?;
    let n = column.len() as f64;
    let mean = column.iter().sum::<f64>() / n;
    let sq: f64 = column.iter().map(|v| (v - mean) * (v - mean)).sum();
    let denom = match std_dev {
        StdDev::Population => n,
        StdDev::Sample => n - 1.0,
    };
    let sd = (sq / denom).sqrt();
    let values = if sd > 0.0 {
        column.iter().map(|v| (v - mean) / sd).collect()
    } else {
        vec![0.0; column.len()]
    };
    Ok(NormalizedColumn {
        values,
        method: NormalizationMethod::Zsc,
    })
}

/// Dispatch to the technique named by `method`.
pub fn normalize(
    column: &[f64],
    method: NormalizationMethod,
    std_dev: StdDev,
) -> Result<NormalizedColumn> {
    match method {
        NormalizationMethod::Max => eta_max(column),
        NormalizationMethod::Sum => eta_sum(column),
        NormalizationMethod::Map => eta_map(column),
        NormalizationMethod::Zsc => eta_zsc(column, std_dev),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLIGHT_TIME: [f64; 7] = [15.0, 10.0, 22.0, 32.0, 23.0, 30.0, 50.0];

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (i, (g, w)) in got.iter().zip(want).enumerate() {
            assert!((g - w).abs() <= tol, "index {i}: got {g}, want {w}");
        }
    }

    #[test]
    fn max_examples() {
        assert_eq!(
            eta_max(&[2.0, 4.0, 4.0]).unwrap().values,
            vec![0.5, 1.0, 1.0]
        );
        assert_eq!(eta_max(&[5.0]).unwrap().values, vec![1.0]);
        assert_close(
            &eta_max(&FLIGHT_TIME).unwrap().values,
            &[0.30, 0.20, 0.44, 0.64, 0.46, 0.60, 1.00],
            1e-12,
        );
    }

    #[test]
    fn sum_examples() {
        assert_close(
            &eta_sum(&[2.0, 3.0, 5.0]).unwrap().values,
            &[0.2, 0.3, 0.5],
            1e-15,
        );
        assert_eq!(eta_sum(&[1.0; 4]).unwrap().values, vec![0.25; 4]);
        assert_close(
            &eta_sum(&FLIGHT_TIME).unwrap().values,
            &[0.0824, 0.0549, 0.1209, 0.1758, 0.1264, 0.1648, 0.2747],
            1e-4,
        );
    }

    #[test]
    fn map_examples() {
        assert_eq!(
            eta_map(&[2.0, 4.0, 6.0]).unwrap().values,
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!(eta_map(&[7.0, 7.0]).unwrap().values, vec![0.5, 0.5]);
        assert_close(
            &eta_map(&FLIGHT_TIME).unwrap().values,
            &[0.125, 0.0, 0.30, 0.55, 0.325, 0.50, 1.0],
            1e-12,
        );
    }

    #[test]
    fn zsc_examples() {
        let z = eta_zsc(&[1.0, 2.0, 3.0], StdDev::Population).unwrap();
        assert_close(&z.values, &[-1.2247, 0.0, 1.2247], 1e-4);
        assert_eq!(
            eta_zsc(&[5.0, 5.0, 5.0], StdDev::Population)
                .unwrap()
                .values,
            vec![0.0; 3]
        );
        assert_close(
            &eta_zsc(&[0.0, 10.0], StdDev::Population).unwrap().values,
            &[-1.0, 1.0],
            1e-15,
        );
        // sample std of [0, 10] is sqrt(50)
        let s = eta_zsc(&[0.0, 10.0], StdDev::Sample).unwrap();
        assert_close(&s.values, &[-5.0 / 50f64.sqrt(), 5.0 / 50f64.sqrt()], 1e-15);
    }

    #[test]
    fn domain_and_length_errors() {
        assert!(matches!(eta_max(&[]), Err(NcapError::EmptyColumn { .. })));
        assert!(matches!(eta_sum(&[]), Err(NcapError::EmptyColumn { .. })));
        assert!(matches!(eta_map(&[]), Err(NcapError::EmptyColumn { .. })));
        assert!(matches!(
            eta_zsc(&[1.0], StdDev::Population),
            Err(NcapError::EmptyColumn { needed: 2, got: 1 })
        ));
        assert!(matches!(eta_max(&[1.0, 0.0]), Err(NcapError::Domain(_))));
        assert!(matches!(eta_sum(&[1.0, -2.0]), Err(NcapError::Domain(_))));
        assert!(matches!(
            eta_map(&[1.0, f64::NAN]),
            Err(NcapError::Domain(_))
        ));
    }

    #[test]
    fn method_names_parse() {
        for m in NormalizationMethod::ALL {
            assert_eq!(m.name().parse::<NormalizationMethod>().unwrap(), m);
        }
        assert!("median".parse::<NormalizationMethod>().is_err());
    }
}
