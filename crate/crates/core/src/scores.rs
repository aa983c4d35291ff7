//! Score-table files and coordinate assembly.
//!
//! A score file is comma-separated with a `platform` column followed by one
//! column per method (`max`, `sum`, `map`, `zsc`, `product`; the `S_max`
//! style labels are accepted too).

use std::collections::HashMap;

use crate::aggregate::{Method, ScoreTable};
use crate::error::{NcapError, Result};
use crate::geometry::NcapCoordinate;

pub fn parse_score_table(text: &str) -> Result<ScoreTable> {
    let fmt_err = |e: csv::Error| NcapError::Format(format!("malformed score csv: {e}"));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(fmt_err)?.clone();
    let methods = header
        .iter()
        .skip(1)
        .map(str::parse::<Method>)
        .collect::<Result<Vec<_>>>()?;
    if methods.is_empty() {
        return Err(NcapError::Format("score file has no method columns".into()));
    }
    let mut platforms = Vec::new();
    let mut columns = vec![Vec::new(); methods.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(fmt_err)?;
        platforms.push(record.get(0).unwrap_or_default().to_string());
        for (j, col) in columns.iter_mut().enumerate() {
            let cell = record.get(j + 1).unwrap_or_default();
            let v: f64 = cell.parse().map_err(|_| {
                NcapError::Format(format!("row {}: `{cell}` is not a number", i + 1))
            })?;
            col.push(v);
        }
    }
    if platforms.is_empty() {
        return Err(NcapError::Format("score file has no platforms".into()));
    }
    ScoreTable::with_columns(platforms, methods.into_iter().zip(columns).collect())
}

/// One coordinate per platform for `method`, pairing scores with levels
/// looked up by platform id.
pub fn coordinates(
    scores: &ScoreTable,
    levels: &HashMap<String, u8>,
    method: Method,
) -> Result<Vec<NcapCoordinate>> {
    let column = scores
        .column(method)
        .ok_or_else(|| NcapError::Config(format!("no `{method}` scores available")))?;
    scores
        .platforms()
        .iter()
        .zip(column)
        .map(|(p, y)| {
            let level = levels.get(p).ok_or_else(|| {
                NcapError::Config(format!("no capability profile for platform `{p}`"))
            })?;
            NcapCoordinate::new(p.clone(), *level, *y, method)
        })
        .collect()
}
