//! NCAP coordinates and Potential Autonomy Distance.
//!
//! A platform sits at `<N_AL, N_CP>` in the plane, with the autonomy level
//! on the x-axis unscaled. Its absolute distance is the Euclidean norm of
//! that point; its relative distance is the point-to-point distance to a
//! reference platform (by default the one with the largest absolute
//! distance, chosen per method).
//!
//! N_CP may be negative under the z-score method, so points are not
//! confined to the first quadrant and the largest norm is not always the
//! best-scoring platform. Coordinates are taken as given; nothing is clamped.

use std::cmp::Ordering;

use serde::Serialize;

use crate::aggregate::Method;
use crate::error::{NcapError, Result};

pub const MAX_LEVEL: u8 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NcapCoordinate {
    pub platform: String,
    pub n_al: u8,
    pub n_cp: f64,
    pub method: Method,
}

impl NcapCoordinate {
    pub fn new(platform: impl Into<String>, n_al: u8, n_cp: f64, method: Method) -> Result<Self> {
        let platform = platform.into();
        if n_al > MAX_LEVEL {
            return Err(NcapError::Domain(format!(
                "autonomy level {n_al} for `{platform}` is outside 0..=3"
            )));
        }
        if !n_cp.is_finite() {
            return Err(NcapError::Domain(format!(
                "N_CP for `{platform}` is not finite: {n_cp}"
            )));
        }
        Ok(Self {
            platform,
            n_al,
            n_cp,
            method,
        })
    }

    pub fn x(&self) -> f64 {
        f64::from(self.n_al)
    }

    pub fn y(&self) -> f64 {
        self.n_cp
    }
}

/// Euclidean distance to the origin.
pub fn autonomy_distance(c: &NcapCoordinate) -> f64 {
    c.x().hypot(c.y())
}

/// Euclidean distance between two coordinates of the same method.
pub fn relative_distance(c: &NcapCoordinate, reference: &NcapCoordinate) -> Result<f64> {
    if c.method != reference.method {
        return Err(NcapError::MethodMismatch {
            left: c.method.to_string(),
            right: reference.method.to_string(),
        });
    }
    Ok((c.x() - reference.x()).hypot(c.y() - reference.y()))
}

/// Platform with the largest autonomy distance; ties go to the
/// lexicographically smallest platform id.
pub fn select_reference(coords: &[NcapCoordinate]) -> Result<&NcapCoordinate> {
    coords
        .iter()
        .map(|c| (c, autonomy_distance(c)))
        .max_by(|(a, da), (b, db)| {
            da.partial_cmp(db)
                .unwrap_or(Ordering::Equal)
                .then_with(|| b.platform.cmp(&a.platform))
        })
        .map(|(c, _)| c)
        .ok_or_else(|| NcapError::EmptyInput("no coordinates to choose a reference from".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRow {
    pub platform: String,
    pub absolute: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub method: Method,
    pub reference: String,
    pub rows: Vec<DistanceRow>,
}

/// Absolute and relative distances for one method. `reference` pins the
/// reference platform by id; otherwise [`select_reference`] decides.
pub fn distance_report(
    coords: &[NcapCoordinate],
    reference: Option<&str>,
) -> Result<DistanceReport> {
    let reference = match reference {
        Some(id) => coords
            .iter()
            .find(|c| c.platform == id)
            .ok_or_else(|| NcapError::Config(format!("reference platform `{id}` not found")))?,
        None => select_reference(coords)?,
    };
    let rows = coords
        .iter()
        .map(|c| {
            Ok(DistanceRow {
                platform: c.platform.clone(),
                absolute: autonomy_distance(c),
                relative: relative_distance(c, reference)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceReport {
        method: reference.method,
        reference: reference.platform.clone(),
        rows,
    })
}

pub const PLOT_HEADER: &str = "platform,method,n_al,n_cp";

/// Comma-separated rows for external plotting, N_CP at 6 decimals.
pub fn coordinate_plot_data(coords: &[NcapCoordinate]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: [&str; 4]| {
        w.write_record(rec).expect("writing to memory cannot fail");
    };
    write(&mut w, ["platform", "method", "n_al", "n_cp"]);
    for c in coords {
        write(
            &mut w,
            [
                &c.platform,
                c.method.name(),
                &c.n_al.to_string(),
                &format!("{:.6}", c.n_cp),
            ],
        );
    }
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv output is utf-8")
}
