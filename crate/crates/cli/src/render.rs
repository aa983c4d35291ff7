//! Output rendering: text tables (2 decimals), CSV and JSON
//! lines (6 decimals).

use std::collections::HashMap;

use serde::Serialize;

use ncap_core::geometry::{DistanceReport, DistanceRow};
use ncap_core::{
    coordinate_plot_data, AgreementStats, AutonomyLevel, CapabilityProfile, NcapCoordinate,
    RankTable, ScoreTable,
};

use crate::manifest::OutputFormat;

struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, color: bool) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain(std::iter::once(self.header[i].chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i == 0 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        let head = line(&self.header);
        if color {
            out.push_str(&format!("\x1b[1m{head}\x1b[0m\n"));
        } else {
            out.push_str(&head);
            out.push('\n');
        }
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

fn csv_string<I, R>(records: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.write_record(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn jsonl<T: Serialize>(rows: &[T]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("plain structs serialize") + "\n")
        .collect()
}

fn fixed6(v: f64) -> String {
    format!("{v:.6}")
}

#[derive(Serialize)]
struct ScoreRow<'a> {
    platform: &'a str,
    method: &'a str,
    score: f64,
    rank: usize,
}

pub fn scores(
    table: &ScoreTable,
    ranks: &RankTable,
    levels: Option<&HashMap<String, u8>>,
    format: OutputFormat,
    color: bool,
) -> String {
    let cols = table.columns();
    match format {
        OutputFormat::Table => {
            let mut header = vec!["Platform".to_string()];
            header.extend(cols.iter().map(|(m, _)| m.label().to_string()));
            if levels.is_some() {
                header.push("N_AL".into());
            }
            let mut t = TextTable::new(header);
            for (i, p) in table.platforms().iter().enumerate() {
                let mut row = vec![p.clone()];
                for ((_, scores), (_, r)) in cols.iter().zip(&ranks.columns) {
                    row.push(format!("{:.2} ({})", scores[i], r.ranks[i]));
                }
                if let Some(levels) = levels {
                    row.push(levels.get(p).map_or("-".into(), u8::to_string));
                }
                t.push(row);
            }
            t.render(color)
        }
        OutputFormat::Csv => {
            let mut records = vec![vec![
                "platform".to_string(),
                "method".into(),
                "score".into(),
                "rank".into(),
            ]];
            for ((m, scores), (_, r)) in cols.iter().zip(&ranks.columns) {
                for (i, p) in table.platforms().iter().enumerate() {
                    records.push(vec![
                        p.clone(),
                        m.name().into(),
                        fixed6(scores[i]),
                        r.ranks[i].to_string(),
                    ]);
                }
            }
            csv_string(records)
        }
        OutputFormat::Jsonl => {
            let mut rows = Vec::new();
            for ((m, scores), (_, r)) in cols.iter().zip(&ranks.columns) {
                for (i, p) in table.platforms().iter().enumerate() {
                    rows.push(ScoreRow {
                        platform: p,
                        method: m.name(),
                        score: scores[i],
                        rank: r.ranks[i],
                    });
                }
            }
            jsonl(&rows)
        }
    }
}

#[derive(Serialize)]
struct LevelRow<'a> {
    platform: &'a str,
    perception: bool,
    modeling: bool,
    planning: bool,
    execution: bool,
    n_al: u8,
    warnings: &'a [String],
}

pub fn levels(
    rows: &[(CapabilityProfile, AutonomyLevel)],
    format: OutputFormat,
    color: bool,
) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" }.to_string();
    match format {
        OutputFormat::Table => {
            let mut t = TextTable::new([
                "Platform",
                "Perception",
                "Modeling",
                "Planning",
                "Execution",
                "N_AL",
            ]);
            for (p, l) in rows {
                t.push(vec![
                    p.platform.clone(),
                    yn(p.perception),
                    yn(p.modeling),
                    yn(p.planning),
                    yn(p.execution),
                    l.value.to_string(),
                ]);
            }
            let mut out = t.render(color);
            for w in rows.iter().flat_map(|(_, l)| &l.warnings) {
                out.push_str(&format!("warning: {w}\n"));
            }
            out
        }
        OutputFormat::Csv => {
            let mut records = vec![[
                "platform",
                "perception",
                "modeling",
                "planning",
                "execution",
                "n_al",
            ]
            .map(String::from)
            .to_vec()];
            for (p, l) in rows {
                records.push(vec![
                    p.platform.clone(),
                    p.perception.to_string(),
                    p.modeling.to_string(),
                    p.planning.to_string(),
                    p.execution.to_string(),
                    l.value.to_string(),
                ]);
            }
            csv_string(records)
        }
        OutputFormat::Jsonl => {
            let out: Vec<LevelRow> = rows
                .iter()
                .map(|(p, l)| LevelRow {
                    platform: &p.platform,
                    perception: p.perception,
                    modeling: p.modeling,
                    planning: p.planning,
                    execution: p.execution,
                    n_al: l.value,
                    warnings: &l.warnings,
                })
                .collect();
            jsonl(&out)
        }
    }
}

#[derive(Serialize)]
struct DistanceRowOut<'a> {
    platform: &'a str,
    method: &'a str,
    reference: &'a str,
    absolute: f64,
    relative: f64,
}

pub fn distances(reports: &[DistanceReport], format: OutputFormat, color: bool) -> String {
    match format {
        OutputFormat::Table => {
            let Some(first) = reports.first() else {
                return String::new();
            };
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!(
                    "reference {}: {}\n",
                    r.method.label(),
                    r.reference
                ));
            }
            let block = |title: &str, pick: fn(&DistanceRow) -> f64| {
                let mut header = vec!["Platform".to_string()];
                header.extend(reports.iter().map(|r| format!("AD_{}", r.method.name())));
                let mut t = TextTable::new(header);
                for (i, row) in first.rows.iter().enumerate() {
                    let mut cells = vec![row.platform.clone()];
                    cells.extend(reports.iter().map(|r| format!("{:.2}", pick(&r.rows[i]))));
                    t.push(cells);
                }
                format!("\n{title}\n{}", t.render(color))
            };
            out.push_str(&block("absolute potential autonomy distance", |r| {
                r.absolute
            }));
            out.push_str(&block("relative potential autonomy distance", |r| {
                r.relative
            }));
            out
        }
        OutputFormat::Csv => {
            let mut records = vec![["platform", "method", "reference", "absolute", "relative"]
                .map(String::from)
                .to_vec()];
            for r in reports {
                for row in &r.rows {
                    records.push(vec![
                        row.platform.clone(),
                        r.method.name().into(),
                        r.reference.clone(),
                        fixed6(row.absolute),
                        fixed6(row.relative),
                    ]);
                }
            }
            csv_string(records)
        }
        OutputFormat::Jsonl => {
            let rows: Vec<DistanceRowOut> = reports
                .iter()
                .flat_map(|r| {
                    r.rows.iter().map(move |row| DistanceRowOut {
                        platform: &row.platform,
                        method: r.method.name(),
                        reference: &r.reference,
                        absolute: row.absolute,
                        relative: row.relative,
                    })
                })
                .collect();
            jsonl(&rows)
        }
    }
}

#[derive(Serialize)]
struct PlotRow<'a> {
    platform: &'a str,
    method: &'a str,
    n_al: u8,
    n_cp: f64,
}

/// Plot data is CSV unless JSON lines are requested.
pub fn plot(coords: &[NcapCoordinate], format: OutputFormat) -> String {
    match format {
        OutputFormat::Jsonl => {
            let rows: Vec<PlotRow> = coords
                .iter()
                .map(|c| PlotRow {
                    platform: &c.platform,
                    method: c.method.name(),
                    n_al: c.n_al,
                    n_cp: c.n_cp,
                })
                .collect();
            jsonl(&rows)
        }
        _ => coordinate_plot_data(coords),
    }
}

#[derive(Serialize)]
struct TauRow<'a> {
    a: &'a str,
    b: &'a str,
    tau_b: f64,
}

#[derive(Serialize)]
struct UnanimousOut<'a> {
    rank: usize,
    platform: &'a str,
}

pub fn agreement(stats: &AgreementStats, format: OutputFormat, color: bool) -> String {
    let names: Vec<&str> = stats.methods.iter().map(|m| m.name()).collect();
    match format {
        OutputFormat::Table => {
            let mut header = vec!["tau_b".to_string()];
            header.extend(stats.methods.iter().map(|m| m.label().to_string()));
            let mut t = TextTable::new(header);
            for (m, row) in stats.methods.iter().zip(&stats.tau) {
                let mut cells = vec![m.label().to_string()];
                cells.extend(row.iter().map(|v| format!("{v:.2}")));
                t.push(cells);
            }
            let mut out = t.render(color);
            let first = stats.unanimous_first();
            out.push_str(&format!(
                "\nunanimous rank 1: {}\n",
                if first.is_empty() {
                    "none".into()
                } else {
                    first.join(", ")
                }
            ));
            let others: Vec<String> = stats
                .unanimous
                .iter()
                .filter(|u| u.rank > 1)
                .map(|u| format!("{} at rank {}", u.platform, u.rank))
                .collect();
            out.push_str(&format!(
                "unanimous at other ranks: {}\n",
                if others.is_empty() {
                    "none".into()
                } else {
                    others.join(", ")
                }
            ));
            out
        }
        OutputFormat::Csv => {
            let mut records = vec![vec![
                "kind".to_string(),
                "a".into(),
                "b".into(),
                "value".into(),
            ]];
            for (i, a) in names.iter().enumerate() {
                for (j, b) in names.iter().enumerate() {
                    records.push(vec![
                        "tau_b".into(),
                        (*a).into(),
                        (*b).into(),
                        fixed6(stats.tau[i][j]),
                    ]);
                }
            }
            for u in &stats.unanimous {
                records.push(vec![
                    "unanimous".into(),
                    u.platform.clone(),
                    String::new(),
                    u.rank.to_string(),
                ]);
            }
            csv_string(records)
        }
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for (i, a) in names.iter().enumerate() {
                for (j, b) in names.iter().enumerate().skip(i + 1) {
                    out.push_str(&jsonl(&[TauRow {
                        a,
                        b,
                        tau_b: stats.tau[i][j],
                    }]));
                }
            }
            let u: Vec<UnanimousOut> = stats
                .unanimous
                .iter()
                .map(|u| UnanimousOut {
                    rank: u.rank,
                    platform: &u.platform,
                })
                .collect();
            out.push_str(&jsonl(&u));
            out
        }
    }
}
