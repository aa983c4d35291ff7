//! Rank tables and cross-method rank agreement.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::aggregate::{Method, ScoreTable};
use crate::error::{NcapError, Result};

/// Ranks for one method. Rank 1 is the highest score; tied platforms share
/// the smallest rank of their group and the following rank is skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankColumn {
    pub platforms: Vec<String>,
    pub ranks: Vec<usize>,
    /// Groups of two or more platforms with equal scores.
    pub ties: Vec<Vec<String>>,
}

impl RankColumn {
    pub fn rank_of(&self, platform: &str) -> Option<usize> {
        self.platforms
            .iter()
            .position(|p| p == platform)
            .map(|i| self.ranks[i])
    }
}

pub fn rank_scores(platforms: &[String], scores: &[f64]) -> Result<RankColumn> {
    if platforms.len() != scores.len() {
        return Err(NcapError::Dimension(format!(
            "{} scores for {} platforms",
            scores.len(),
            platforms.len()
        )));
    }
    if let Some(v) = scores.iter().find(|v| !v.is_finite()) {
        return Err(NcapError::Domain(format!(
            "cannot rank non-finite score {v}"
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut ranks = vec![0; scores.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        for &i in &order[start..end] {
            ranks[i] = start + 1;
        }
        if end - start > 1 {
            let mut group: Vec<usize> = order[start..end].to_vec();
            group.sort_unstable();
            ties.push(group.into_iter().map(|i| platforms[i].clone()).collect());
        }
        start = end;
    }
    Ok(RankColumn {
        platforms: platforms.to_vec(),
        ranks,
        ties,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankTable {
    pub columns: Vec<(Method, RankColumn)>,
}

impl RankTable {
    pub fn from_scores(table: &ScoreTable) -> Result<Self> {
        let columns = table
            .columns()
            .iter()
            .map(|(m, scores)| Ok((*m, rank_scores(table.platforms(), scores)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { columns })
    }

    pub fn column(&self, method: Method) -> Option<&RankColumn> {
        self.columns
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, c)| c)
    }
}

/// Counts of tied pairs within a sorted run of keys.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sort in place, returning the number of strict inversions.
fn merge_count(v: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid]) + merge_count(&mut v[mid..]);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            swaps += (mid - i) as u64;
            merged.push(v[j]);
            j += 1;
        } else {
            merged.push(v[i]);
            i += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..n]);
    v.copy_from_slice(&merged);
    swaps
}

/// Tie-corrected Kendall tau-b between two rank columns over the same
/// platform set, via Knight's O(n log n) merge-sort count.
///
/// When either column is entirely tied the coefficient is undefined; this
/// returns 1.0 if both columns agree on every platform and 0.0 otherwise.
pub fn kendall_tau(a: &RankColumn, b: &RankColumn) -> Result<f64> {
    if a.platforms.len() != b.platforms.len() {
        return Err(NcapError::Dimension(format!(
            "rank columns cover {} and {} platforms",
            a.platforms.len(),
            b.platforms.len()
        )));
    }
    let index: HashMap<&str, usize> = b
        .platforms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_str(), i))
        .collect();
    let mut pairs = Vec::with_capacity(a.platforms.len());
    for (p, ra) in a.platforms.iter().zip(&a.ranks) {
        let j = index.get(p.as_str()).ok_or_else(|| {
            NcapError::Dimension(format!("platform `{p}` missing from second ranking"))
        })?;
        pairs.push((*ra, b.ranks[*j]));
    }

    let n = pairs.len() as u64;
    let n0 = n * n.saturating_sub(1) / 2;
    pairs.sort_unstable();
    let n1 = tied_pairs(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let n3 = tied_pairs(&pairs);
    let mut ys: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let swaps = merge_count(&mut ys);
    let n2 = tied_pairs(&ys);

    let (dx, dy) = (n0 - n1, n0 - n2);
    if dx == 0 || dy == 0 {
        return Ok(if pairs.iter().all(|(x, y)| x == y) {
            1.0
        } else {
            0.0
        });
    }
    let numerator = n0 as i64 - n1 as i64 - n2 as i64 + n3 as i64 - 2 * swaps as i64;
    Ok(numerator as f64 / ((dx as f64) * (dy as f64)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnanimousRank {
    pub rank: usize,
    pub platform: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementStats {
    pub methods: Vec<Method>,
    /// `tau[i][j]` between `methods[i]` and `methods[j]`.
    pub tau: Vec<Vec<f64>>,
    /// Every (rank, platform) pair on which all methods agree.
    pub unanimous: Vec<UnanimousRank>,
}

impl AgreementStats {
    pub fn unanimous_first(&self) -> Vec<&str> {
        self.unanimous
            .iter()
            .filter(|u| u.rank == 1)
            .map(|u| u.platform.as_str())
            .collect()
    }
}

pub fn consensus_report(ranks: &RankTable) -> Result<AgreementStats> {
    let cols = &ranks.columns;
    if cols.len() < 2 {
        return Err(NcapError::InsufficientMethods(cols.len()));
    }
    let mut tau = vec![vec![1.0; cols.len()]; cols.len()];
    for i in 0..cols.len() {
        for j in (i + 1)..cols.len() {
            let t = kendall_tau(&cols[i].1, &cols[j].1)?;
            tau[i][j] = t;
            tau[j][i] = t;
        }
    }

    let first = &cols[0].1;
    let mut unanimous: Vec<UnanimousRank> = first
        .platforms
        .iter()
        .zip(&first.ranks)
        .filter(|(p, r)| cols[1..].iter().all(|(_, c)| c.rank_of(p) == Some(**r)))
        .map(|(p, r)| UnanimousRank {
            rank: *r,
            platform: p.clone(),
        })
        .collect();
    unanimous.sort_by(|a, b| {
        a.rank
            .cmp(&b.rank)
            .then_with(|| a.platform.cmp(&b.platform))
    });

    Ok(AgreementStats {
        methods: cols.iter().map(|(m, _)| *m).collect(),
        tau,
        unanimous,
    })
}
