use std::time::Instant;

use super::coceos::ListEntry;
use super::{check_k, query_dims, rerank};
use crate::estimators::raw_from_lookup;
use crate::projection::{ExtremeDims, ProjectedMatrix};
use crate::topk::{Scored, TopK};
use crate::{par, CeosError, PointId, QueryResult, Result, VectorSet};

/// Counters of one threshold-algorithm run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TaStats {
    pub sorted_accesses: usize,
    /// Points whose full estimate was computed by random access.
    pub points_scored: usize,
    pub rounds: usize,
}

/// sCEOs-TA: every projected dimension fully sorted (descending), plus the
/// projected matrix for random access.
#[derive(Debug, Clone, PartialEq)]
pub struct SceosTaIndex {
    pub(crate) matrix: ProjectedMatrix,
    /// `D` lists of `n` entries, back to back.
    pub(crate) sorted: Vec<ListEntry>,
}

pub(crate) fn sort_rows(matrix: &ProjectedMatrix) -> Vec<ListEntry> {
    let n = matrix.points();
    let rows = par::map_range(matrix.dims(), |dim| {
        let mut row: Vec<ListEntry> = matrix
            .row(dim)
            .iter()
            .enumerate()
            .map(|(i, &value)| ListEntry {
                value,
                id: i as PointId,
            })
            .collect();
        row.sort_unstable_by(|a, b| b.value.total_cmp(&a.value).then(a.id.cmp(&b.id)));
        row
    });
    let mut out = Vec::with_capacity(matrix.dims() * n);
    for r in rows {
        out.extend(r);
    }
    out
}

/// Fagin's threshold algorithm over the signed streams of `dims`.
///
/// Max dims are read from the head of their descending list, min dims from
/// the tail (ascending, negated). Streams advance one position per round,
/// round robin. Each newly seen id gets its exact raw estimate by random
/// access. The run stops once `b` ids are held and the weakest of them is at
/// least the threshold, the estimate an unseen id could still reach.
pub(crate) fn threshold_topb(
    matrix: &ProjectedMatrix,
    sorted: &[ListEntry],
    dims: &ExtremeDims,
    b: usize,
) -> (Vec<Scored>, TaStats) {
    let n = matrix.points();
    let b = b.min(n);
    let mut stats = TaStats::default();
    if b == 0 {
        return (Vec::new(), stats);
    }
    let (max_sorted, min_sorted) = dims.canonical();
    let list = |dim: usize| &sorted[dim * n..(dim + 1) * n];
    let max_lists: Vec<&[ListEntry]> = max_sorted.iter().map(|&d| list(d)).collect();
    let min_lists: Vec<&[ListEntry]> = min_sorted.iter().map(|&d| list(d)).collect();

    let mut seen = vec![0u64; n.div_ceil(64)];
    let mut top = TopK::new(b);
    let mut visit = |id: PointId, top: &mut TopK, stats: &mut TaStats| {
        stats.sorted_accesses += 1;
        let (w, bit) = (id as usize / 64, id as usize % 64);
        if seen[w] >> bit & 1 == 0 {
            seen[w] |= 1 << bit;
            stats.points_scored += 1;
            let raw = raw_from_lookup(&max_sorted, &min_sorted, |d| matrix.get(d, id));
            top.push(id, raw);
        }
    };

    for depth in 0..n {
        stats.rounds += 1;
        for l in &max_lists {
            visit(l[depth].id, &mut top, &mut stats);
        }
        for l in &min_lists {
            visit(l[n - 1 - depth].id, &mut top, &mut stats);
        }
        // Same summation order as the raw estimate, so an unseen id, whose
        // value in every stream is bounded by the current one, cannot
        // exceed this after rounding either.
        let mut tau = 0.0f64;
        for l in &max_lists {
            tau += l[depth].value as f64;
        }
        for l in &min_lists {
            tau -= l[n - 1 - depth].value as f64;
        }
        if top.is_full() && top.worst().is_some_and(|w| w.score >= tau) {
            break;
        }
    }
    (top.into_sorted(), stats)
}

impl SceosTaIndex {
    pub fn build(matrix: ProjectedMatrix) -> Self {
        let sorted = sort_rows(&matrix);
        SceosTaIndex { matrix, sorted }
    }

    pub fn matrix(&self) -> &ProjectedMatrix {
        &self.matrix
    }

    /// Sorted list of `dim`, descending by value.
    pub fn list(&self, dim: usize) -> &[ListEntry] {
        let n = self.matrix.points();
        &self.sorted[dim * n..(dim + 1) * n]
    }

    /// Top-`b` ids by raw estimate for explicit dims, with run counters.
    pub fn candidates(&self, dims: &ExtremeDims, b: usize) -> Result<(Vec<Scored>, TaStats)> {
        if dims.s() > self.matrix.dims()
            || dims
                .max_dims()
                .iter()
                .chain(dims.min_dims())
                .any(|&d| d >= self.matrix.dims())
        {
            return Err(CeosError::param(format!(
                "extreme dims do not fit D={}",
                self.matrix.dims()
            )));
        }
        Ok(threshold_topb(&self.matrix, &self.sorted, dims, b))
    }

    pub fn query(
        &self,
        data: &VectorSet,
        query: &[f32],
        s0: usize,
        b: usize,
        k: usize,
    ) -> Result<QueryResult> {
        self.query_with_stats(data, query, s0, b, k).map(|r| r.0)
    }

    pub fn query_with_stats(
        &self,
        data: &VectorSet,
        query: &[f32],
        s0: usize,
        b: usize,
        k: usize,
    ) -> Result<(QueryResult, TaStats)> {
        check_k(k, b)?;
        let (dims, rotation) = query_dims(
            self.matrix.rotation(),
            data,
            self.matrix.points(),
            query,
            s0,
        )?;
        let start = Instant::now();
        let (top, stats) = self.candidates(&dims, b)?;
        let cands: Vec<PointId> = top.into_iter().map(|s| s.id).collect();
        let probe = start.elapsed();
        let mut res = rerank(&cands, data, query, k);
        res.timings.rotation = rotation;
        res.timings.probe = probe;
        Ok((res, stats))
    }
}
