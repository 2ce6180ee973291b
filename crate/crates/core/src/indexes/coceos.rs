use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use super::{check_k, query_dims, rerank};
use crate::projection::{ProjectedMatrix, RotationSpec};
use crate::topk::TopK;
use crate::{par, CeosError, PointId, QueryResult, Result, VectorSet};

/// A stored (projected value, point id) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ListEntry {
    pub value: f32,
    pub id: PointId,
}

/// coCEOs: per dimension the top-`m` entries by largest value (descending)
/// and the top-`m` by smallest value (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct CoCeosIndex {
    pub(crate) rotation: Arc<RotationSpec>,
    pub(crate) points: usize,
    pub(crate) m: usize,
    pub(crate) largest: Vec<ListEntry>,
    pub(crate) smallest: Vec<ListEntry>,
}

fn select(matrix: &ProjectedMatrix, len: usize, largest: bool) -> Vec<ListEntry> {
    par::map_range(matrix.dims(), |dim| {
        let row = matrix.row(dim);
        let mut top = TopK::new(len);
        for (i, &v) in row.iter().enumerate() {
            top.push(i as PointId, if largest { v as f64 } else { -(v as f64) });
        }
        top.into_sorted()
            .into_iter()
            .map(|s| ListEntry {
                value: row[s.id as usize],
                id: s.id,
            })
            .collect::<Vec<_>>()
    })
    .concat()
}

pub fn build_coceos(matrix: &ProjectedMatrix, m: usize) -> Result<CoCeosIndex> {
    if m == 0 {
        return Err(CeosError::param("coCEOs needs m >= 1"));
    }
    let len = m.min(matrix.points());
    Ok(CoCeosIndex {
        rotation: matrix.rotation().clone(),
        points: matrix.points(),
        m,
        largest: select(matrix, len, true),
        smallest: select(matrix, len, false),
    })
}

impl CoCeosIndex {
    pub fn rotation(&self) -> &Arc<RotationSpec> {
        &self.rotation
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn list_len(&self) -> usize {
        self.m.min(self.points)
    }

    pub fn largest(&self, dim: usize) -> &[ListEntry] {
        let l = self.list_len();
        &self.largest[dim * l..(dim + 1) * l]
    }

    pub fn smallest(&self, dim: usize) -> &[ListEntry] {
        let l = self.list_len();
        &self.smallest[dim * l..(dim + 1) * l]
    }

    /// Budgeted query: scans `budget / s_prime` entries (capped at `m`) of
    /// the largest-lists of the `s_prime / 2` max dims and of the
    /// smallest-lists of the `s_prime / 2` min dims, accumulating signed
    /// values per id, then reranks the `b` best partial estimates.
    pub fn query(
        &self,
        data: &VectorSet,
        query: &[f32],
        s_prime: usize,
        budget: usize,
        b: usize,
        k: usize,
    ) -> Result<QueryResult> {
        check_k(k, b)?;
        let dims_total = self.rotation.out_dim();
        if s_prime < 2 || s_prime % 2 != 0 || s_prime > dims_total {
            return Err(CeosError::param(format!(
                "s'={s_prime} must be even, >= 2 and <= D={dims_total}"
            )));
        }
        if budget < s_prime {
            return Err(CeosError::param(format!(
                "budget B={budget} is smaller than s'={s_prime}"
            )));
        }
        let depth = (budget / s_prime).min(self.list_len());
        let (dims, rotation) = query_dims(&self.rotation, data, self.points, query, s_prime / 2)?;

        let start = Instant::now();
        let (max_sorted, min_sorted) = dims.canonical();
        let mut hist: HashMap<PointId, f64> = HashMap::with_capacity(depth * s_prime);
        for &i in &max_sorted {
            for e in &self.largest(i)[..depth] {
                *hist.entry(e.id).or_insert(0.0) += e.value as f64;
            }
        }
        for &j in &min_sorted {
            for e in &self.smallest(j)[..depth] {
                *hist.entry(e.id).or_insert(0.0) -= e.value as f64;
            }
        }
        let mut top = TopK::new(b.min(hist.len()));
        for (&id, &score) in &hist {
            top.push(id, score);
        }
        let cands: Vec<PointId> = top.into_sorted().into_iter().map(|s| s.id).collect();
        let probe = start.elapsed();

        let mut res = rerank(&cands, data, query, k);
        res.timings.rotation = rotation;
        res.timings.probe = probe;
        res.effective_budget = Some(depth);
        Ok(res)
    }
}
