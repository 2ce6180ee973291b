use std::time::Instant;

use crate::topk::TopK;
use crate::vectors::dot;
use crate::{CeosError, PointId, QueryResult, Result, Timings, VectorSet};

/// Exact top-`k` by inner product, best first, ties to the lower id.
pub fn brute_force_topk(data: &VectorSet, query: &[f32], k: usize) -> Result<QueryResult> {
    if !data.is_empty() && query.len() != data.dim() {
        return Err(CeosError::param(format!(
            "query has dimension {}, data has {}",
            query.len(),
            data.dim()
        )));
    }
    let start = Instant::now();
    let mut top = TopK::new(k.min(data.len()));
    for (i, x) in data.iter().enumerate() {
        top.push(i as PointId, dot(x, query));
    }
    let entries = top
        .into_sorted()
        .into_iter()
        .map(|s| (s.id, s.score))
        .collect();
    Ok(QueryResult {
        entries,
        candidates_examined: data.len(),
        effective_budget: None,
        timings: Timings {
            probe: start.elapsed(),
            ..Timings::default()
        },
    })
}
