use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::estimators::brute_force_topk;
use crate::{par, CeosError, PointId, Result, VectorSet};

/// Exact top-`k` ids for every query, one brute-force scan per query.
pub fn compute_groundtruth(
    data: &VectorSet,
    queries: &VectorSet,
    k: usize,
) -> Result<Vec<Vec<PointId>>> {
    if !queries.is_empty() && !data.is_empty() && queries.dim() != data.dim() {
        return Err(CeosError::param(format!(
            "queries have dimension {}, data has {}",
            queries.dim(),
            data.dim()
        )));
    }
    par::map_range(queries.len(), |i| {
        brute_force_topk(data, queries.point(i), k).map(|r| r.ids())
    })
    .into_iter()
    .collect()
}

/// On-disk ground truth, tagged with the checksums of the inputs it was
/// computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthCache {
    pub data_checksum: String,
    pub queries_checksum: String,
    pub k: usize,
    pub normalized_queries: bool,
    pub ids: Vec<Vec<PointId>>,
}

/// Reuses `cache_path` when its checksums and `k` match, otherwise computes
/// the ground truth and rewrites the cache.
pub fn load_or_compute_groundtruth(
    cache_path: &Path,
    data_checksum: &str,
    queries_checksum: &str,
    normalized_queries: bool,
    data: &VectorSet,
    queries: &VectorSet,
    k: usize,
) -> Result<Vec<Vec<PointId>>> {
    if let Ok(text) = std::fs::read_to_string(cache_path) {
        match serde_json::from_str::<GroundTruthCache>(&text) {
            Ok(c)
                if c.data_checksum == data_checksum
                    && c.queries_checksum == queries_checksum
                    && c.normalized_queries == normalized_queries
                    && c.k == k =>
            {
                log::info!("ground truth cache hit: {}", cache_path.display());
                return Ok(c.ids);
            }
            Ok(_) => log::info!("ground truth cache stale: {}", cache_path.display()),
            Err(e) => log::warn!("ignoring unreadable ground truth cache: {e}"),
        }
    }
    let ids = compute_groundtruth(data, queries, k)?;
    let cache = GroundTruthCache {
        data_checksum: data_checksum.to_owned(),
        queries_checksum: queries_checksum.to_owned(),
        k,
        normalized_queries,
        ids,
    };
    std::fs::write(cache_path, serde_json::to_string(&cache)?)?;
    Ok(cache.ids)
}
