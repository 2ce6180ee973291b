use std::sync::Arc;
use std::time::Instant;

use super::{check_k, query_dims, rerank};
use crate::projection::{ProjectedMatrix, RotationSpec};
use crate::topk::TopK;
use crate::{CeosError, PointId, QueryResult, Result, VectorSet};

/// Per projected dimension, the `b` point ids with the largest values.
/// Two-sided indexes also keep the `b` ids with the smallest values, which
/// the 2CEOs query probes for the minimum dimension of the query.
#[derive(Debug, Clone, PartialEq)]
pub struct OneCeosIndex {
    pub(crate) rotation: Arc<RotationSpec>,
    pub(crate) points: usize,
    pub(crate) b: usize,
    /// `D` lists of `min(b, n)` ids, back to back.
    pub(crate) top: Vec<PointId>,
    pub(crate) bottom: Option<Vec<PointId>>,
}

fn select_lists(matrix: &ProjectedMatrix, b: usize, largest: bool) -> Vec<PointId> {
    let len = b.min(matrix.points());
    let lists = crate::par::map_range(matrix.dims(), |dim| {
        let mut top = TopK::new(len);
        for (i, &v) in matrix.row(dim).iter().enumerate() {
            let v = v as f64;
            top.push(i as PointId, if largest { v } else { -v });
        }
        top.into_sorted()
            .into_iter()
            .map(|s| s.id)
            .collect::<Vec<_>>()
    });
    lists.concat()
}

pub fn build_1ceos(matrix: &ProjectedMatrix, b: usize) -> Result<OneCeosIndex> {
    if b == 0 {
        return Err(CeosError::param("1CEOs needs b >= 1"));
    }
    Ok(OneCeosIndex {
        rotation: matrix.rotation().clone(),
        points: matrix.points(),
        b,
        top: select_lists(matrix, b, true),
        bottom: None,
    })
}

/// 1CEOs index that additionally stores bottom-`b` lists for 2CEOs queries.
pub fn build_2ceos(matrix: &ProjectedMatrix, b: usize) -> Result<OneCeosIndex> {
    let mut index = build_1ceos(matrix, b)?;
    index.bottom = Some(select_lists(matrix, b, false));
    Ok(index)
}

impl OneCeosIndex {
    pub fn rotation(&self) -> &Arc<RotationSpec> {
        &self.rotation
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn is_two_sided(&self) -> bool {
        self.bottom.is_some()
    }

    fn list_len(&self) -> usize {
        self.b.min(self.points)
    }

    /// Ids with the largest values on `dim`, descending.
    pub fn list(&self, dim: usize) -> &[PointId] {
        let l = self.list_len();
        &self.top[dim * l..(dim + 1) * l]
    }

    /// Ids with the smallest values on `dim`, ascending.
    pub fn bottom_list(&self, dim: usize) -> Option<&[PointId]> {
        let l = self.list_len();
        self.bottom.as_ref().map(|v| &v[dim * l..(dim + 1) * l])
    }

    /// Reranks the list of the query's maximum dimension.
    pub fn query(&self, data: &VectorSet, query: &[f32], k: usize) -> Result<QueryResult> {
        check_k(k, self.b)?;
        let (dims, rotation) = query_dims(&self.rotation, data, self.points, query, 1)?;
        let start = Instant::now();
        let cands = self.list(dims.max_dims()[0]);
        let probe = start.elapsed();
        let mut res = rerank(cands, data, query, k);
        res.timings.rotation = rotation;
        res.timings.probe = probe;
        Ok(res)
    }

    /// 2CEOs: union of the maximum dimension's top list and the minimum
    /// dimension's bottom list.
    pub fn query_two_sided(
        &self,
        data: &VectorSet,
        query: &[f32],
        k: usize,
    ) -> Result<QueryResult> {
        check_k(k, self.b)?;
        if self.bottom.is_none() {
            return Err(CeosError::param(
                "two-sided query needs an index built with bottom lists",
            ));
        }
        let (dims, rotation) = query_dims(&self.rotation, data, self.points, query, 1)?;
        let start = Instant::now();
        let mut cands = self.list(dims.max_dims()[0]).to_vec();
        let bottom = self.bottom_list(dims.min_dims()[0]).unwrap_or_default();
        for &id in bottom {
            if !cands.contains(&id) {
                cands.push(id);
            }
        }
        let probe = start.elapsed();
        let mut res = rerank(&cands, data, query, k);
        res.timings.rotation = rotation;
        res.timings.probe = probe;
        Ok(res)
    }
}
