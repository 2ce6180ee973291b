use std::time::Instant;

use super::{check_k, query_dims, rerank};
use crate::estimators::sceos_est_topb;
use crate::projection::ProjectedMatrix;
use crate::{PointId, QueryResult, Result, VectorSet};

/// sCEOs-Est: no index beyond the projected matrix; each query estimates
/// all `n` inner products from the `s` extreme dims.
#[derive(Debug, Clone, PartialEq)]
pub struct SceosEstIndex {
    pub(crate) matrix: ProjectedMatrix,
}

impl SceosEstIndex {
    pub fn new(matrix: ProjectedMatrix) -> Self {
        SceosEstIndex { matrix }
    }

    pub fn matrix(&self) -> &ProjectedMatrix {
        &self.matrix
    }

    pub fn query(
        &self,
        data: &VectorSet,
        query: &[f32],
        s0: usize,
        b: usize,
        k: usize,
    ) -> Result<QueryResult> {
        check_k(k, b)?;
        let (dims, rotation) = query_dims(
            self.matrix.rotation(),
            data,
            self.matrix.points(),
            query,
            s0,
        )?;
        let start = Instant::now();
        let cands: Vec<PointId> = sceos_est_topb(&self.matrix, &dims, b)?
            .into_iter()
            .map(|s| s.id)
            .collect();
        let probe = start.elapsed();
        let mut res = rerank(&cands, data, query, k);
        res.timings.rotation = rotation;
        res.timings.probe = probe;
        Ok(res)
    }
}
