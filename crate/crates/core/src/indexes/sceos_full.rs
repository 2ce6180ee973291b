use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use itertools::Itertools;

use super::sceos_ta::{sort_rows, threshold_topb};
use super::{check_k, query_dims, rerank};
use crate::projection::{ExtremeDims, ProjectedMatrix, RotationSpec};
use crate::{par, CeosError, PointId, QueryResult, Result, VectorSet};

/// Default cap on the number of precomputed lists.
pub const DEFAULT_LIST_LIMIT: u128 = 1_000_000;

/// Full sCEOs: one top-`b` list per disjoint pair `(I, J)` of `s0`-subsets.
/// Keys are `I` sorted ascending followed by `J` sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SceosFullIndex {
    pub(crate) rotation: Arc<RotationSpec>,
    pub(crate) points: usize,
    pub(crate) s0: usize,
    pub(crate) b: usize,
    pub(crate) lists: BTreeMap<Vec<u32>, Vec<PointId>>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at each step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `C(D, s0) * C(D - s0, s0)`, saturating.
pub fn sceos_list_count(dims: usize, s0: usize) -> u128 {
    if 2 * s0 > dims {
        return 0;
    }
    binomial(dims, s0).saturating_mul(binomial(dims - s0, s0))
}

fn key_of(i: &[usize], j: &[usize]) -> Vec<u32> {
    i.iter().chain(j).map(|&d| d as u32).collect()
}

/// Builds every `L_IJ` with the threshold algorithm over fully sorted rows.
pub fn build_sceos_full(
    matrix: &ProjectedMatrix,
    s0: usize,
    b: usize,
    limit: u128,
) -> Result<SceosFullIndex> {
    let dims = matrix.dims();
    if s0 == 0 || 2 * s0 > dims {
        return Err(CeosError::param(format!(
            "s0={s0} needs 1 <= 2*s0 <= D={dims}"
        )));
    }
    if b == 0 {
        return Err(CeosError::param("sCEOs needs b >= 1"));
    }
    let count = sceos_list_count(dims, s0);
    if count > limit {
        return Err(CeosError::Capacity {
            what: format!("full sCEOs index with D={dims}, s0={s0}: list count C(D,s0)*C(D-s0,s0)"),
            count,
            limit,
        });
    }

    let sorted = sort_rows(matrix);
    let mut keys: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(count as usize);
    for i in (0..dims).combinations(s0) {
        let rest: Vec<usize> = (0..dims).filter(|d| !i.contains(d)).collect();
        for j in rest.into_iter().combinations(s0) {
            keys.push((i.clone(), j));
        }
    }
    let lists = par::map_range(keys.len(), |k| {
        let (i, j) = &keys[k];
        let ed = ExtremeDims::new(i.clone(), j.clone(), dims).expect("disjoint by construction");
        let (top, _) = threshold_topb(matrix, &sorted, &ed, b);
        (
            key_of(i, j),
            top.into_iter().map(|s| s.id).collect::<Vec<_>>(),
        )
    });
    Ok(SceosFullIndex {
        rotation: matrix.rotation().clone(),
        points: matrix.points(),
        s0,
        b,
        lists: lists.into_iter().collect(),
    })
}

impl SceosFullIndex {
    pub fn rotation(&self) -> &Arc<RotationSpec> {
        &self.rotation
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn s0(&self) -> usize {
        self.s0
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn list_count(&self) -> usize {
        self.lists.len()
    }

    /// The list for explicit dims, in any order.
    pub fn list(&self, dims: &ExtremeDims) -> Option<&[PointId]> {
        let (i, j) = dims.canonical();
        self.lists.get(&key_of(&i, &j)).map(Vec::as_slice)
    }

    pub fn query(&self, data: &VectorSet, query: &[f32], k: usize) -> Result<QueryResult> {
        check_k(k, self.b)?;
        let (dims, rotation) = query_dims(&self.rotation, data, self.points, query, self.s0)?;
        let start = Instant::now();
        let cands = self.list(&dims).ok_or_else(|| {
            CeosError::Internal(format!(
                "no list for dims {:?}/{:?}; index and query parameters disagree",
                dims.max_dims(),
                dims.min_dims()
            ))
        })?;
        let probe = start.elapsed();
        let mut res = rerank(cands, data, query, k);
        res.timings.rotation = rotation;
        res.timings.probe = probe;
        Ok(res)
    }
}
