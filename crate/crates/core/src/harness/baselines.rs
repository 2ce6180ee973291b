use crate::estimators::{
    simhash_estimate, simplelsh_transform, simplelsh_transform_query, BinaryCode, SimHasher,
};
use crate::indexes::rerank;
use crate::topk::TopK;
use crate::vectors::norm;
use crate::{PointId, QueryResult, Result, VectorSet};

/// Linear scan over SimHash codes of the data, reranking the `b` best
/// estimates.
#[derive(Debug, Clone)]
pub struct SimHashScan {
    hasher: SimHasher,
    codes: Vec<BinaryCode>,
}

impl SimHashScan {
    pub fn build(data: &VectorSet, bits: usize, seed: u64) -> Result<Self> {
        let hasher = SimHasher::new(data.dim(), bits, seed)?;
        let codes = data
            .iter()
            .map(|x| hasher.encode(x))
            .collect::<Result<_>>()?;
        Ok(SimHashScan { hasher, codes })
    }

    pub fn size_bytes(&self) -> u64 {
        (self.codes.len() * (self.hasher.bits().div_ceil(8) + 8)) as u64
    }

    pub fn query(
        &self,
        data: &VectorSet,
        query: &[f32],
        b: usize,
        k: usize,
    ) -> Result<QueryResult> {
        let qc = self.hasher.encode(query)?;
        let mut top = TopK::new(b.min(self.codes.len()));
        for (i, c) in self.codes.iter().enumerate() {
            top.push(i as PointId, simhash_estimate(c, &qc)?);
        }
        let cands: Vec<PointId> = top.into_sorted().into_iter().map(|s| s.id).collect();
        Ok(rerank(&cands, data, query, k))
    }
}

/// SimHash over the SimpleLSH-augmented data.
#[derive(Debug, Clone)]
pub struct SimpleLshScan {
    hasher: SimHasher,
    codes: Vec<BinaryCode>,
}

impl SimpleLshScan {
    pub fn build(data: &VectorSet, bits: usize, seed: u64) -> Result<Self> {
        let (aug, _) = simplelsh_transform(data)?;
        let hasher = SimHasher::new(aug.dim(), bits, seed)?;
        let codes = aug
            .iter()
            .map(|x| hasher.encode(x))
            .collect::<Result<_>>()?;
        Ok(SimpleLshScan { hasher, codes })
    }

    pub fn size_bytes(&self) -> u64 {
        (self.codes.len() * self.hasher.bits().div_ceil(8)) as u64
    }

    pub fn query(
        &self,
        data: &VectorSet,
        query: &[f32],
        b: usize,
        k: usize,
    ) -> Result<QueryResult> {
        let n = norm(query);
        let unit: Vec<f32> = query.iter().map(|&v| (v as f64 / n) as f32).collect();
        let qc = self.hasher.encode(&simplelsh_transform_query(&unit)?)?;
        let mut top = TopK::new(b.min(self.codes.len()));
        for (i, c) in self.codes.iter().enumerate() {
            top.push(i as PointId, c.matches(&qc)? as f64);
        }
        let cands: Vec<PointId> = top.into_sorted().into_iter().map(|s| s.id).collect();
        Ok(rerank(&cands, data, query, k))
    }
}
