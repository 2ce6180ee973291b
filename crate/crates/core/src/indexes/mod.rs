//! CEOs index structures and their query procedures.
//!
//! Every query follows the same three phases, timed separately in
//! [`QueryResult::timings`]: rotate the query, probe the index for
//! candidate ids, then rerank the candidates with exact inner products.

mod coceos;
mod codec;
mod est;
mod one_ceos;
mod sceos_full;
mod sceos_ta;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use coceos::{build_coceos, CoCeosIndex, ListEntry};
pub use codec::{read_index, write_index, FORMAT_VERSION, MAGIC};
pub use est::SceosEstIndex;
pub use one_ceos::{build_1ceos, build_2ceos, OneCeosIndex};
pub use sceos_full::{build_sceos_full, sceos_list_count, SceosFullIndex, DEFAULT_LIST_LIMIT};
pub use sceos_ta::{SceosTaIndex, TaStats};

use crate::projection::{extreme_dims, ExtremeDims, ProjectedMatrix, RotationSpec};
use crate::topk::TopK;
use crate::vectors::dot;
use crate::{CeosError, PointId, QueryResult, Result, Timings, VectorSet};

/// Exact rerank: inner products of `candidates` with `query`, top-`k` best
/// first. `k` beyond the candidate count returns every candidate.
pub fn rerank(candidates: &[PointId], data: &VectorSet, query: &[f32], k: usize) -> QueryResult {
    let start = Instant::now();
    let mut top = TopK::new(k.min(candidates.len()));
    for &id in candidates {
        top.push(id, dot(data.point(id as usize), query));
    }
    QueryResult {
        entries: top
            .into_sorted()
            .into_iter()
            .map(|s| (s.id, s.score))
            .collect(),
        candidates_examined: candidates.len(),
        effective_budget: None,
        timings: Timings {
            rerank: start.elapsed(),
            ..Timings::default()
        },
    }
}

/// Rotates `query` after checking it against the rotation and the data.
pub(crate) fn rotate_query(
    rotation: &RotationSpec,
    data: &VectorSet,
    n: usize,
    query: &[f32],
) -> Result<(Vec<f32>, std::time::Duration)> {
    if data.len() != n {
        return Err(CeosError::param(format!(
            "index covers {n} points but the data set has {}",
            data.len()
        )));
    }
    let start = Instant::now();
    let sig = rotation.apply(query)?;
    Ok((sig, start.elapsed()))
}

pub(crate) fn check_k(k: usize, b: usize) -> Result<()> {
    if k > b {
        return Err(CeosError::param(format!(
            "k={k} exceeds the candidate budget b={b}"
        )));
    }
    Ok(())
}

/// Query signature and extreme dims, with the rotation time.
pub(crate) fn query_dims(
    rotation: &RotationSpec,
    data: &VectorSet,
    n: usize,
    query: &[f32],
    s0: usize,
) -> Result<(ExtremeDims, std::time::Duration)> {
    let (sig, rot_time) = rotate_query(rotation, data, n, query)?;
    Ok((extreme_dims(&sig, s0)?, rot_time))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "1ceos")]
    OneCeos,
    #[serde(rename = "2ceos")]
    TwoCeos,
    #[serde(rename = "sceos")]
    SceosFull,
    #[serde(rename = "sceos-est")]
    SceosEst,
    #[serde(rename = "sceos-ta")]
    SceosTa,
    #[serde(rename = "coceos")]
    CoCeos,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::OneCeos,
        Algorithm::TwoCeos,
        Algorithm::SceosFull,
        Algorithm::SceosEst,
        Algorithm::SceosTa,
        Algorithm::CoCeos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::OneCeos => "1ceos",
            Algorithm::TwoCeos => "2ceos",
            Algorithm::SceosFull => "sceos",
            Algorithm::SceosEst => "sceos-est",
            Algorithm::SceosTa => "sceos-ta",
            Algorithm::CoCeos => "coceos",
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            Algorithm::OneCeos => 1,
            Algorithm::TwoCeos => 2,
            Algorithm::SceosFull => 3,
            Algorithm::SceosEst => 4,
            Algorithm::SceosTa => 5,
            Algorithm::CoCeos => 6,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == tag)
            .ok_or_else(|| CeosError::format(format!("unknown algorithm tag {tag}")))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CeosError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                CeosError::param(format!(
                    "unknown algorithm {s:?} (expected one of 1ceos, 2ceos, sceos, sceos-est, sceos-ta, coceos)"
                ))
            })
    }
}

/// Index-time parameters. Fields an algorithm does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildParams {
    /// Candidates kept per list (1CEOs, full sCEOs).
    pub b: usize,
    /// Extreme dims per side (full sCEOs).
    pub s0: usize,
    /// Entries kept per side and dimension (coCEOs).
    pub m: usize,
    /// Cap on the number of full sCEOs lists.
    pub list_limit: u128,
}

impl Default for BuildParams {
    fn default() -> Self {
        BuildParams {
            b: 100,
            s0: 5,
            m: 100,
            list_limit: DEFAULT_LIST_LIMIT,
        }
    }
}

/// Query-time parameters. Fields an algorithm does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryParams {
    pub k: usize,
    pub b: usize,
    pub s0: usize,
    /// Number of extreme dims coCEOs scans (even).
    pub s_prime: usize,
    /// Total coCEOs scan budget `B`.
    pub budget: usize,
}

impl Default for QueryParams {
    fn default() -> Self {
        QueryParams {
            k: 10,
            b: 100,
            s0: 5,
            s_prime: 20,
            budget: 1000,
        }
    }
}

/// Any of the index structures, as built, stored and queried by the harness.
#[derive(Debug, Clone, PartialEq)]
pub enum CeosIndex {
    OneCeos(OneCeosIndex),
    SceosFull(SceosFullIndex),
    SceosEst(SceosEstIndex),
    SceosTa(SceosTaIndex),
    CoCeos(CoCeosIndex),
}

impl CeosIndex {
    pub fn build(algo: Algorithm, matrix: ProjectedMatrix, params: &BuildParams) -> Result<Self> {
        Ok(match algo {
            Algorithm::OneCeos => CeosIndex::OneCeos(build_1ceos(&matrix, params.b)?),
            Algorithm::TwoCeos => CeosIndex::OneCeos(build_2ceos(&matrix, params.b)?),
            Algorithm::SceosFull => CeosIndex::SceosFull(build_sceos_full(
                &matrix,
                params.s0,
                params.b,
                params.list_limit,
            )?),
            Algorithm::SceosEst => CeosIndex::SceosEst(SceosEstIndex::new(matrix)),
            Algorithm::SceosTa => CeosIndex::SceosTa(SceosTaIndex::build(matrix)),
            Algorithm::CoCeos => CeosIndex::CoCeos(build_coceos(&matrix, params.m)?),
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            CeosIndex::OneCeos(i) if i.is_two_sided() => Algorithm::TwoCeos,
            CeosIndex::OneCeos(_) => Algorithm::OneCeos,
            CeosIndex::SceosFull(_) => Algorithm::SceosFull,
            CeosIndex::SceosEst(_) => Algorithm::SceosEst,
            CeosIndex::SceosTa(_) => Algorithm::SceosTa,
            CeosIndex::CoCeos(_) => Algorithm::CoCeos,
        }
    }

    pub fn rotation(&self) -> &Arc<RotationSpec> {
        match self {
            CeosIndex::OneCeos(i) => i.rotation(),
            CeosIndex::SceosFull(i) => i.rotation(),
            CeosIndex::SceosEst(i) => i.matrix().rotation(),
            CeosIndex::SceosTa(i) => i.matrix().rotation(),
            CeosIndex::CoCeos(i) => i.rotation(),
        }
    }

    pub fn points(&self) -> usize {
        match self {
            CeosIndex::OneCeos(i) => i.points(),
            CeosIndex::SceosFull(i) => i.points(),
            CeosIndex::SceosEst(i) => i.matrix().points(),
            CeosIndex::SceosTa(i) => i.matrix().points(),
            CeosIndex::CoCeos(i) => i.points(),
        }
    }

    pub fn query(&self, data: &VectorSet, query: &[f32], p: &QueryParams) -> Result<QueryResult> {
        match self {
            CeosIndex::OneCeos(i) if i.is_two_sided() => i.query_two_sided(data, query, p.k),
            CeosIndex::OneCeos(i) => i.query(data, query, p.k),
            CeosIndex::SceosFull(i) => i.query(data, query, p.k),
            CeosIndex::SceosEst(i) => i.query(data, query, p.s0, p.b, p.k),
            CeosIndex::SceosTa(i) => i.query(data, query, p.s0, p.b, p.k),
            CeosIndex::CoCeos(i) => i.query(data, query, p.s_prime, p.budget, p.b, p.k),
        }
    }

    /// Size of the serialized index in bytes.
    pub fn serialized_len(&self) -> Result<u64> {
        let mut w = CountingWriter(0);
        write_index(self, &mut w)?;
        Ok(w.0)
    }
}

struct CountingWriter(u64);

impl std::io::Write for CountingWriter {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0 += buf.len() as u64;
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}
