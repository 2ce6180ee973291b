//! Dataset I/O, ground truth, metrics, synthetic data and the benchmark
//! driver.

mod baselines;
mod bench;
mod groundtruth;
mod io;
mod metrics;
mod synth;

pub use baselines::{SimHashScan, SimpleLshScan};
pub use bench::{
    default_cache_path, run_benchmark, run_benchmark_on, AlgoConfig, AlgoReport, AlgoTiming,
    BenchConfig, BenchmarkReport, DataSource, OutputPaths, ResolvedParams,
};
pub use groundtruth::{compute_groundtruth, load_or_compute_groundtruth, GroundTruthCache};
pub use io::{
    file_checksum, load_vectors, read_ivecs, read_vectors, write_ivecs, write_vectors, VectorFormat,
};
pub use metrics::{mean, min_separations, precision_at_b, separation};
pub use synth::{generate, NormProfile, SynthConfig};

use crate::{CeosError, PointId, Result, VectorSet};

/// Data points, queries and optionally their exact top-k ids.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub data: VectorSet,
    pub queries: VectorSet,
    pub ground_truth: Option<Vec<Vec<PointId>>>,
}

impl Dataset {
    pub fn new(data: VectorSet, queries: VectorSet) -> Result<Self> {
        let ds = Dataset {
            data,
            queries,
            ground_truth: None,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.data.is_empty()
            && !self.queries.is_empty()
            && self.data.dim() != self.queries.dim()
        {
            return Err(CeosError::param(format!(
                "data has dimension {}, queries have {}",
                self.data.dim(),
                self.queries.dim()
            )));
        }
        if let Some(gt) = &self.ground_truth {
            if gt.len() != self.queries.len() {
                return Err(CeosError::param(
                    "ground truth row count differs from query count",
                ));
            }
            if gt
                .iter()
                .flatten()
                .any(|&id| id as usize >= self.data.len())
            {
                return Err(CeosError::param("ground truth id out of range"));
            }
        }
        Ok(())
    }
}
