use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::baselines::{SimHashScan, SimpleLshScan};
use super::groundtruth::{compute_groundtruth, load_or_compute_groundtruth};
use super::io::{file_checksum, load_vectors, VectorFormat};
use super::metrics::{mean, precision_at_b};
use crate::estimators::brute_force_topk;
use crate::indexes::{Algorithm, BuildParams, CeosIndex, QueryParams, DEFAULT_LIST_LIMIT};
use crate::projection::{make_rotation, project_all, RotationKind};
use crate::rng::derive_seed;
use crate::{par, CeosError, PointId, QueryResult, Result, VectorSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSource {
    pub path: PathBuf,
    pub format: VectorFormat,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// One algorithm entry of a benchmark config. Unset fields take defaults
/// resolved against the data set (see [`AlgoConfig::resolve`]).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgoConfig {
    /// `brute`, `1ceos`, `2ceos`, `sceos`, `sceos-est`, `sceos-ta`, `coceos`,
    /// `simhash` or `simplelsh`.
    pub name: String,
    pub rotation: Option<RotationKind>,
    #[serde(rename = "D")]
    pub dims: Option<usize>,
    pub s0: Option<usize>,
    pub b: Option<usize>,
    pub s_prime: Option<usize>,
    #[serde(rename = "B")]
    pub budget: Option<usize>,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub list_limit: Option<u128>,
}

impl AlgoConfig {
    pub fn named(name: &str) -> Self {
        AlgoConfig {
            name: name.to_owned(),
            ..AlgoConfig::default()
        }
    }

    /// Fills defaults: `D` = next power of two >= d, `s0` = 5, `b` = 100,
    /// `s'` = 20, `B` = n/100 (at least `s'`), `m` = ceil(B / s'), `l` = 64.
    pub fn resolve(&self, n: usize, d: usize) -> ResolvedParams {
        let s_prime = self.s_prime.unwrap_or(20);
        let budget = self.budget.unwrap_or((n / 100).max(s_prime));
        ResolvedParams {
            name: self.name.clone(),
            rotation: self.rotation.unwrap_or(RotationKind::Spinner),
            dims: self.dims.unwrap_or(d.max(1).next_power_of_two()),
            s0: self.s0.unwrap_or(5),
            b: self.b.unwrap_or(100),
            s_prime,
            budget,
            m: self.m.unwrap_or(budget.div_ceil(s_prime)),
            l: self.l.unwrap_or(64),
            list_limit: self.list_limit.unwrap_or(DEFAULT_LIST_LIMIT),
        }
    }
}

/// Fully resolved parameters of one benchmarked algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParams {
    pub name: String,
    pub rotation: RotationKind,
    #[serde(rename = "D")]
    pub dims: usize,
    pub s0: usize,
    pub b: usize,
    pub s_prime: usize,
    #[serde(rename = "B")]
    pub budget: usize,
    pub m: usize,
    pub l: usize,
    pub list_limit: u128,
}

impl ResolvedParams {
    fn query_params(&self, k: usize) -> QueryParams {
        QueryParams {
            k,
            b: self.b,
            s0: self.s0,
            s_prime: self.s_prime,
            budget: self.budget,
        }
    }

    fn build_params(&self) -> BuildParams {
        BuildParams {
            b: self.b,
            s0: self.s0,
            m: self.m,
            list_limit: self.list_limit,
        }
    }
}

/// Benchmark configuration, usually read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub data: DataSource,
    pub queries: DataSource,
    /// Ground-truth cache file; computed and written when missing or stale.
    #[serde(default)]
    pub ground_truth: Option<PathBuf>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub normalize_queries: bool,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<AlgoConfig>,
}

fn default_k() -> usize {
    10
}
fn default_seed() -> u64 {
    42
}
fn default_repeats() -> usize {
    5
}
fn default_algorithms() -> Vec<AlgoConfig> {
    ["1ceos", "sceos-est", "sceos-ta", "coceos"]
        .into_iter()
        .map(AlgoConfig::named)
        .collect()
}

impl BenchConfig {
    /// A config with every optional field at its default.
    pub fn new(data: DataSource, queries: DataSource) -> Self {
        BenchConfig {
            data,
            queries,
            ground_truth: None,
            k: default_k(),
            seed: default_seed(),
            repeats: default_repeats(),
            normalize_queries: false,
            output: OutputPaths::default(),
            algorithms: default_algorithms(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CeosError::param(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }
}

/// Wall-clock measurements, kept apart from the deterministic fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoTiming {
    pub mean_latency_ms: f64,
    /// Brute-force mean latency divided by this algorithm's, same run.
    pub speedup: f64,
    pub build_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoReport {
    pub params: ResolvedParams,
    /// Mean over queries of `|retrieved top-k ∩ true top-k| / k`.
    pub precision: f64,
    pub per_query_precision: Vec<f64>,
    pub mean_candidates: f64,
    pub index_bytes: u64,
    pub seed: u64,
    pub timing: AlgoTiming,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub n: usize,
    pub d: usize,
    pub queries: usize,
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
    pub parallel: bool,
    pub algorithms: Vec<AlgoReport>,
}

impl BenchmarkReport {
    pub fn get(&self, name: &str) -> Option<&AlgoReport> {
        self.algorithms.iter().find(|a| a.params.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per algorithm.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "algorithm",
            "rotation",
            "D",
            "s0",
            "b",
            "s_prime",
            "B",
            "m",
            "l",
            "precision",
            "mean_candidates",
            "index_bytes",
            "seed",
            "mean_latency_ms",
            "speedup",
            "build_seconds",
        ])?;
        for a in &self.algorithms {
            let p = &a.params;
            let rotation = match p.rotation {
                RotationKind::Gaussian => "gaussian",
                RotationKind::Spinner => "spinner",
            };
            w.write_record([
                p.name.clone(),
                rotation.to_owned(),
                p.dims.to_string(),
                p.s0.to_string(),
                p.b.to_string(),
                p.s_prime.to_string(),
                p.budget.to_string(),
                p.m.to_string(),
                p.l.to_string(),
                format!("{:.6}", a.precision),
                format!("{:.3}", a.mean_candidates),
                a.index_bytes.to_string(),
                a.seed.to_string(),
                format!("{:.6}", a.timing.mean_latency_ms),
                format!("{:.3}", a.timing.speedup),
                format!("{:.6}", a.timing.build_seconds),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CeosError::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CeosError::Internal(e.to_string()))
    }

    pub fn write(&self, out: &OutputPaths) -> Result<()> {
        if let Some(p) = &out.json {
            std::fs::write(p, self.to_json()?)?;
        }
        if let Some(p) = &out.csv {
            std::fs::write(p, self.to_csv()?)?;
        }
        Ok(())
    }
}

enum Runner {
    Brute,
    Ceos(CeosIndex, QueryParams),
    SimHash(SimHashScan, usize),
    SimpleLsh(SimpleLshScan, usize),
}

impl Runner {
    fn build(p: &ResolvedParams, data: &VectorSet, seed: u64, k: usize) -> Result<(Self, u64)> {
        match p.name.as_str() {
            "brute" => Ok((Runner::Brute, (data.as_flat().len() * 4) as u64)),
            "simhash" => {
                let s = SimHashScan::build(data, p.l, derive_seed(seed, "simhash"))?;
                let bytes = s.size_bytes();
                Ok((Runner::SimHash(s, p.b), bytes))
            }
            "simplelsh" => {
                let s = SimpleLshScan::build(data, p.l, derive_seed(seed, "simhash"))?;
                let bytes = s.size_bytes();
                Ok((Runner::SimpleLsh(s, p.b), bytes))
            }
            other => {
                let algo: Algorithm = other.parse()?;
                let rot = make_rotation(
                    p.rotation,
                    derive_seed(seed, "rotation"),
                    data.dim(),
                    p.dims,
                )?;
                let matrix = project_all(Arc::new(rot), data)?;
                let index = CeosIndex::build(algo, matrix, &p.build_params())
                    .map_err(|e| e.context(format!("building {other}")))?;
                let bytes = index.serialized_len()?;
                Ok((Runner::Ceos(index, p.query_params(k)), bytes))
            }
        }
    }

    fn query(&self, data: &VectorSet, q: &[f32], k: usize) -> Result<QueryResult> {
        match self {
            Runner::Brute => brute_force_topk(data, q, k),
            Runner::Ceos(index, p) => index.query(data, q, p),
            Runner::SimHash(s, b) => s.query(data, q, *b, k),
            Runner::SimpleLsh(s, b) => s.query(data, q, *b, k),
        }
    }
}

struct Measured {
    answers: Vec<QueryResult>,
    latencies: Vec<Duration>,
}

fn run_queries(
    runner: &Runner,
    data: &VectorSet,
    queries: &VectorSet,
    k: usize,
) -> Result<Measured> {
    let out = par::map_range(queries.len(), |i| {
        let start = Instant::now();
        let r = runner.query(data, queries.point(i), k);
        (r, start.elapsed())
    });
    let mut answers = Vec::with_capacity(out.len());
    let mut latencies = Vec::with_capacity(out.len());
    for (r, t) in out {
        answers.push(r?);
        latencies.push(t);
    }
    Ok(Measured { answers, latencies })
}

/// Loads the configured files, obtains the ground truth (from the cache when
/// valid) and runs [`run_benchmark_on`]. Writes the report files when
/// output paths are set.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchmarkReport> {
    let data = load_vectors(&config.data.path, config.data.format)?;
    let mut queries = load_vectors(&config.queries.path, config.queries.format)?;
    if config.normalize_queries {
        queries = queries.normalized();
    }
    let truth = match &config.ground_truth {
        Some(path) => load_or_compute_groundtruth(
            path,
            &file_checksum(&config.data.path)?,
            &file_checksum(&config.queries.path)?,
            config.normalize_queries,
            &data,
            &queries,
            config.k,
        )?,
        None => compute_groundtruth(&data, &queries, config.k)?,
    };
    let report = run_benchmark_on(&data, &queries, &truth, config)?;
    report.write(&config.output)?;
    Ok(report)
}

/// Builds each configured index once, runs every query `repeats` times and
/// averages. Brute force always runs first as the speedup reference.
pub fn run_benchmark_on(
    data: &VectorSet,
    queries: &VectorSet,
    truth: &[Vec<PointId>],
    config: &BenchConfig,
) -> Result<BenchmarkReport> {
    if truth.len() != queries.len() {
        return Err(CeosError::param(
            "ground truth does not match the query count",
        ));
    }
    if config.repeats == 0 {
        return Err(CeosError::param("repeats must be at least 1"));
    }
    if data.is_empty() {
        return Err(CeosError::param("cannot benchmark an empty data set"));
    }
    let k = config.k;
    let mut configs = vec![AlgoConfig::named("brute")];
    configs.extend(
        config
            .algorithms
            .iter()
            .filter(|a| a.name != "brute")
            .cloned(),
    );

    let mut reports: Vec<AlgoReport> = Vec::new();
    let mut answers: Vec<Vec<QueryResult>> = Vec::new();
    let mut brute_latency = 0.0;
    for cfg in &configs {
        let params = cfg.resolve(data.len(), data.dim());
        log::info!("building {}", params.name);
        let start = Instant::now();
        let (runner, index_bytes) = Runner::build(&params, data, config.seed, k)?;
        let build_seconds = start.elapsed().as_secs_f64();

        let mut latencies = Vec::new();
        let mut first: Option<Vec<QueryResult>> = None;
        for rep in 0..config.repeats {
            let m = run_queries(&runner, data, queries, k)
                .map_err(|e| e.context(format!("querying {}", params.name)))?;
            latencies.extend(m.latencies.iter().map(|t| t.as_secs_f64() * 1e3));
            match &first {
                None => first = Some(m.answers),
                Some(prev) => {
                    if prev.iter().zip(&m.answers).any(|(a, b)| !a.same_answer(b)) {
                        return Err(CeosError::Internal(format!(
                            "{} returned different answers on repeat {rep}",
                            params.name
                        )));
                    }
                }
            }
        }
        let results = first.unwrap_or_default();
        let per_query: Vec<f64> = results
            .iter()
            .zip(truth)
            .map(|(r, t)| precision_at_b(&r.ids(), t))
            .collect();
        let mean_latency = mean(&latencies);
        if params.name == "brute" {
            brute_latency = mean_latency;
        }
        let mean_candidates = mean(
            &results
                .iter()
                .map(|r| r.candidates_examined as f64)
                .collect::<Vec<_>>(),
        );
        reports.push(AlgoReport {
            precision: mean(&per_query),
            per_query_precision: per_query,
            mean_candidates,
            index_bytes,
            seed: config.seed,
            timing: AlgoTiming {
                mean_latency_ms: mean_latency,
                speedup: if mean_latency > 0.0 {
                    brute_latency / mean_latency
                } else {
                    0.0
                },
                build_seconds,
            },
            params,
        });
        answers.push(results);
    }

    check_est_ta_agreement(&reports, &answers)?;
    Ok(BenchmarkReport {
        n: data.len(),
        d: data.dim(),
        queries: queries.len(),
        k,
        repeats: config.repeats,
        seed: config.seed,
        parallel: par::is_parallel(),
        algorithms: reports,
    })
}

// sCEOs-Est and sCEOs-TA compute the same candidates; with equal parameters
// their answers must match exactly.
fn check_est_ta_agreement(reports: &[AlgoReport], answers: &[Vec<QueryResult>]) -> Result<()> {
    let same_setup = |a: &ResolvedParams, b: &ResolvedParams| {
        a.rotation == b.rotation && a.dims == b.dims && a.s0 == b.s0 && a.b == b.b
    };
    for (i, est) in reports.iter().enumerate() {
        if est.params.name != "sceos-est" {
            continue;
        }
        for (j, ta) in reports.iter().enumerate() {
            if ta.params.name == "sceos-ta" && same_setup(&est.params, &ta.params) {
                for (q, (a, b)) in answers[i].iter().zip(&answers[j]).enumerate() {
                    if a.entries != b.entries {
                        return Err(CeosError::Internal(format!(
                            "sceos-est and sceos-ta disagree on query {q}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Used by the CLI to label ground-truth caches next to a data file.
pub fn default_cache_path(data: &Path) -> PathBuf {
    let mut p = data.as_os_str().to_owned();
    p.push(".gt.json");
    PathBuf::from(p)
}
