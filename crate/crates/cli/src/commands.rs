use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use ceos_core::harness::{
    compute_groundtruth, file_checksum, generate, load_vectors, mean, min_separations,
    run_benchmark, AlgoConfig, BenchConfig, DataSource, NormProfile, OutputPaths, SynthConfig,
    VectorFormat,
};
use ceos_core::indexes::{read_index, write_index, BuildParams, CeosIndex, QueryParams};
use ceos_core::projection::{make_rotation, project_all};
use ceos_core::rng::derive_seed;
use ceos_core::{CeosError, PointId, QueryResult, Result, RotationKind, VectorSet};
use serde::{Deserialize, Serialize};

use crate::args::{BenchArgs, BuildArgs, GroundtruthArgs, QueryArgs, SynthArgs};

fn print_config<T: Serialize>(command: &str, config: &T) -> Result<()> {
    println!("{command} config: {}", serde_json::to_string(config)?);
    Ok(())
}

/// Sidecar written next to every index file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexMeta {
    pub algorithm: String,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub dims: usize,
    pub rotation: RotationKind,
    pub seed: u64,
    pub rotation_seed: u64,
    pub params: BuildParams,
    pub data_checksum: String,
    pub index_checksum: String,
    pub build_seconds: f64,
}

pub fn meta_path(index: &Path) -> PathBuf {
    let mut p = index.as_os_str().to_owned();
    p.push(".meta.json");
    PathBuf::from(p)
}

#[derive(Serialize)]
struct ResolvedBuild<'a> {
    data: &'a Path,
    format: VectorFormat,
    algo: &'a str,
    index: &'a Path,
    #[serde(rename = "D")]
    dims: usize,
    rotation: RotationKind,
    seed: u64,
    params: BuildParams,
}

pub fn build(a: BuildArgs) -> Result<()> {
    let data = load_vectors(&a.data, a.format)?;
    if data.is_empty() {
        return Err(CeosError::param("data file holds no vectors"));
    }
    let params = BuildParams {
        b: a.b,
        s0: a.s0,
        m: a.m,
        list_limit: a.list_limit,
    };
    let requested = a.dims.unwrap_or(data.dim().next_power_of_two());
    let rot = make_rotation(
        a.rotation,
        derive_seed(a.seed, "rotation"),
        data.dim(),
        requested,
    )?;
    print_config(
        "build",
        &ResolvedBuild {
            data: &a.data,
            format: a.format,
            algo: a.algo.name(),
            index: &a.index,
            dims: rot.out_dim(),
            rotation: a.rotation,
            seed: a.seed,
            params,
        },
    )?;

    let start = Instant::now();
    let matrix = project_all(Arc::new(rot), &data)?;
    let index = CeosIndex::build(a.algo, matrix, &params)?;
    let build_seconds = start.elapsed().as_secs_f64();

    let mut w = BufWriter::new(File::create(&a.index)?);
    write_index(&index, &mut w)?;
    w.flush()?;
    drop(w);

    let meta = IndexMeta {
        algorithm: a.algo.name().to_owned(),
        n: data.len(),
        d: data.dim(),
        dims: index.rotation().out_dim(),
        rotation: a.rotation,
        seed: a.seed,
        rotation_seed: index.rotation().seed(),
        params,
        data_checksum: file_checksum(&a.data)?,
        index_checksum: file_checksum(&a.index)?,
        build_seconds,
    };
    std::fs::write(meta_path(&a.index), serde_json::to_string_pretty(&meta)?)?;
    println!(
        "built {} over n={} d={} D={} in {:.3}s -> {}",
        meta.algorithm,
        meta.n,
        meta.d,
        meta.dims,
        build_seconds,
        a.index.display()
    );
    Ok(())
}

fn mismatch(
    field: &str,
    expected: impl std::fmt::Display,
    found: impl std::fmt::Display,
) -> CeosError {
    CeosError::param(format!(
        "metadata mismatch in {field}: expected {expected}, found {found}"
    ))
}

fn load_checked_index(a: &QueryArgs) -> Result<(IndexMeta, CeosIndex)> {
    let meta_file = meta_path(&a.index);
    let text = std::fs::read_to_string(&meta_file)
        .map_err(|e| CeosError::from(e).context(format!("reading {}", meta_file.display())))?;
    let meta: IndexMeta = serde_json::from_str(&text)?;
    let index_cs = file_checksum(&a.index)?;
    if index_cs != meta.index_checksum {
        return Err(mismatch("index_checksum", &meta.index_checksum, index_cs));
    }
    let data_cs = file_checksum(&a.data)?;
    if data_cs != meta.data_checksum {
        return Err(mismatch("data_checksum", &meta.data_checksum, data_cs));
    }
    let index = read_index(&mut BufReader::new(File::open(&a.index)?))?;
    let rot = index.rotation();
    if rot.seed() != meta.rotation_seed {
        return Err(mismatch("rotation_seed", meta.rotation_seed, rot.seed()));
    }
    if rot.in_dim() != meta.d {
        return Err(mismatch("d", meta.d, rot.in_dim()));
    }
    if rot.out_dim() != meta.dims {
        return Err(mismatch("D", meta.dims, rot.out_dim()));
    }
    if index.algorithm().name() != meta.algorithm {
        return Err(mismatch(
            "algorithm",
            &meta.algorithm,
            index.algorithm().name(),
        ));
    }
    Ok((meta, index))
}

#[derive(Serialize)]
struct ResolvedQuery<'a> {
    index: &'a Path,
    data: &'a Path,
    queries: &'a Path,
    format: VectorFormat,
    out: &'a Path,
    algo: &'a str,
    seed: u64,
    normalize_queries: bool,
    params: QueryParams,
}

#[derive(Serialize)]
struct QueryRow {
    query: usize,
    rank: usize,
    id: u32,
    inner_product: f64,
}

pub fn query(a: QueryArgs) -> Result<()> {
    let (meta, index) = load_checked_index(&a)?;
    let data = load_vectors(&a.data, a.format)?;
    let mut queries = load_vectors(&a.queries, a.format)?;
    if !queries.is_empty() && queries.dim() != meta.d {
        return Err(mismatch("d", meta.d, queries.dim()));
    }
    if a.normalize_queries {
        queries = queries.normalized();
    }
    let params = QueryParams {
        k: a.k,
        b: a.b.unwrap_or(meta.params.b),
        s0: a.s0.unwrap_or(meta.params.s0),
        s_prime: a.sprime,
        budget: a.budget.unwrap_or((meta.n / 100).max(a.sprime)),
    };
    print_config(
        "query",
        &ResolvedQuery {
            index: &a.index,
            data: &a.data,
            queries: &a.queries,
            format: a.format,
            out: &a.out,
            algo: &meta.algorithm,
            seed: meta.seed,
            normalize_queries: a.normalize_queries,
            params,
        },
    )?;

    let mut results: Vec<QueryResult> = Vec::with_capacity(queries.len());
    let mut latencies = Vec::with_capacity(queries.len());
    for q in queries.iter() {
        let start = Instant::now();
        let r = index.query(&data, q, &params)?;
        latencies.push(start.elapsed().as_secs_f64() * 1e3);
        results.push(r);
    }

    let rows: Vec<QueryRow> = results
        .iter()
        .enumerate()
        .flat_map(|(qi, r)| {
            r.entries
                .iter()
                .enumerate()
                .map(move |(rank, &(id, ip))| QueryRow {
                    query: qi,
                    rank,
                    id,
                    inner_product: ip,
                })
        })
        .collect();
    write_rows(&a.out, &rows)?;

    if latencies.is_empty() {
        println!("0 queries; wrote empty results to {}", a.out.display());
    } else {
        let mut sorted = latencies.clone();
        sorted.sort_by(f64::total_cmp);
        let pct = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
        println!(
            "{} queries: mean {:.4} ms, p50 {:.4} ms, p99 {:.4} ms, max {:.4} ms",
            sorted.len(),
            mean(&latencies),
            pct(0.5),
            pct(0.99),
            sorted[sorted.len() - 1]
        );
    }
    Ok(())
}

fn write_rows(out: &Path, rows: &[QueryRow]) -> Result<()> {
    if out.extension().is_some_and(|e| e == "json") {
        std::fs::write(out, serde_json::to_string_pretty(rows)?)?;
        return Ok(());
    }
    let mut f = BufWriter::new(File::create(out)?);
    if !rows.is_empty() {
        writeln!(f, "query,rank,id,inner_product")?;
    }
    for r in rows {
        writeln!(f, "{},{},{},{}", r.query, r.rank, r.id, r.inner_product)?;
    }
    f.flush()?;
    Ok(())
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| CeosError::param(format!("--{flag} is required without --config")))
}

pub fn bench(a: BenchArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(path) => {
            let mut cfg = BenchConfig::from_toml(&std::fs::read_to_string(path)?)?;
            if let Some(p) = &a.data {
                cfg.data.path = p.clone();
            }
            if let Some(p) = &a.queries {
                cfg.queries.path = p.clone();
            }
            if let Some(f) = a.format {
                cfg.data.format = f;
                cfg.queries.format = f;
            }
            cfg
        }
        None => {
            let format = a.format.unwrap_or(VectorFormat::Fvecs);
            BenchConfig::new(
                DataSource {
                    path: required(a.data.clone(), "data")?,
                    format,
                },
                DataSource {
                    path: required(a.queries.clone(), "queries")?,
                    format,
                },
            )
        }
    };
    if !a.algo.is_empty() {
        cfg.algorithms = a.algo.iter().map(|n| AlgoConfig::named(n.trim())).collect();
    }
    for algo in &mut cfg.algorithms {
        algo.dims = a.dims.or(algo.dims);
        algo.s0 = a.s0.or(algo.s0);
        algo.s_prime = a.sprime.or(algo.s_prime);
        algo.budget = a.budget.or(algo.budget);
        algo.m = a.m.or(algo.m);
        algo.b = a.b.or(algo.b);
        algo.l = a.l.or(algo.l);
        algo.rotation = a.rotation.or(algo.rotation);
    }
    if let Some(k) = a.k {
        cfg.k = k;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(r) = a.repeats {
        cfg.repeats = r;
    }
    if a.normalize_queries {
        cfg.normalize_queries = true;
    }
    if a.gt.is_some() {
        cfg.ground_truth = a.gt.clone();
    }
    if let Some(out) = &a.out {
        cfg.output = OutputPaths {
            json: Some(out.clone()),
            csv: Some(out.with_extension("csv")),
        };
    }
    for algo in &cfg.algorithms {
        let known = ["brute", "simhash", "simplelsh"].contains(&algo.name.as_str());
        if !known {
            algo.name.parse::<ceos_core::indexes::Algorithm>()?;
        }
    }
    print_config("bench", &cfg)?;

    let report = run_benchmark(&cfg)?;
    println!(
        "{:<10} {:>8} {:>12} {:>9} {:>12}",
        "algorithm", "P@k", "latency_ms", "speedup", "index_bytes"
    );
    for r in &report.algorithms {
        println!(
            "{:<10} {:>8.4} {:>12.4} {:>9.2} {:>12}",
            r.params.name, r.precision, r.timing.mean_latency_ms, r.timing.speedup, r.index_bytes
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct ResolvedGroundtruth<'a> {
    data: &'a Path,
    queries: &'a Path,
    format: VectorFormat,
    k: usize,
    out: &'a Path,
    normalize_queries: bool,
}

pub fn groundtruth(a: GroundtruthArgs) -> Result<()> {
    print_config(
        "groundtruth",
        &ResolvedGroundtruth {
            data: &a.data,
            queries: &a.queries,
            format: a.format,
            k: a.k,
            out: &a.out,
            normalize_queries: a.normalize_queries,
        },
    )?;
    let data = load_vectors(&a.data, a.format)?;
    let mut queries = load_vectors(&a.queries, a.format)?;
    if a.normalize_queries {
        queries = queries.normalized();
    }
    let truth = compute_groundtruth(&data, &queries, a.k)?;
    ceos_core::harness::write_ivecs(&a.out, &truth)?;
    println!(
        "wrote top-{} of {} queries to {}",
        a.k,
        truth.len(),
        a.out.display()
    );
    Ok(())
}

pub fn synth(a: SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        n: a.n,
        d: a.d,
        clusters: a.clusters,
        queries: a.nq,
        gap: a.gap,
        norms: a
            .norm_sigma
            .map_or(NormProfile::Uniform, NormProfile::LogNormal),
        seed: a.seed,
        ..SynthConfig::default()
    };
    print_config("synth", &cfg)?;
    let ds = generate(&cfg)?;
    std::fs::create_dir_all(&a.out)?;
    write_set(&a.out.join("data.f32"), &ds.data)?;
    write_set(&a.out.join("queries.f32"), &ds.queries)?;
    println!(
        "wrote {} points and {} queries (d={}) to {}",
        ds.data.len(),
        ds.queries.len(),
        a.d,
        a.out.display()
    );
    if !ds.queries.is_empty() {
        let top1: Vec<PointId> = compute_groundtruth(&ds.data, &ds.queries, 1)?
            .into_iter()
            .map(|r| r[0])
            .collect();
        let mut alpha = min_separations(&ds.data, &ds.queries, &top1);
        alpha.sort_by(f64::total_cmp);
        let at = |p: f64| alpha[((alpha.len() - 1) as f64 * p).round() as usize];
        println!(
            "min separation alpha of the top-1 over queries: min {:.4}, p10 {:.4}, median {:.4}, max {:.4}",
            at(0.0),
            at(0.1),
            at(0.5),
            at(1.0)
        );
    }
    Ok(())
}

fn write_set(path: &Path, set: &VectorSet) -> Result<()> {
    ceos_core::harness::write_vectors(path, set, VectorFormat::RawF32)
}
