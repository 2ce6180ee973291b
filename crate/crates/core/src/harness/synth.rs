use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::rng::stream_rng;
use crate::vectors::dot;
use crate::{par, CeosError, Result, VectorSet};

/// Norm distribution of background points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormProfile {
    /// Uniform in `[0.5, 1]`.
    Uniform,
    /// Log-normal with median 1 and the given sigma of `ln |x|`. Long norm
    /// tails are typical of matrix-factorization item vectors.
    LogNormal(f64),
}

/// Gaussian-cluster corpus with optionally planted answers.
///
/// Background points are drawn around `clusters` random unit centers with
/// norms following `norms`. Queries are unit vectors leaning towards a random
/// center. With `gap = Some(g)`, every query gets `planted` extra points
/// whose inner product with it is at least `g` above that of every other
/// point, so its true top-`planted` is separated by that gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Total number of data points, planted ones included.
    pub n: usize,
    pub d: usize,
    pub clusters: usize,
    pub queries: usize,
    pub gap: Option<f64>,
    pub planted: usize,
    /// Relative spread of points around their center.
    pub spread: f64,
    pub norms: NormProfile,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n: 10_000,
            d: 64,
            clusters: 16,
            queries: 100,
            gap: None,
            planted: 10,
            spread: 1.0,
            norms: NormProfile::Uniform,
            seed: 1,
        }
    }
}

fn gaussian_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn to_f32(v: &[f64]) -> Vec<f32> {
    v.iter().map(|&x| x as f32).collect()
}

pub fn generate(cfg: &SynthConfig) -> Result<Dataset> {
    if cfg.d < 2 || cfg.clusters == 0 {
        return Err(CeosError::param(
            "synthetic data needs d >= 2 and clusters >= 1",
        ));
    }
    let planted_total = if cfg.gap.is_some() {
        cfg.queries * cfg.planted
    } else {
        0
    };
    if cfg.n < planted_total {
        return Err(CeosError::param(format!(
            "n={} cannot hold {planted_total} planted points",
            cfg.n
        )));
    }
    if let NormProfile::LogNormal(sigma) = cfg.norms {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(CeosError::param(
                "log-normal norm sigma must be finite and >= 0",
            ));
        }
    }
    if cfg.gap.is_some_and(|g| !(g > 0.0 && g.is_finite())) {
        return Err(CeosError::param("gap must be positive"));
    }
    let d = cfg.d;
    let mut rng = stream_rng(cfg.seed, "synth");
    let centers: Vec<Vec<f64>> = (0..cfg.clusters)
        .map(|_| gaussian_unit(&mut rng, d))
        .collect();

    let background = cfg.n - planted_total;
    let noise = cfg.spread / (d as f64).sqrt();
    let mut points: Vec<Vec<f32>> = Vec::with_capacity(cfg.n);
    for _ in 0..background {
        let c = &centers[rng.random_range(0..cfg.clusters)];
        let mut v: Vec<f64> = c
            .iter()
            .map(|&x| x + noise * Distribution::<f64>::sample(&StandardNormal, &mut rng))
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        let target = match cfg.norms {
            NormProfile::Uniform => rng.random_range(0.5..=1.0),
            NormProfile::LogNormal(sigma) => {
                (sigma * Distribution::<f64>::sample(&StandardNormal, &mut rng)).exp()
            }
        };
        v.iter_mut().for_each(|x| *x *= target / norm);
        points.push(to_f32(&v));
    }

    let mut queries = VectorSet::with_dim(d);
    let query_vecs: Vec<Vec<f64>> = (0..cfg.queries)
        .map(|_| {
            let c = &centers[rng.random_range(0..cfg.clusters)];
            let g = gaussian_unit(&mut rng, d);
            let v: Vec<f64> = c.iter().zip(&g).map(|(a, b)| 0.3 * a + b).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
        .collect();
    for q in &query_vecs {
        queries.push(&to_f32(q))?;
    }

    if let Some(gap) = cfg.gap {
        points.extend(plant(cfg, gap, &points, &query_vecs, &queries, &mut rng)?);
    }
    points.shuffle(&mut rng);
    Dataset::new(VectorSet::from_rows(&points)?, queries)
}

/// Planted points for every query. A query's baseline is the best inner
/// product it has with any point not planted for it, background or planted
/// for another query. Raising one query's points can lift another's
/// baseline, so baselines are iterated to a fixed point.
fn plant(
    cfg: &SynthConfig,
    gap: f64,
    background: &[Vec<f32>],
    query_vecs: &[Vec<f64>],
    queries: &VectorSet,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f32>>> {
    let d = cfg.d;
    // Unit directions orthogonal to each query, drawn once.
    let dirs: Vec<Vec<Vec<f64>>> = query_vecs
        .iter()
        .map(|q| {
            (0..cfg.planted)
                .map(|_| {
                    let mut u = gaussian_unit(rng, d);
                    let proj: f64 = u.iter().zip(q).map(|(a, b)| a * b).sum();
                    u.iter_mut().zip(q).for_each(|(a, b)| *a -= proj * b);
                    let un = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
                    u.into_iter().map(|x| x / un).collect()
                })
                .collect()
        })
        .collect();
    let make = |base: &[f64]| -> Vec<Vec<Vec<f32>>> {
        query_vecs
            .iter()
            .zip(base)
            .zip(&dirs)
            .map(|((q, &m), us)| {
                us.iter()
                    .enumerate()
                    .map(|(j, u)| {
                        // The 1e-6 absorbs f32 rounding of the stored point.
                        let tau = m + gap * (1.0 + 0.05 * j as f64) + 1e-6;
                        let w = (1.0 - tau * tau).max(0.0).sqrt();
                        to_f32(
                            &q.iter()
                                .zip(u)
                                .map(|(a, b)| tau * a + w * b)
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect()
            })
            .collect()
    };

    let bg = VectorSet::from_rows(background)?;
    let bg_best = par::map_range(cfg.queries, |i| {
        let m = bg
            .iter()
            .map(|x| dot(x, queries.point(i)))
            .fold(f64::NEG_INFINITY, f64::max);
        if m.is_finite() {
            m
        } else {
            0.0
        }
    });
    let mut base = bg_best.clone();
    for _ in 0..100 {
        let planted = make(&base);
        let next = par::map_range(cfg.queries, |i| {
            let q = queries.point(i);
            planted
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, pts)| pts.iter().map(|x| dot(x, q)))
                .fold(bg_best[i], f64::max)
        });
        if next.iter().zip(&base).all(|(a, b)| a <= b) {
            return Ok(planted.into_iter().flatten().collect());
        }
        base = next.iter().zip(&base).map(|(a, b)| a.max(*b)).collect();
    }
    Err(CeosError::param(format!(
        "cannot plant a gap of {gap}: the queries are too similar to separate"
    )))
}
