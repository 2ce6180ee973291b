#![allow(dead_code)]

use std::sync::Arc;

use ceos_core::projection::{make_rotation, project_all, RotationKind};
use ceos_core::{ProjectedMatrix, VectorSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(&mut *rng)).collect()
}

pub fn unit_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let v = gaussian_vec(rng, d);
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

pub fn to_f32(v: &[f64]) -> Vec<f32> {
    v.iter().map(|&x| x as f32).collect()
}

pub fn dot64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unit `q` and a vector `x` with `|x| = norm` and `<x, q> = ip` exactly
/// (up to f64 rounding).
pub fn planted_pair(rng: &mut ChaCha8Rng, d: usize, ip: f64, norm: f64) -> (Vec<f64>, Vec<f64>) {
    let q = unit_vec(rng, d);
    let x = with_inner_product(rng, &q, ip, norm);
    (x, q)
}

/// Vector of norm `norm` whose inner product with unit `q` is `ip`.
pub fn with_inner_product(rng: &mut ChaCha8Rng, q: &[f64], ip: f64, norm: f64) -> Vec<f64> {
    let mut u = gaussian_vec(rng, q.len());
    let c = dot64(&u, q);
    for (ui, qi) in u.iter_mut().zip(q) {
        *ui -= c * qi;
    }
    let un = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let perp = (norm * norm - ip * ip).max(0.0).sqrt();
    q.iter()
        .zip(&u)
        .map(|(qi, ui)| ip * qi + perp * ui / un)
        .collect()
}

/// Gaussian-entry data set.
pub fn random_set(rng: &mut ChaCha8Rng, n: usize, d: usize) -> VectorSet {
    let flat: Vec<f32> = (0..n * d)
        .map(|_| StandardNormal.sample(&mut *rng))
        .map(|x: f64| x as f32)
        .collect();
    VectorSet::from_flat(d, flat).unwrap()
}

/// Data set whose coordinates come from a small integer grid, so exact
/// inner-product ties are common.
pub fn tied_set(rng: &mut ChaCha8Rng, n: usize, d: usize) -> VectorSet {
    let flat: Vec<f32> = (0..n * d)
        .map(|_| rng.random_range(-2i32..=2) as f32)
        .collect();
    VectorSet::from_flat(d, flat).unwrap()
}

pub fn projected(data: &VectorSet, kind: RotationKind, seed: u64, dims: usize) -> ProjectedMatrix {
    let rot = make_rotation(kind, seed, data.dim(), dims).unwrap();
    project_all(Arc::new(rot), data).unwrap()
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, v)
}

/// Straightforward O(n d) top-k written independently of the library:
/// full sort by (inner product desc, id asc).
pub fn naive_topk(data: &VectorSet, q: &[f32], k: usize) -> Vec<(u32, f64)> {
    let mut all: Vec<(u32, f64)> = (0..data.len())
        .map(|i| {
            let p = data.point(i);
            let mut s = 0.0f64;
            for j in 0..p.len() {
                s += p[j] as f64 * q[j] as f64;
            }
            (i as u32, s)
        })
        .collect();
    all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}
