mod common;

use std::sync::Arc;

use ceos_core::projection::{extreme_dims, fwht, make_rotation, project_all, RotationKind};
use common::*;
use rand::Rng;

#[test]
fn spinner_preserves_norms() {
    let mut r = rng(1);
    for i in 0..1000u64 {
        let d = r.random_range(1..300);
        let x = gaussian_vec(&mut r, d);
        let rot = make_rotation(RotationKind::Spinner, i, d, d).unwrap();
        let y = rot.apply_f64(&x).unwrap();
        let (nx, ny) = (dot64(&x, &x).sqrt(), dot64(&y, &y).sqrt());
        assert!((nx - ny).abs() <= 1e-6 * nx, "d={d}: {nx} vs {ny}");
        let y32 = rot.apply(&to_f32(&x)).unwrap();
        let n32 = y32.iter().map(|&v| v as f64 * v as f64).sum::<f64>().sqrt();
        assert!((nx - n32).abs() <= 1e-6 * nx);
    }
}

#[test]
fn spinner_preserves_inner_products_d100() {
    let mut r = rng(2);
    let rot = make_rotation(RotationKind::Spinner, 5, 100, 128).unwrap();
    assert_eq!(rot.out_dim(), 128);
    for _ in 0..200 {
        let x = to_f32(&gaussian_vec(&mut r, 100));
        let y = to_f32(&gaussian_vec(&mut r, 100));
        let (rx, ry) = (rot.apply(&x).unwrap(), rot.apply(&y).unwrap());
        let got = ceos_core::vectors::dot(&rx, &ry);
        let want = ceos_core::vectors::dot(&x, &y);
        let scale = ceos_core::vectors::norm(&x) * ceos_core::vectors::norm(&y);
        assert!((got - want).abs() <= 1e-6 * scale, "{got} vs {want}");
    }
}

#[test]
fn fwht_norm_on_random_length_8() {
    let mut r = rng(3);
    let mut v = gaussian_vec(&mut r, 8);
    let before = dot64(&v, &v).sqrt();
    fwht(&mut v).unwrap();
    assert!((dot64(&v, &v).sqrt() - before).abs() <= 1e-12);
}

#[test]
fn gaussian_marginals() {
    // Entries of Rx are N(0, |x|^2): per-seed sample means stay within
    // 3 |x| / sqrt(D) and the pooled variance matches |x|^2.
    let mut r = rng(4);
    let (d, dims) = (20, 256);
    let x = gaussian_vec(&mut r, d);
    let nx2 = dot64(&x, &x);
    let bound = 3.0 * nx2.sqrt() / (dims as f64).sqrt();
    let (mut outside, mut pooled) = (0, Vec::new());
    let seeds = 200;
    for seed in 0..seeds {
        let rot = make_rotation(RotationKind::Gaussian, seed, d, dims).unwrap();
        let y = rot.apply_f64(&x).unwrap();
        let m = y.iter().sum::<f64>() / dims as f64;
        if m.abs() > bound {
            outside += 1;
        }
        pooled.extend(y);
    }
    // 3-sigma exceedance has probability 0.27%; allow 2% of seeds.
    assert!(outside * 50 <= seeds, "{outside} of {seeds} seeds outside");
    let (m, v) = mean_var(&pooled);
    assert!(m.abs() < 0.01 * nx2.sqrt());
    assert!((v / nx2 - 1.0).abs() < 0.02, "variance ratio {}", v / nx2);
}

#[test]
fn distortion_within_jl_bound() {
    // Fraction of rotations with |(Rx)^T(Rq)/l - x^T q| >= eps x^T q stays
    // below 2 exp(-l eps^2 cos^2 / 8) plus 3-sigma slack.
    let mut r = rng(5);
    let (d, l, eps, trials) = (32usize, 64usize, 0.5f64, 500u64);
    let (x, q) = planted_pair(&mut r, d, 0.8, 1.0);
    let ip = dot64(&x, &q);
    let cos = ip;
    let bound = 2.0 * (-(l as f64) * eps * eps * cos * cos / 8.0).exp();
    let mut bad = 0usize;
    for seed in 0..trials {
        let rot = make_rotation(RotationKind::Gaussian, 1000 + seed, d, l).unwrap();
        let est = dot64(&rot.apply_f64(&x).unwrap(), &rot.apply_f64(&q).unwrap()) / l as f64;
        if (est - ip).abs() >= eps * ip {
            bad += 1;
        }
    }
    let t = trials as f64;
    let slack = 3.0 * (bound.min(1.0) * (1.0 - bound.min(1.0)) / t).sqrt();
    let freq = bad as f64 / t;
    assert!(freq <= bound + slack, "freq {freq} bound {bound}");
}

#[test]
fn projection_is_deterministic_and_columnwise() {
    let mut r = rng(6);
    let data = random_set(&mut r, 300, 37);
    for kind in [RotationKind::Gaussian, RotationKind::Spinner] {
        let a = projected(&data, kind, 99, 64);
        let b = projected(&data, kind, 99, 64);
        assert_eq!(a, b);
        let rot = make_rotation(kind, 99, 37, 64).unwrap();
        for id in 0..data.len() {
            assert_eq!(a.column(id), rot.apply(data.point(id)).unwrap());
        }
        let c = project_all(Arc::new(make_rotation(kind, 100, 37, 64).unwrap()), &data).unwrap();
        assert_ne!(a, c);
    }
}

#[test]
fn extreme_dims_match_argsort() {
    let mut r = rng(7);
    for _ in 0..200 {
        let q = to_f32(&gaussian_vec(&mut r, 64));
        let s0 = r.random_range(1..=16);
        let e = extreme_dims(&q, s0).unwrap();
        let mut order: Vec<usize> = (0..64).collect();
        order.sort_by(|&a, &b| q[b].total_cmp(&q[a]).then(a.cmp(&b)));
        let mut want_max = order[..s0].to_vec();
        let mut want_min: Vec<usize> = order[64 - s0..].to_vec();
        want_max.sort_unstable();
        want_min.sort_unstable();
        let (got_max, got_min) = e.canonical();
        assert_eq!(got_max, want_max);
        assert_eq!(got_min, want_min);
    }
}
