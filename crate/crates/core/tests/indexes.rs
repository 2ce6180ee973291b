mod common;

use std::collections::BTreeSet;

use ceos_core::estimators::{brute_force_topk, sceos_est_topb};
use ceos_core::harness::{compute_groundtruth, generate, mean, precision_at_b, SynthConfig};
use ceos_core::indexes::{
    build_1ceos, build_coceos, build_sceos_full, read_index, rerank, write_index, Algorithm,
    BuildParams, CeosIndex, QueryParams, SceosTaIndex,
};
use ceos_core::projection::{extreme_dims, make_rotation, project_all, ExtremeDims, RotationKind};
use ceos_core::{PointId, ProjectedMatrix, RotationSpec};
use common::*;
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

#[test]
fn ta_candidates_equal_full_scan() {
    let mut r = rng(21);
    let data = random_set(&mut r, 10_000, 32);
    let m = projected(&data, RotationKind::Spinner, 1, 128);
    let ta = SceosTaIndex::build(m.clone());
    for _ in 0..20 {
        let q = to_f32(&gaussian_vec(&mut r, 32));
        let e = extreme_dims(&m.rotation().apply(&q).unwrap(), 5).unwrap();
        let (got, stats) = ta.candidates(&e, 50).unwrap();
        assert_eq!(got, sceos_est_topb(&m, &e, 50).unwrap());
        assert!(stats.points_scored <= 10_000);
    }
}

#[test]
fn ta_exits_early_on_dominant_point() {
    // Point 0 holds the largest value of every max dim and the smallest of
    // every min dim; the others are small noise.
    let mut r = rng(22);
    let (dims, n, s0, b) = (16usize, 2000usize, 3usize, 1usize);
    let mut rows = vec![0f32; dims * n];
    for v in rows.iter_mut() {
        *v = r.random_range(-1.0f32..1.0);
    }
    for dim in 0..dims {
        rows[dim * n] = if dim < 8 { 100.0 } else { -100.0 };
    }
    let rot = Arc::new(RotationSpec::from_matrix(1, dims, vec![1.0; dims]).unwrap());
    let m = ProjectedMatrix::from_rows(rot, n, rows).unwrap();
    let ta = SceosTaIndex::build(m);
    let e = ExtremeDims::new(vec![0, 1, 2], vec![8, 9, 10], dims).unwrap();
    let (top, stats) = ta.candidates(&e, b).unwrap();
    assert_eq!(top[0].id, 0);
    assert!(stats.sorted_accesses <= 2 * s0 * b, "{stats:?}");
}

#[test]
fn coceos_degenerates_to_full_scan() {
    let mut r = rng(23);
    let data = random_set(&mut r, 3000, 24);
    let m = projected(&data, RotationKind::Gaussian, 2, 64);
    let n = data.len();
    let co = build_coceos(&m, n).unwrap();
    for _ in 0..10 {
        let q = to_f32(&gaussian_vec(&mut r, 24));
        let s0 = r.random_range(1..=6);
        let sp = 2 * s0;
        let got = co.query(&data, &q, sp, sp * n, 40, 10).unwrap();
        let e = extreme_dims(&m.rotation().apply(&q).unwrap(), s0).unwrap();
        let ids: Vec<PointId> = sceos_est_topb(&m, &e, 40)
            .unwrap()
            .iter()
            .map(|s| s.id)
            .collect();
        assert_eq!(got.entries, rerank(&ids, &data, &q, 10).entries);
        assert_eq!(got.effective_budget, Some(n));
    }
}

#[test]
fn coceos_lists_are_top_m() {
    let mut r = rng(24);
    let data = random_set(&mut r, 500, 8);
    let m = projected(&data, RotationKind::Spinner, 3, 16);
    let co = build_coceos(&m, 37).unwrap();
    for dim in 0..16 {
        let mut row: Vec<(f32, u32)> = m
            .row(dim)
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        row.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let top: Vec<u32> = row[..37].iter().map(|p| p.1).collect();
        assert_eq!(
            co.largest(dim).iter().map(|e| e.id).collect::<Vec<_>>(),
            top
        );
        row.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let bottom: Vec<u32> = row[..37].iter().map(|p| p.1).collect();
        assert_eq!(
            co.smallest(dim).iter().map(|e| e.id).collect::<Vec<_>>(),
            bottom
        );
    }
}

#[test]
fn one_ceos_head_is_row_argmax() {
    let mut r = rng(25);
    let data = random_set(&mut r, 800, 20);
    let m = projected(&data, RotationKind::Spinner, 4, 32);
    let idx = build_1ceos(&m, 25).unwrap();
    for dim in 0..32 {
        let row = m.row(dim);
        let best = (0..row.len())
            .max_by(|&a, &b| row[a].total_cmp(&row[b]).then(b.cmp(&a)))
            .unwrap();
        assert_eq!(idx.list(dim)[0] as usize, best);
    }
    // Query probes the argmax dim of the rotated query.
    let q = to_f32(&gaussian_vec(&mut r, 20));
    let sig = m.rotation().apply(&q).unwrap();
    let j = extreme_dims(&sig, 1).unwrap().max_dims()[0];
    let got = idx.query(&data, &q, 5).unwrap();
    assert_eq!(got.entries, rerank(idx.list(j), &data, &q, 5).entries);
}

#[test]
fn one_ceos_beats_random_subset() {
    let ds = generate(&SynthConfig {
        n: 10_000,
        d: 64,
        queries: 100,
        seed: 5,
        ..Default::default()
    })
    .unwrap();
    let truth = compute_groundtruth(&ds.data, &ds.queries, 10).unwrap();
    let m = projected(&ds.data, RotationKind::Spinner, 9, 64);
    let idx = build_1ceos(&m, 100).unwrap();
    let mut r = rng(26);
    let mut ids: Vec<PointId> = (0..10_000).collect();
    let (mut p1, mut pr) = (Vec::new(), Vec::new());
    for (qi, q) in ds.queries.iter().enumerate() {
        p1.push(precision_at_b(
            &idx.query(&ds.data, q, 10).unwrap().ids(),
            &truth[qi],
        ));
        ids.shuffle(&mut r);
        pr.push(precision_at_b(
            &rerank(&ids[..100], &ds.data, q, 10).ids(),
            &truth[qi],
        ));
    }
    println!("P@10 1CEOs {:.3}, random {:.3}", mean(&p1), mean(&pr));
    assert!(mean(&p1) >= mean(&pr));
}

#[test]
fn full_sceos_lists_small_d() {
    let mut r = rng(27);
    let data = random_set(&mut r, 400, 6);
    let m = projected(&data, RotationKind::Gaussian, 5, 6);
    let full = build_sceos_full(&m, 1, 30, 1_000_000).unwrap();
    assert_eq!(full.list_count(), 30);
    for i in 0..6 {
        for j in (0..6).filter(|&j| j != i) {
            let e = ExtremeDims::new(vec![i], vec![j], 6).unwrap();
            let list = full.list(&e).unwrap();
            let diff: Vec<f64> = (0..400)
                .map(|p| m.row(i)[p] as f64 - m.row(j)[p] as f64)
                .collect();
            let best = (0..400)
                .max_by(|&a, &b| diff[a].total_cmp(&diff[b]).then(b.cmp(&a)))
                .unwrap();
            assert_eq!(list[0] as usize, best);
        }
    }
    for _ in 0..10 {
        let q = to_f32(&gaussian_vec(&mut r, 6));
        let e = extreme_dims(&m.rotation().apply(&q).unwrap(), 1).unwrap();
        let ids: Vec<PointId> = sceos_est_topb(&m, &e, 30)
            .unwrap()
            .iter()
            .map(|s| s.id)
            .collect();
        assert_eq!(
            full.query(&data, &q, 5).unwrap().entries,
            rerank(&ids, &data, &q, 5).entries
        );
    }
}

#[test]
fn rerank_of_everything_is_brute_force() {
    let mut r = rng(28);
    let data = tied_set(&mut r, 300, 5);
    let q = vec![1.0, -1.0, 2.0, 0.0, 1.0];
    let all: Vec<PointId> = (0..300).collect();
    assert_eq!(
        rerank(&all, &data, &q, 20).entries,
        brute_force_topk(&data, &q, 20).unwrap().entries
    );
}

#[test]
fn recall_grows_with_s0() {
    // n=50k, d=128, D=256, 200 queries, three seeds.
    let mut by_s0 = [0.0f64; 2];
    for seed in 0..3u64 {
        let ds = generate(&SynthConfig {
            n: 50_000,
            d: 128,
            queries: 200,
            clusters: 32,
            seed: 100 + seed,
            ..Default::default()
        })
        .unwrap();
        let truth = compute_groundtruth(&ds.data, &ds.queries, 10).unwrap();
        let idx = CeosIndex::build(
            Algorithm::SceosEst,
            projected(&ds.data, RotationKind::Spinner, seed, 256),
            &BuildParams::default(),
        )
        .unwrap();
        for (slot, s0) in [1usize, 5].into_iter().enumerate() {
            let p = QueryParams {
                k: 10,
                b: 100,
                s0,
                ..Default::default()
            };
            let ps: Vec<f64> = ds
                .queries
                .iter()
                .enumerate()
                .map(|(i, q)| precision_at_b(&idx.query(&ds.data, q, &p).unwrap().ids(), &truth[i]))
                .collect();
            by_s0[slot] += mean(&ps) / 3.0;
        }
    }
    println!("P@10 s0=1 {:.4}, s0=5 {:.4}", by_s0[0], by_s0[1]);
    assert!(by_s0[1] >= by_s0[0]);
}

#[test]
fn candidate_sets_nest_in_b() {
    let mut r = rng(29);
    let data = random_set(&mut r, 4000, 16);
    let m = projected(&data, RotationKind::Spinner, 6, 32);
    let params = BuildParams {
        b: 200,
        s0: 2,
        m: 400,
        ..Default::default()
    };
    for algo in [Algorithm::SceosEst, Algorithm::SceosTa, Algorithm::CoCeos] {
        let idx = CeosIndex::build(algo, m.clone(), &params).unwrap();
        for _ in 0..5 {
            let q = to_f32(&gaussian_vec(&mut r, 16));
            let mut prev: BTreeSet<PointId> = BTreeSet::new();
            for b in [10, 50, 100, 200] {
                let p = QueryParams {
                    k: b,
                    b,
                    s0: 3,
                    s_prime: 6,
                    budget: 2400,
                };
                let ids: BTreeSet<PointId> = idx
                    .query(&data, &q, &p)
                    .unwrap()
                    .ids()
                    .into_iter()
                    .collect();
                assert!(prev.is_subset(&ids), "{algo} b={b}");
                prev = ids;
            }
        }
    }
}

fn bytes_of(idx: &CeosIndex) -> Vec<u8> {
    let mut out = Vec::new();
    write_index(idx, &mut out).unwrap();
    out
}

#[test]
fn queries_do_not_mutate_indexes() {
    let mut r = rng(30);
    let data = random_set(&mut r, 2000, 12);
    let m = projected(&data, RotationKind::Spinner, 7, 16);
    let params = BuildParams {
        b: 50,
        s0: 1,
        m: 50,
        ..Default::default()
    };
    let qp = QueryParams {
        k: 10,
        b: 50,
        s0: 2,
        s_prime: 4,
        budget: 200,
    };
    for algo in Algorithm::ALL {
        let idx = CeosIndex::build(algo, m.clone(), &params).unwrap();
        let before = bytes_of(&idx);
        for _ in 0..1000 {
            let q = to_f32(&gaussian_vec(&mut r, 12));
            idx.query(&data, &q, &qp).unwrap();
        }
        assert_eq!(bytes_of(&idx), before, "{algo}");
    }
}

#[test]
fn reloaded_indexes_answer_identically() {
    let mut r = rng(31);
    let data = random_set(&mut r, 1500, 10);
    for kind in [RotationKind::Gaussian, RotationKind::Spinner] {
        let rot = make_rotation(kind, 8, 10, 16).unwrap();
        let m = project_all(Arc::new(rot), &data).unwrap();
        let params = BuildParams {
            b: 40,
            s0: 1,
            m: 60,
            ..Default::default()
        };
        let qp = QueryParams {
            k: 5,
            b: 40,
            s0: 2,
            s_prime: 4,
            budget: 200,
        };
        for algo in Algorithm::ALL {
            let idx = CeosIndex::build(algo, m.clone(), &params).unwrap();
            let bytes = bytes_of(&idx);
            let back = read_index(&mut bytes.as_slice()).unwrap();
            assert_eq!(back, idx);
            for _ in 0..20 {
                let q = to_f32(&gaussian_vec(&mut r, 10));
                assert!(idx
                    .query(&data, &q, &qp)
                    .unwrap()
                    .same_answer(&back.query(&data, &q, &qp).unwrap()));
            }
        }
    }
}
