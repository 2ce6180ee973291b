use crate::vectors::dot;
use crate::{par, PointId, VectorSet};

/// `|retrieved ∩ truth| / |truth|`. An empty truth set scores 1.
pub fn precision_at_b(retrieved: &[PointId], truth: &[PointId]) -> f64 {
    if truth.is_empty() {
        return 1.0;
    }
    let hits = truth.iter().filter(|t| retrieved.contains(t)).count();
    hits as f64 / truth.len() as f64
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Separation of a query's best point `x` from a competitor `y`:
/// `(<x,q> - <y,q>) / (sqrt(|x|^2 - <x,q>^2) + sqrt(|y|^2 - <y,q>^2))`,
/// with `q` scaled to unit norm. Large values mean few extreme dims suffice
/// to rank `x` above `y`.
pub fn separation(x: &[f32], y: &[f32], q: &[f32]) -> f64 {
    let qn = dot(q, q).sqrt();
    let (xq, yq) = (dot(x, q) / qn, dot(y, q) / qn);
    let spread = |v: &[f32], vq: f64| (dot(v, v) - vq * vq).max(0.0).sqrt();
    let denom = spread(x, xq) + spread(y, yq);
    if denom > 0.0 {
        (xq - yq) / denom
    } else if xq > yq {
        f64::INFINITY
    } else {
        0.0
    }
}

/// For every query, the smallest [`separation`] between its true top-1
/// point and any other point. Queries without ground truth get NaN.
pub fn min_separations(data: &VectorSet, queries: &VectorSet, top1: &[PointId]) -> Vec<f64> {
    par::map_range(queries.len(), |i| {
        let Some(&best) = top1.get(i) else {
            return f64::NAN;
        };
        let (q, x) = (queries.point(i), data.point(best as usize));
        (0..data.len())
            .filter(|&j| j != best as usize)
            .map(|j| separation(x, data.point(j), q))
            .fold(f64::INFINITY, f64::min)
    })
}
