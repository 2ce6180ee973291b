use crate::projection::{ExtremeDims, ProjectedMatrix};
use crate::topk::{top_k_of, Scored};
use crate::{CeosError, Result};

/// Sum of the concomitants of the extreme dims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeosEstimate {
    /// `sum_{i in I} x'_i - sum_{j in J} x'_j`.
    pub raw: f64,
    /// `raw / (s * sqrt(2 ln D))`, an approximately unbiased inner product.
    pub normalized: f64,
}

/// `s * sqrt(2 ln D)`: the factor turning a raw sum of `s` concomitants into
/// an inner-product value.
pub fn normalization(dims: usize, s: usize) -> f64 {
    s as f64 * (2.0 * (dims as f64).ln()).sqrt()
}

/// Raw estimate with values fetched through `value(dim)`. `max_sorted` and
/// `min_sorted` come from [`ExtremeDims::canonical`].
#[inline]
pub(crate) fn raw_from_lookup(
    max_sorted: &[usize],
    min_sorted: &[usize],
    value: impl Fn(usize) -> f32,
) -> f64 {
    let mut acc = 0.0f64;
    for &i in max_sorted {
        acc += value(i) as f64;
    }
    for &j in min_sorted {
        acc -= value(j) as f64;
    }
    acc
}

pub fn ceos_estimate(
    matrix: &ProjectedMatrix,
    id: usize,
    dims: &ExtremeDims,
) -> Result<CeosEstimate> {
    if id >= matrix.points() {
        return Err(CeosError::param(format!(
            "point id {id} out of range (n={})",
            matrix.points()
        )));
    }
    check_dims(dims, matrix.dims())?;
    let (i, j) = dims.canonical();
    let raw = raw_from_lookup(&i, &j, |d| matrix.get(d, id as u32));
    Ok(CeosEstimate {
        raw,
        normalized: raw / normalization(matrix.dims(), dims.s()),
    })
}

/// Estimate from the signature of a single point, without a matrix.
pub fn estimate_from_signature(signature: &[f32], dims: &ExtremeDims) -> Result<CeosEstimate> {
    check_dims(dims, signature.len())?;
    let (i, j) = dims.canonical();
    let raw = raw_from_lookup(&i, &j, |d| signature[d]);
    Ok(CeosEstimate {
        raw,
        normalized: raw / normalization(signature.len(), dims.s()),
    })
}

fn check_dims(dims: &ExtremeDims, d: usize) -> Result<()> {
    if dims
        .max_dims()
        .iter()
        .chain(dims.min_dims())
        .any(|&x| x >= d)
    {
        return Err(CeosError::param(format!("extreme dims exceed D={d}")));
    }
    Ok(())
}

/// Raw estimates of every point, `s` row passes over the matrix.
pub fn sceos_est_scores(matrix: &ProjectedMatrix, dims: &ExtremeDims) -> Result<Vec<f64>> {
    check_dims(dims, matrix.dims())?;
    let (max_sorted, min_sorted) = dims.canonical();
    let mut acc = vec![0.0f64; matrix.points()];
    for &i in &max_sorted {
        for (a, &v) in acc.iter_mut().zip(matrix.row(i)) {
            *a += v as f64;
        }
    }
    for &j in &min_sorted {
        for (a, &v) in acc.iter_mut().zip(matrix.row(j)) {
            *a -= v as f64;
        }
    }
    Ok(acc)
}

/// The `b` points with the largest raw estimates, best first. `b` larger
/// than `n` is clamped to `n`.
pub fn sceos_est_topb(
    matrix: &ProjectedMatrix,
    dims: &ExtremeDims,
    b: usize,
) -> Result<Vec<Scored>> {
    let scores = sceos_est_scores(matrix, dims)?;
    Ok(top_k_of(&scores, b.min(matrix.points())))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::projection::RotationSpec;

    fn hand_matrix(rows: &[&[f32]]) -> ProjectedMatrix {
        let dims = rows.len();
        let n = rows[0].len();
        let rot = Arc::new(RotationSpec::from_matrix(1, dims, vec![1.0; dims]).unwrap());
        ProjectedMatrix::from_rows(rot, n, rows.concat()).unwrap()
    }

    #[test]
    fn raw_is_max_minus_min() {
        let m = hand_matrix(&[&[1.0], &[-2.0], &[3.0]]);
        let dims = ExtremeDims::new(vec![2], vec![1], 3).unwrap();
        let est = ceos_estimate(&m, 0, &dims).unwrap();
        assert_eq!(est.raw, 5.0);
        assert_eq!(est.normalized, 5.0 / (2.0 * (2.0 * 3f64.ln()).sqrt()));
        assert!(ceos_estimate(&m, 1, &dims).is_err());
    }

    #[test]
    fn est_topb_hand_ranking() {
        // column raws: row2 - row1 = (5, 1, -2)
        let m = hand_matrix(&[
            &[0.0, 0.0, 0.0],
            &[-2.0, 0.0, 1.0],
            &[3.0, 1.0, -1.0],
            &[0.0, 0.0, 0.0],
        ]);
        let dims = ExtremeDims::new(vec![2], vec![1], 4).unwrap();
        let top = sceos_est_topb(&m, &dims, 3).unwrap();
        let ids: Vec<u32> = top.iter().map(|s| s.id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
        assert_eq!(top[0].score, 5.0);
        // clamped
        assert_eq!(sceos_est_topb(&m, &dims, 10).unwrap().len(), 3);
    }

    #[test]
    fn single_point() {
        let m = hand_matrix(&[&[1.0], &[2.0]]);
        let dims = ExtremeDims::new(vec![1], vec![0], 2).unwrap();
        let top = sceos_est_topb(&m, &dims, 1).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].id, 0);
    }
}
