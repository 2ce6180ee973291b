use crate::vectors::norm;
use crate::{CeosError, Result, VectorSet};

/// Maps every point to `(x / M, sqrt(1 - |x|^2 / M^2))` where `M` is the
/// largest norm in the set. Returns the augmented set and `M`.
pub fn simplelsh_transform(data: &VectorSet) -> Result<(VectorSet, f64)> {
    let m = data.max_norm();
    let scale = if m > 0.0 { 1.0 / m } else { 0.0 };
    let mut out = VectorSet::with_dim(data.dim() + 1);
    let mut row = vec![0.0f32; data.dim() + 1];
    for x in data.iter() {
        let n = norm(x) * scale;
        for (o, v) in row.iter_mut().zip(x) {
            *o = (*v as f64 * scale) as f32;
        }
        row[data.dim()] = (1.0 - n * n).max(0.0).sqrt() as f32;
        out.push(&row)?;
    }
    Ok((out, m))
}

/// Maps a unit query to `(q, 0)`.
pub fn simplelsh_transform_query(q: &[f32]) -> Result<Vec<f32>> {
    if norm(q) == 0.0 {
        return Err(CeosError::param("SimpleLSH query has zero norm"));
    }
    let mut out = q.to_vec();
    out.push(0.0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmentation() {
        let data = VectorSet::from_rows(&[[3.0, 4.0], [0.0, 0.0], [0.6, 0.8]]).unwrap();
        let (t, m) = simplelsh_transform(&data).unwrap();
        assert_eq!(m, 5.0);
        assert_eq!(t.dim(), 3);
        assert_eq!(t.point(0)[2], 0.0);
        assert_eq!(t.point(1), &[0.0, 0.0, 1.0]);
        for p in t.iter() {
            assert!((norm(p) - 1.0).abs() < 1e-6);
        }
        assert!(simplelsh_transform_query(&[0.0, 0.0]).is_err());
        assert_eq!(
            simplelsh_transform_query(&[1.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 0.0]
        );
    }
}
