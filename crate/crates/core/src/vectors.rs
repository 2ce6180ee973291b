use crate::{CeosError, Result};

/// Point identifier: the position of a vector in its [`VectorSet`].
pub type PointId = u32;

/// Dense set of `n` vectors of dimension `d`, stored point after point
/// (the columns of the `d x n` data matrix are contiguous).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VectorSet {
    dim: usize,
    data: Vec<f32>,
}

impl VectorSet {
    pub fn with_dim(dim: usize) -> Self {
        VectorSet {
            dim,
            data: Vec::new(),
        }
    }

    /// Builds a set from `n * dim` values laid out point after point.
    pub fn from_flat(dim: usize, data: Vec<f32>) -> Result<Self> {
        if dim == 0 && !data.is_empty() {
            return Err(CeosError::param(
                "vectors of dimension 0 cannot hold values",
            ));
        }
        if dim > 0 && data.len() % dim != 0 {
            return Err(CeosError::param(format!(
                "{} values is not a multiple of dimension {dim}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(CeosError::format(format!(
                "non-finite value in record {}",
                pos / dim.max(1)
            )));
        }
        if dim > 0 && data.len() / dim > PointId::MAX as usize {
            return Err(CeosError::param("too many points for 32-bit ids"));
        }
        Ok(VectorSet { dim, data })
    }

    pub fn from_rows<R: AsRef<[f32]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(dim * rows.len());
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(CeosError::param(format!(
                    "row {i} has dimension {}, expected {dim}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_flat(dim, data)
    }

    pub fn push(&mut self, v: &[f32]) -> Result<()> {
        if v.len() != self.dim {
            return Err(CeosError::param(format!(
                "vector has dimension {}, expected {}",
                v.len(),
                self.dim
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CeosError::format("non-finite value"));
        }
        self.data.extend_from_slice(v);
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn point(&self, id: usize) -> &[f32] {
        &self.data[id * self.dim..(id + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f32]> + '_ {
        // chunks_exact panics on 0, and a 0-dim set is always empty.
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[f32] {
        &self.data
    }

    pub fn max_norm(&self) -> f64 {
        self.iter().map(norm).fold(0.0, f64::max)
    }

    /// Copy with every non-zero vector scaled to unit 2-norm.
    pub fn normalized(&self) -> VectorSet {
        let mut out = self.clone();
        for chunk in out.data.chunks_exact_mut(self.dim.max(1)) {
            let n = norm(chunk);
            if n > 0.0 {
                chunk.iter_mut().for_each(|x| *x = (*x as f64 / n) as f32);
            }
        }
        out
    }

    pub fn subset(&self, ids: &[usize]) -> VectorSet {
        let mut data = Vec::with_capacity(ids.len() * self.dim);
        for &i in ids {
            data.extend_from_slice(self.point(i));
        }
        VectorSet {
            dim: self.dim,
            data,
        }
    }
}

/// Inner product accumulated in f64 in coordinate order. All exact
/// inner products in the crate go through this function so they agree bit
/// for bit.
#[inline]
pub fn dot(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        acc += *x as f64 * *y as f64;
    }
    acc
}

#[inline]
pub fn norm(a: &[f32]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_f64(a: &[f64]) -> f64 {
    dot_f64(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_layout() {
        let s = VectorSet::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.point(1), &[3.0, 4.0]);
        assert_eq!(dot(s.point(0), s.point(2)), 17.0);
    }

    #[test]
    fn rejects_ragged_and_nan() {
        assert!(VectorSet::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(VectorSet::from_flat(2, vec![1.0, f32::NAN]).is_err());
        assert!(VectorSet::from_flat(2, vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn empty_set() {
        let s = VectorSet::from_flat(0, vec![]).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.iter().count(), 0);
    }
}
