use std::sync::Arc;

use super::RotationSpec;
use crate::{par, CeosError, PointId, Result, VectorSet};

/// Signatures of every data point: the `D x n` matrix `X' = RX`.
///
/// Stored row by row (one contiguous row of `n` values per projected
/// dimension), which is the access pattern of every index build and of the
/// concomitant scans.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedMatrix {
    dims: usize,
    points: usize,
    values: Vec<f32>,
    rotation: Arc<RotationSpec>,
}

const BLOCK: usize = 4096;

/// Projects every point of `data`. Columns are computed independently (in
/// parallel when enabled), so the result is identical to calling
/// [`RotationSpec::apply`] on each point.
pub fn project_all(rotation: Arc<RotationSpec>, data: &VectorSet) -> Result<ProjectedMatrix> {
    if !data.is_empty() && data.dim() != rotation.in_dim() {
        return Err(CeosError::param(format!(
            "data has dimension {}, rotation expects {}",
            data.dim(),
            rotation.in_dim()
        )));
    }
    let dims = rotation.out_dim();
    let n = data.len();
    let mut values = vec![0.0f32; dims * n];
    let mut start = 0;
    while start < n {
        let len = BLOCK.min(n - start);
        // Columns of this block, point after point.
        let cols = par::map_range(len, |i| {
            let mut scratch = Vec::with_capacity(dims);
            let mut out = vec![0.0f32; dims];
            rotation.apply_into(data.point(start + i), &mut scratch, &mut out);
            out
        });
        if n > 0 {
            par::for_each_chunk_mut(&mut values, n, |row, dst| {
                for (i, col) in cols.iter().enumerate() {
                    dst[start + i] = col[row];
                }
            });
        }
        start += len;
    }
    Ok(ProjectedMatrix {
        dims,
        points: n,
        values,
        rotation,
    })
}

impl ProjectedMatrix {
    /// Builds a matrix from row-major values (`dims` rows of `points`).
    pub fn from_rows(rotation: Arc<RotationSpec>, points: usize, values: Vec<f32>) -> Result<Self> {
        let dims = rotation.out_dim();
        if values.len() != dims * points {
            return Err(CeosError::param(format!(
                "{} values do not form a {dims}x{points} matrix",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CeosError::param("projected values must be finite"));
        }
        Ok(ProjectedMatrix {
            dims,
            points,
            values,
            rotation,
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn rotation(&self) -> &Arc<RotationSpec> {
        &self.rotation
    }

    /// Values of projected dimension `dim` over all points.
    #[inline]
    pub fn row(&self, dim: usize) -> &[f32] {
        &self.values[dim * self.points..(dim + 1) * self.points]
    }

    #[inline]
    pub fn get(&self, dim: usize, id: PointId) -> f32 {
        self.values[dim * self.points + id as usize]
    }

    /// Signature of point `id`.
    pub fn column(&self, id: usize) -> Vec<f32> {
        (0..self.dims)
            .map(|r| self.values[r * self.points + id])
            .collect()
    }

    pub fn as_rows(&self) -> &[f32] {
        &self.values
    }
}
