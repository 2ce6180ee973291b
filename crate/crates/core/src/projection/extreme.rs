use std::cmp::Ordering;

use crate::{CeosError, Result};

/// Dimensions holding the `s0` largest (`max_dims`, descending by value) and
/// the `s0` smallest (`min_dims`, ascending by value) entries of a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtremeDims {
    max_dims: Vec<usize>,
    min_dims: Vec<usize>,
}

impl ExtremeDims {
    /// Explicit dims, checked for equal size, disjointness and range.
    pub fn new(max_dims: Vec<usize>, min_dims: Vec<usize>, dims: usize) -> Result<Self> {
        if max_dims.is_empty() || max_dims.len() != min_dims.len() {
            return Err(CeosError::param(format!(
                "need s0 >= 1 max and min dims of equal count, got {} and {}",
                max_dims.len(),
                min_dims.len()
            )));
        }
        let mut seen = vec![false; dims];
        for &d in max_dims.iter().chain(&min_dims) {
            if d >= dims || seen[d] {
                return Err(CeosError::param(format!(
                    "dimension {d} is out of range or repeated (D={dims})"
                )));
            }
            seen[d] = true;
        }
        Ok(ExtremeDims { max_dims, min_dims })
    }

    pub fn max_dims(&self) -> &[usize] {
        &self.max_dims
    }

    pub fn min_dims(&self) -> &[usize] {
        &self.min_dims
    }

    pub fn s0(&self) -> usize {
        self.max_dims.len()
    }

    /// Total number of concomitants used, `s = 2 s0`.
    pub fn s(&self) -> usize {
        2 * self.max_dims.len()
    }

    /// Both dim sets sorted by index. Every estimate sums the max dims and
    /// then subtracts the min dims in this order, so all code paths produce
    /// the same floating-point value for the same point.
    pub fn canonical(&self) -> (Vec<usize>, Vec<usize>) {
        let mut i = self.max_dims.clone();
        let mut j = self.min_dims.clone();
        i.sort_unstable();
        j.sort_unstable();
        (i, j)
    }
}

/// Selects the extreme dimensions of `signature`. Ties go to the lower
/// dimension index; the min dims are chosen among dims not already in the
/// max set.
pub fn extreme_dims(signature: &[f32], s0: usize) -> Result<ExtremeDims> {
    let dims = signature.len();
    if s0 == 0 || 2 * s0 > dims {
        return Err(CeosError::param(format!(
            "s0={s0} needs 1 <= 2*s0 <= D={dims}"
        )));
    }
    let desc = |a: &usize, b: &usize| -> Ordering {
        signature[*b].total_cmp(&signature[*a]).then(a.cmp(b))
    };
    let asc = |a: &usize, b: &usize| -> Ordering {
        signature[*a].total_cmp(&signature[*b]).then(a.cmp(b))
    };

    let mut idx: Vec<usize> = (0..dims).collect();
    if s0 < dims {
        idx.select_nth_unstable_by(s0 - 1, desc);
    }
    let (head, rest) = idx.split_at_mut(s0);
    head.sort_unstable_by(desc);
    if s0 < rest.len() {
        rest.select_nth_unstable_by(s0 - 1, asc);
    }
    rest[..s0].sort_unstable_by(asc);

    Ok(ExtremeDims {
        max_dims: head.to_vec(),
        min_dims: rest[..s0].to_vec(),
    })
}
