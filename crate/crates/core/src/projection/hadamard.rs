use crate::{CeosError, Result};

/// In-place orthonormal Walsh-Hadamard transform.
///
/// The butterfly is the unnormalized Sylvester-ordered transform followed by
/// a `1/sqrt(len)` scale, so the transform is an isometry and its own inverse.
pub fn fwht(v: &mut [f64]) -> Result<()> {
    let n = v.len();
    if !n.is_power_of_two() {
        return Err(CeosError::param(format!(
            "Hadamard transform needs a power-of-two length, got {n}"
        )));
    }
    let mut h = 1;
    while h < n {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / (n as f64).sqrt();
    v.iter_mut().for_each(|x| *x *= scale);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_column() {
        let mut v = vec![1.0, 0.0, 0.0, 0.0];
        fwht(&mut v).unwrap();
        assert_eq!(v, vec![0.5; 4]);
    }

    #[test]
    fn zeros_stay_zero() {
        let mut v = vec![0.0; 16];
        fwht(&mut v).unwrap();
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(fwht(&mut [1.0, 2.0, 3.0]).is_err());
        assert!(fwht(&mut []).is_err());
        let mut one = [3.0];
        fwht(&mut one).unwrap();
        assert_eq!(one, [3.0]);
    }

    // Dense Sylvester matrix, built independently of the butterfly.
    fn hadamard_entry(i: usize, j: usize) -> f64 {
        if (i & j).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn matches_dense_matrix() {
        let v: Vec<f64> = (0..8).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut fast = v.clone();
        fwht(&mut fast).unwrap();
        for (i, f) in fast.iter().enumerate() {
            let dense: f64 = (0..8).map(|j| hadamard_entry(i, j) * v[j]).sum::<f64>() / 8f64.sqrt();
            assert!((f - dense).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn involution_and_norm(v in prop::collection::vec(-10.0f64..10.0, 8)) {
            let mut w = v.clone();
            fwht(&mut w).unwrap();
            let n0: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let n1: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((n0 - n1).abs() <= 1e-12 * n0.max(1.0));
            fwht(&mut w).unwrap();
            for (a, b) in v.iter().zip(&w) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
