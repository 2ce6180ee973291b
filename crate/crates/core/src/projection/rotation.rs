use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::hadamard::fwht;
use crate::{CeosError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationKind {
    /// Dense `D x d` matrix with i.i.d. standard normal entries.
    Gaussian,
    /// `x -> H D3 H D2 H D1 x` over the zero-padded input.
    Spinner,
}

impl RotationKind {
    pub fn tag(self) -> u8 {
        match self {
            RotationKind::Gaussian => 0,
            RotationKind::Spinner => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(RotationKind::Gaussian),
            1 => Ok(RotationKind::Spinner),
            t => Err(CeosError::format(format!("unknown rotation kind tag {t}"))),
        }
    }
}

impl std::str::FromStr for RotationKind {
    type Err = CeosError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(RotationKind::Gaussian),
            "spinner" => Ok(RotationKind::Spinner),
            other => Err(CeosError::param(format!("unknown rotation kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Transform {
    /// Row-major, `out_dim` rows of `in_dim` entries.
    Gaussian(Vec<f64>),
    Spinner([Vec<i8>; 3]),
}

/// A seeded random rotation from `R^d` to `R^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationSpec {
    seed: u64,
    in_dim: usize,
    out_dim: usize,
    transform: Transform,
}

/// Builds a rotation. Spinner rotations round `D` up to the next power of two
/// that is at least `max(d, requested_dim)`; Gaussian ones use
/// `requested_dim` as is.
pub fn make_rotation(
    kind: RotationKind,
    seed: u64,
    d: usize,
    requested_dim: usize,
) -> Result<RotationSpec> {
    if d == 0 || requested_dim == 0 {
        return Err(CeosError::param(format!(
            "rotation dimensions must be positive (d={d}, D={requested_dim})"
        )));
    }
    match kind {
        RotationKind::Gaussian => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let matrix = (0..requested_dim * d)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            Ok(RotationSpec {
                seed,
                in_dim: d,
                out_dim: requested_dim,
                transform: Transform::Gaussian(matrix),
            })
        }
        RotationKind::Spinner => {
            let out_dim = d.max(requested_dim).next_power_of_two();
            let signs = [0u64, 1, 2].map(|round| sign_diagonal(seed, round, out_dim));
            Ok(RotationSpec {
                seed,
                in_dim: d,
                out_dim,
                transform: Transform::Spinner(signs),
            })
        }
    }
}

// One ChaCha stream per round: the keystream is counter based, so entry i of
// round r depends only on (seed, r, i).
fn sign_diagonal(seed: u64, round: u64, len: usize) -> Vec<i8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round + 1);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let word = rng.next_u64();
        for bit in 0..64 {
            if out.len() == len {
                break;
            }
            out.push(if (word >> bit) & 1 == 1 { 1 } else { -1 });
        }
    }
    out
}

impl RotationSpec {
    /// Gaussian rotation with an explicit row-major `out_dim x in_dim` matrix.
    pub fn from_matrix(in_dim: usize, out_dim: usize, matrix: Vec<f64>) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 || matrix.len() != in_dim * out_dim {
            return Err(CeosError::param(format!(
                "matrix of {} entries does not match {out_dim}x{in_dim}",
                matrix.len()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(CeosError::param("rotation matrix has non-finite entries"));
        }
        Ok(RotationSpec {
            seed: 0,
            in_dim,
            out_dim,
            transform: Transform::Gaussian(matrix),
        })
    }

    /// Spinner rotation with explicit sign diagonals (each of length `out_dim`).
    pub fn from_signs(seed: u64, in_dim: usize, signs: [Vec<i8>; 3]) -> Result<Self> {
        let out_dim = signs[0].len();
        if !out_dim.is_power_of_two() || out_dim < in_dim || in_dim == 0 {
            return Err(CeosError::param(
                "spinner dimension must be a power of two >= d",
            ));
        }
        if signs
            .iter()
            .any(|s| s.len() != out_dim || s.iter().any(|&v| v != 1 && v != -1))
        {
            return Err(CeosError::param("sign diagonals must hold only +1/-1"));
        }
        Ok(RotationSpec {
            seed,
            in_dim,
            out_dim,
            transform: Transform::Spinner(signs),
        })
    }

    pub(crate) fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kind(&self) -> RotationKind {
        match self.transform {
            Transform::Gaussian(_) => RotationKind::Gaussian,
            Transform::Spinner(_) => RotationKind::Spinner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Source dimension `d`.
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    /// Target dimension `D`.
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn matrix(&self) -> Option<&[f64]> {
        match &self.transform {
            Transform::Gaussian(m) => Some(m),
            Transform::Spinner(_) => None,
        }
    }

    pub fn signs(&self) -> Option<&[Vec<i8>; 3]> {
        match &self.transform {
            Transform::Gaussian(_) => None,
            Transform::Spinner(s) => Some(s),
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.in_dim {
            return Err(CeosError::param(format!(
                "vector has dimension {len}, rotation expects {}",
                self.in_dim
            )));
        }
        Ok(())
    }

    /// Signature of `x`: the unscaled image `Rx` (length `D`).
    pub fn apply(&self, x: &[f32]) -> Result<Vec<f32>> {
        self.check_len(x.len())?;
        let mut scratch = Vec::new();
        let mut out = vec![0.0f32; self.out_dim];
        self.apply_into(x, &mut scratch, &mut out);
        Ok(out)
    }

    /// Full-precision variant of [`apply`](Self::apply).
    pub fn apply_f64(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let mut buf = vec![0.0f64; self.out_dim];
        self.transform_f64(x.iter().copied(), &mut buf);
        Ok(buf)
    }

    /// Allocation-free core of [`apply`](Self::apply); `x` must have length `d`
    /// and `out` length `D`.
    pub(crate) fn apply_into(&self, x: &[f32], scratch: &mut Vec<f64>, out: &mut [f32]) {
        scratch.clear();
        scratch.resize(self.out_dim, 0.0);
        self.transform_f64(x.iter().map(|&v| v as f64), scratch);
        for (o, v) in out.iter_mut().zip(scratch.iter()) {
            *o = *v as f32;
        }
    }

    fn transform_f64(&self, x: impl ExactSizeIterator<Item = f64> + Clone, buf: &mut [f64]) {
        match &self.transform {
            Transform::Gaussian(m) => {
                for (row, o) in m.chunks_exact(self.in_dim).zip(buf.iter_mut()) {
                    let mut acc = 0.0;
                    for (r, v) in row.iter().zip(x.clone()) {
                        acc += r * v;
                    }
                    *o = acc;
                }
            }
            Transform::Spinner(signs) => {
                buf.iter_mut().for_each(|b| *b = 0.0);
                for (b, v) in buf.iter_mut().zip(x) {
                    *b = v;
                }
                for diag in signs {
                    for (b, &s) in buf.iter_mut().zip(diag) {
                        if s < 0 {
                            *b = -*b;
                        }
                    }
                    fwht(buf).expect("spinner dimension is a power of two");
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spinner_rounds_up() {
        let r = make_rotation(RotationKind::Spinner, 7, 500, 1024).unwrap();
        assert_eq!(r.out_dim(), 1024);
        let r = make_rotation(RotationKind::Spinner, 7, 1000, 1000).unwrap();
        assert_eq!(r.out_dim(), 1024);
        let r = make_rotation(RotationKind::Spinner, 7, 100, 16).unwrap();
        assert_eq!(r.out_dim(), 128);
    }

    #[test]
    fn gaussian_is_deterministic() {
        let a = make_rotation(RotationKind::Gaussian, 1, 4, 6).unwrap();
        let b = make_rotation(RotationKind::Gaussian, 1, 4, 6).unwrap();
        assert_eq!(a.out_dim(), 6);
        assert_eq!(a.matrix().unwrap().len(), 24);
        assert_eq!(a, b);
        let c = make_rotation(RotationKind::Gaussian, 2, 4, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn signs_are_pm_one_and_deterministic() {
        let a = make_rotation(RotationKind::Spinner, 3, 10, 64).unwrap();
        let b = make_rotation(RotationKind::Spinner, 3, 10, 64).unwrap();
        assert_eq!(a, b);
        let s = a.signs().unwrap();
        assert!(s.iter().all(|d| d.iter().all(|&v| v == 1 || v == -1)));
        assert_ne!(s[0], s[1]);
        assert!(s[0].iter().any(|&v| v == 1) && s[0].iter().any(|&v| v == -1));
    }

    #[test]
    fn rejects_zero_dims() {
        assert!(make_rotation(RotationKind::Spinner, 1, 0, 8).is_err());
        assert!(make_rotation(RotationKind::Gaussian, 1, 4, 0).is_err());
    }

    #[test]
    fn injected_matrix() {
        let r = RotationSpec::from_matrix(2, 3, vec![1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.apply(&[2.0, 3.0]).unwrap(), vec![2.0, 3.0, 5.0]);
        assert!(r.apply(&[1.0]).is_err());
    }

    #[test]
    fn zero_maps_to_zero() {
        for kind in [RotationKind::Gaussian, RotationKind::Spinner] {
            let r = make_rotation(kind, 11, 5, 8).unwrap();
            assert!(r.apply(&[0.0; 5]).unwrap().iter().all(|&v| v == 0.0));
        }
    }
}
