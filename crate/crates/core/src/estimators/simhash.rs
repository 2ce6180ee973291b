use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::vectors::norm;
use crate::{CeosError, Result};

/// Sign bits of `l` random projections plus the 2-norm of the encoded vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryCode {
    bits: Vec<u64>,
    len: usize,
    norm: f64,
}

impl BinaryCode {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Number of equal bits.
    pub fn matches(&self, other: &BinaryCode) -> Result<usize> {
        if self.len != other.len {
            return Err(CeosError::param(format!(
                "code lengths differ: {} vs {}",
                self.len, other.len
            )));
        }
        let differ: u32 = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        Ok(self.len - differ as usize)
    }
}

/// `l` Gaussian hyperplanes in `R^d`, drawn from a seeded stream.
#[derive(Debug, Clone)]
pub struct SimHasher {
    dim: usize,
    bits: usize,
    planes: Vec<f64>,
}

impl SimHasher {
    pub fn new(dim: usize, bits: usize, seed: u64) -> Result<Self> {
        if bits == 0 {
            return Err(CeosError::param("SimHash needs at least one bit"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let planes = (0..dim * bits)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        Ok(SimHasher { dim, bits, planes })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn encode(&self, x: &[f32]) -> Result<BinaryCode> {
        if x.len() != self.dim {
            return Err(CeosError::param(format!(
                "vector has dimension {}, hasher expects {}",
                x.len(),
                self.dim
            )));
        }
        let mut bits = vec![0u64; self.bits.div_ceil(64)];
        for (i, plane) in self.planes.chunks_exact(self.dim.max(1)).enumerate() {
            let p: f64 = plane.iter().zip(x).map(|(r, v)| r * *v as f64).sum();
            if p >= 0.0 {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(BinaryCode {
            bits,
            len: self.bits,
            norm: norm(x),
        })
    }
}

pub fn simhash_encode(x: &[f32], bits: usize, seed: u64) -> Result<BinaryCode> {
    SimHasher::new(x.len(), bits, seed)?.encode(x)
}

/// Inverts the collision probability: `|x| |q| cos(pi (1 - matches / l))`.
pub fn simhash_estimate(code_x: &BinaryCode, code_q: &BinaryCode) -> Result<f64> {
    let m = code_x.matches(code_q)?;
    let theta = PI * (1.0 - m as f64 / code_x.len as f64);
    Ok(code_x.norm * code_q.norm * theta.cos())
}

/// First-order form `(matches / l - 1/2) pi |x| |q|`, linear in the match rate.
pub fn simhash_linearized_estimate(code_x: &BinaryCode, code_q: &BinaryCode) -> Result<f64> {
    let m = code_x.matches(code_q)?;
    Ok((m as f64 / code_x.len as f64 - 0.5) * PI * code_x.norm * code_q.norm)
}
