//! Maximum inner product search with concomitants of extreme order statistics.
//!
//! A query is rotated by a random Gaussian projection (or its Hadamard-based
//! simulation) and only the few dimensions holding the extreme values of the
//! query signature are used to rank data points. The crate provides:
//!
//! * [`projection`]: Gaussian and structured-spinner rotations, the fast
//!   Walsh-Hadamard transform and extreme-dimension selection.
//! * [`estimators`]: the concomitant estimator, SimHash/SimpleLSH baselines
//!   and the exact brute-force scan.
//! * [`indexes`]: 1CEOs, full sCEOs, sCEOs-TA and coCEOs indexes with
//!   exact reranking and a versioned binary serialization.
//! * [`harness`]: dataset I/O, ground truth, metrics, a synthetic generator
//!   and the benchmark driver.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to plain iterators otherwise.

pub mod error;
pub mod estimators;
pub mod harness;
pub mod indexes;
pub mod par;
pub mod projection;
pub mod result;
pub mod rng;
pub mod topk;
pub mod vectors;

pub use error::{CeosError, Result};
pub use projection::{ExtremeDims, ProjectedMatrix, RotationKind, RotationSpec};
pub use result::{QueryResult, Timings};
pub use vectors::{PointId, VectorSet};
