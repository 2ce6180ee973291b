//! Random rotations and the extreme dimensions of a query signature.

mod extreme;
mod hadamard;
mod matrix;
mod rotation;

pub use extreme::{extreme_dims, ExtremeDims};
pub use hadamard::fwht;
pub use matrix::{project_all, ProjectedMatrix};
pub use rotation::{make_rotation, RotationKind, RotationSpec};
