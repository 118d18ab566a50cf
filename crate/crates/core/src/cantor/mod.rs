//! The Cantor set as the mixed-radix integers of an eventually periodic
//! radix sequence: cylinders, clopen sets, eventually periodic points and
//! the odometer-invariant measure.

mod base;
mod clopen;
mod point;

pub use base::{BaseSequence, DEFAULT_DEPTH_LIMIT};
pub use clopen::{ClopenSet, Cylinder, SetOp};
pub use point::Point;
