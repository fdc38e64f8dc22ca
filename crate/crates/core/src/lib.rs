//! Exact computer algebra for L-infinity algebras, cdgas and rational models
//! of mapping spaces.

#![allow(clippy::needless_range_loop)]

pub mod cdga;
pub mod ce;
pub mod error;
pub mod graded;
pub mod homalg;
pub mod linalg;
pub mod linfty;
pub mod nerve;
pub mod pipeline;
pub mod poly;
pub mod scalar;
pub mod sign;

pub use error::{Error, Result, Violation};
pub use graded::{Element, GradedSpace};
pub use scalar::Scalar;
