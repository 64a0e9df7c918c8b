//! Exact scalars and the finite-set value type.

mod parse;
mod points;
mod scalar;
mod set;

pub use parse::{parse_set_text, read_set_file, ParsedSet};
pub use points::PointSet;
pub use scalar::{rational_normalize, Scalar};
pub use set::{affine_image, set_build, BuildReport, FiniteSet};
