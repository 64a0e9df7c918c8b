//! Exact computations for sum-product combinatorics: set statistics, energies,
//! the hard counting constructions, an inequality registry and extremal search.

pub mod counting;
pub mod error;
pub mod exactset;
pub mod explore;
pub mod oracle;
pub mod quantity;
pub mod stats;
pub mod verify;

mod factor;
mod lane;

pub use error::{Error, Result};
pub use exactset::{FiniteSet, PointSet, Scalar};
pub use quantity::Quantity;
pub use stats::{Multiset, Op};
