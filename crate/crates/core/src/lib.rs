//! Threshold degrees, Koszul homology and syzygy-based matrix
//! representations of hypersurfaces parameterized by `n + 1` forms of equal
//! degree in `n` variables, computed with exact arithmetic.

pub mod appendix;
pub mod cli;
pub mod downgrade;
pub mod error;
pub mod field;
pub mod implicit;
pub mod koszul;
pub mod linalg;
pub mod modular;
pub mod parse;
pub mod poly;
pub mod system;
pub mod syzygy;

pub use error::{Error, Result};
pub use field::{Field, FieldDescriptor, Fp, Rational};
