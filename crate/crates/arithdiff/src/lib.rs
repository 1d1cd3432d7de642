//! Exact verification toolkit for level-m divided-power enveloping algebras
//! of `gl_2`, arithmetic differential operators on the projective line over
//! `Z_p` and on its iterated blow-ups.

pub mod arith;
pub mod error;
pub mod gl2;
pub mod models;
pub mod poly;
pub mod theorems;
pub mod weyl;

pub use arith::{LevelParams, PadicRational, Prime, Val};
pub use error::{OperatorError, ParamError};
pub use poly::Poly;
pub use weyl::{Chart, DiffOperator, GradedSymbol};
