//! The realization map `xi` and the degree-by-degree checks of the two main
//! comparison statements.

pub mod xi;
pub mod generation;
pub mod theorem1;
pub mod theorem2;
