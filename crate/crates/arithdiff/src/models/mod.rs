//! The blow-up models of the projective line: charts, ideal sheaves, and the
//! lattices of global sections of powers of the tangent sheaf.

pub mod charts;
pub mod ideal;
pub mod lattice;
pub mod sections;

pub use charts::{chart_tree, enumerate_charts, to_chart, ChartAddress, ChartKind, ChartTransform};
pub use ideal::{ideal_membership, membership_witness, IdealSpec};
pub use lattice::ZpLattice;
pub use sections::{
    extension_test, global_section_lattice, rewrite_d_certificate, sandwich_check, SectionLattice,
};
