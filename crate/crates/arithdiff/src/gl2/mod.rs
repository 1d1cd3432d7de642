//! The enveloping algebra of `gl_2`, its level-m integral forms, the
//! coordinate Hopf algebras of the congruence subgroups and the pairing
//! between the two.

pub mod center;
pub mod cnj;
pub mod hopf;
pub mod kostant;
pub mod level;
pub mod pbw;
pub mod regular;

pub use center::{central_character, CentralCharacter};
pub use level::{check_subalgebra_closure, from_level_m_basis, to_level_m_basis};
pub use pbw::{pbw_multiply, Basis, Gen, Idx, PBWElement};
pub use regular::{duality_pairing, regular_action, Poly4};
