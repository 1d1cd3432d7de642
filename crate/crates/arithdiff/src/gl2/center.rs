//! Two central elements of `U(gl_2)` and their images under `xi`.

use serde::Serialize;

use super::pbw::{commutator, Gen, PBWElement};
use crate::arith::{q_frac, q_int, vp, LevelParams, Q};
use crate::theorems::xi::{as_scalar, xi};

/// `h1 + h2`.
pub fn trace_element() -> PBWElement {
    PBWElement::gen(Gen::H1).add(&PBWElement::gen(Gen::H2))
}

/// `ef + fe + (h1 - h2)^2 / 2`, written in the plain basis.
pub fn casimir() -> PBWElement {
    // fe = ef - h1 + h2
    let mut c = PBWElement::monomial([1, 0, 0, 1], q_int(2));
    c.add_term([0, 1, 0, 0], q_int(-1));
    c.add_term([0, 0, 1, 0], q_int(1));
    c.add_term([0, 2, 0, 0], q_frac(1, 2));
    c.add_term([0, 1, 1, 0], q_int(-1));
    c.add_term([0, 0, 2, 0], q_frac(1, 2));
    c
}

pub fn is_central(z: &PBWElement) -> bool {
    Gen::ALL.iter().all(|g| commutator(z, &PBWElement::gen(*g)).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralCharacter {
    #[serde(with = "crate::arith::q_as_string")]
    pub trace: Q,
    #[serde(with = "crate::arith::q_as_string")]
    pub casimir: Q,
}

/// The scalars by which `h1 + h2` and the Casimir act through `xi`.
/// Panics if either element fails to be central or maps to a non-scalar.
pub fn central_character(params: &LevelParams) -> CentralCharacter {
    let mut values = Vec::new();
    for z in [trace_element(), casimir()] {
        assert!(is_central(&z), "{z} is not central");
        let v = as_scalar(&xi(&z)).unwrap_or_else(|| panic!("xi({z}) is not a scalar"));
        assert!(vp(&v, params.p).is_nonneg());
        values.push(v);
    }
    let casimir = values.pop().expect("two values");
    let trace = values.pop().expect("two values");
    CentralCharacter { trace, casimir }
}
