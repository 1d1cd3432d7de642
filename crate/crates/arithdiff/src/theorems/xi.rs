//! The map from `U(gl_2)` to differential operators on the projective line:
//! `e -> d_x`, `h1 -> -x d_x`, `h2 -> x d_x`, `f -> d_y = -x^2 d_x`.

use serde::Serialize;

use crate::arith::{q_int, LevelParams, Q};
use crate::gl2::level::convert;
use crate::gl2::pbw::{indices_up_to, Basis, Gen, Idx, PBWElement};
use crate::weyl::{compose, is_global_section_level_m, Chart, DiffOperator};

/// Image of a generator on the x-chart.
pub fn xi_gen(g: Gen) -> DiffOperator {
    match g {
        Gen::E => DiffOperator::d(Chart::X),
        Gen::H1 => DiffOperator::monomial(Chart::X, q_int(-1), 1, 1),
        Gen::H2 => DiffOperator::monomial(Chart::X, q_int(1), 1, 1),
        Gen::F => DiffOperator::monomial(Chart::X, q_int(-1), 2, 1),
    }
}

fn powers(op: &DiffOperator, k: u32) -> Vec<DiffOperator> {
    let mut out = vec![DiffOperator::identity(Chart::X)];
    for i in 0..k as usize {
        out.push(compose(&out[i], op).expect("x-chart"));
    }
    out
}

/// `xi(A)` on the x-chart, for `A` in any basis.
pub fn xi(a: &PBWElement) -> DiffOperator {
    let plain = convert(a, Basis::Plain);
    let top = plain.terms().flat_map(|(nu, _)| nu.iter().copied()).max().unwrap_or(0);
    let pw: Vec<Vec<DiffOperator>> = Gen::ALL.iter().map(|g| powers(&xi_gen(*g), top)).collect();
    let mut out = DiffOperator::zero(Chart::X);
    for (nu, c) in plain.terms() {
        let mut t = DiffOperator::identity(Chart::X);
        for g in Gen::ALL {
            let k = nu[g.index()];
            if k > 0 {
                t = compose(&t, &pw[g.index()][k as usize]).expect("x-chart");
            }
        }
        out = out.add(&t.scale(c)).expect("x-chart");
    }
    out
}

/// `xi` of the level-m basis element (level-(m,n) when `params.n > 0`).
pub fn xi_basis(nu: &Idx, params: &LevelParams) -> DiffOperator {
    let basis = if params.n > 0 { Basis::LevelMN(*params) } else { Basis::LevelM(*params) };
    xi(&PBWElement::basis_element(basis, *nu))
}

#[derive(Clone, Debug, Serialize)]
pub struct XiIntegrityReport {
    pub degree_bound: u32,
    pub checked: usize,
    pub failures: Vec<Idx>,
}

impl XiIntegrityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every level-m basis element of degree at most `d` maps to a global
/// level-m operator.
pub fn xi_level_m_integrality(d: u32, params: &LevelParams) -> XiIntegrityReport {
    let level = LevelParams { n: 0, ..*params };
    let idx = indices_up_to(d);
    let failures = idx
        .iter()
        .filter(|nu| !is_global_section_level_m(&xi_basis(nu, &level), &level))
        .copied()
        .collect();
    XiIntegrityReport { degree_bound: d, checked: idx.len(), failures }
}

/// `xi(A)` is an order-0 operator with constant coefficient; returns that constant.
pub fn as_scalar(op: &DiffOperator) -> Option<Q> {
    match op.order() {
        None => Some(Q::from_integer(0.into())),
        Some(0) => {
            let c = op.coeff(0);
            (c.degree().unwrap_or(0) == 0).then(|| c.coeff(0))
        }
        Some(_) => None,
    }
}
