//! Changes of basis between the plain PBW basis and the level-m integral
//! forms, and the closure check for the level-m lattice.

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::kostant;
use super::pbw::{indices_up_to, total_degree, Basis, Idx, PBWElement};
use crate::arith::{
    factorial, q_big, q_factorial, stirling_first, stirling_second, vp_int, LevelParams, Val, Q,
};

/// `prod_i q_{nu_i}!` as a rational.
fn q_prod(nu: &Idx, params: &LevelParams) -> Q {
    nu.iter()
        .map(|&k| q_big(q_factorial(k as u64, params)))
        .fold(Q::one(), |a, b| a * b)
}

/// Factor turning a Kostant coordinate into a coordinate of `basis`.
fn kostant_to_basis_factor(nu: &Idx, basis: Basis) -> Q {
    match basis {
        Basis::Plain => unreachable!("plain is not a rescaling of the Kostant basis"),
        Basis::LevelM(params) => Q::one() / q_prod(nu, &params),
        Basis::LevelMN(params) => {
            Q::one() / (q_prod(nu, &params) * params.p.qpow((params.n * total_degree(nu)) as i64))
        }
    }
}

/// Plain coordinates to Kostant coordinates.
fn plain_to_kostant(a: &PBWElement) -> PBWElement {
    let mut out = PBWElement::zero(Basis::Plain);
    for (nu, c) in a.terms() {
        let [i, ha, hb, j] = *nu;
        let ef = q_big(factorial(i as u64) * factorial(j as u64));
        for al in 0..=ha {
            let sa = stirling_second(ha as u64, al as u64) * factorial(al as u64);
            if sa == 0u32.into() {
                continue;
            }
            for be in 0..=hb {
                let sb = stirling_second(hb as u64, be as u64) * factorial(be as u64);
                out.add_term([i, al, be, j], c * &ef * q_big(&sa * sb));
            }
        }
    }
    out
}

/// Kostant coordinates to plain coordinates.
pub(crate) fn kostant_to_plain(a: &PBWElement) -> PBWElement {
    let mut out = PBWElement::zero(Basis::Plain);
    for (nu, c) in a.terms() {
        let [i, al, be, j] = *nu;
        let denom = q_big(
            factorial(i as u64) * factorial(j as u64) * factorial(al as u64) * factorial(be as u64),
        );
        let base = c / denom;
        for r in 0..=al {
            let s1 = stirling_first(al as u64, r as u64);
            if s1 == 0u32.into() {
                continue;
            }
            for t in 0..=be {
                let s2 = stirling_first(be as u64, t as u64);
                out.add_term([i, r, t, j], &base * q_big(&s1 * s2));
            }
        }
    }
    out
}

fn to_kostant(a: &PBWElement) -> PBWElement {
    match a.basis {
        Basis::Plain => plain_to_kostant(a),
        b => {
            let mut out = PBWElement::zero(Basis::Plain);
            for (nu, c) in a.terms() {
                out.add_term(*nu, c / kostant_to_basis_factor(nu, b));
            }
            out
        }
    }
}

fn from_kostant(k: &PBWElement, target: Basis) -> PBWElement {
    match target {
        Basis::Plain => kostant_to_plain(k),
        b => {
            let mut out = PBWElement::zero(b);
            for (nu, c) in k.terms() {
                out.add_term(*nu, c * kostant_to_basis_factor(nu, b));
            }
            out
        }
    }
}

/// Re-expresses `a` in `target`. Exact and invertible.
pub fn convert(a: &PBWElement, target: Basis) -> PBWElement {
    if a.basis == target {
        return a.clone();
    }
    from_kostant(&to_kostant(a), target)
}

pub fn to_level_m_basis(a: &PBWElement, params: &LevelParams) -> PBWElement {
    convert(a, Basis::LevelM(*params))
}

pub fn from_level_m_basis(a: &PBWElement) -> PBWElement {
    convert(a, Basis::Plain)
}

/// Product of elements given in any basis, returned in the basis of `a`.
pub fn multiply_in_basis(a: &PBWElement, b: &PBWElement) -> PBWElement {
    let prod = super::pbw::pbw_multiply(&convert(a, Basis::Plain), &convert(b, Basis::Plain));
    convert(&prod, a.basis)
}

/// Product of two Kostant basis elements as a rational element in Kostant coordinates.
pub fn kostant_product(nu: &Idx, mu: &Idx) -> PBWElement {
    let mut out = PBWElement::zero(Basis::Plain);
    for (lam, w) in kostant::multiply_basis(nu, mu) {
        out.add_term(lam, Q::from_integer(w.into()));
    }
    out
}

/// A coefficient of a product that fell outside the lattice.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureCounterexample {
    pub left: Idx,
    pub right: Idx,
    pub target: Idx,
    pub valuation: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub degree_bound: u32,
    pub pairs_checked: u64,
    pub min_valuation: Val,
    pub counterexample: Option<ClosureCounterexample>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Multiplies every pair of level-m basis elements of degree at most `d`
/// (level-(m,n) when `params.n > 0`) and certifies all coordinates of the
/// product are p-integral.
pub fn check_subalgebra_closure(d: u32, params: &LevelParams) -> ClosureReport {
    assert!(d >= 1, "degree bound must be at least 1");
    let p = params.p;
    let vq: Vec<i64> = (0..=2 * d as u64)
        .map(|k| vp_int(&q_factorial(k, params), p).finite().unwrap_or(0))
        .collect();
    let vidx = |nu: &Idx| -> i64 {
        nu.iter().map(|&k| vq[k as usize]).sum::<i64>() + (params.n * total_degree(nu)) as i64
    };
    let idx = indices_up_to(d);
    let per_left: Vec<(u64, Option<i64>, Option<ClosureCounterexample>)> = idx
        .par_iter()
        .map(|nu| {
            let mut min: Option<i64> = None;
            let mut bad = None;
            let mut pairs = 0;
            for mu in &idx {
                pairs += 1;
                let base = vidx(nu) + vidx(mu);
                for (lam, w) in kostant::multiply_basis(nu, mu) {
                    let v = base - vidx(&lam)
                        + vp_int(&w.into(), p).finite().expect("nonzero constant");
                    if min.map_or(true, |m| v < m) {
                        min = Some(v);
                    }
                    if v < 0 && bad.is_none() {
                        bad = Some(ClosureCounterexample {
                            left: *nu,
                            right: *mu,
                            target: lam,
                            valuation: v,
                        });
                    }
                }
            }
            (pairs, min, bad)
        })
        .collect();
    let mut report = ClosureReport {
        degree_bound: d,
        pairs_checked: 0,
        min_valuation: Val::Infinite,
        counterexample: None,
    };
    for (pairs, min, bad) in per_left {
        report.pairs_checked += pairs;
        if let Some(m) = min {
            report.min_valuation = report.min_valuation.min(Val::Finite(m));
        }
        if report.counterexample.is_none() {
            report.counterexample = bad;
        }
    }
    report
}

/// Checks closure the slow way, through the plain basis, for a small degree.
/// Used to cross-validate [`check_subalgebra_closure`].
pub fn closure_min_valuation_plain(d: u32, params: &LevelParams) -> Val {
    let basis = if params.n > 0 { Basis::LevelMN(*params) } else { Basis::LevelM(*params) };
    let idx = indices_up_to(d);
    let mut min = Val::Infinite;
    for nu in &idx {
        for mu in &idx {
            let prod = multiply_in_basis(
                &PBWElement::basis_element(basis, *nu),
                &PBWElement::basis_element(basis, *mu),
            );
            min = min.min(prod.min_valuation(params.p));
        }
    }
    min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_int;
    use crate::gl2::pbw::{pbw_multiply, words};

    #[test]
    fn level_m_degree_one() {
        for (p, m) in [(2, 0), (3, 1), (5, 2)] {
            let params = LevelParams::new(p, m, 0).unwrap();
            let e = PBWElement::monomial([1, 0, 0, 0], q_int(1));
            let got = to_level_m_basis(&e, &params);
            assert_eq!(got.coeff(&[1, 0, 0, 0]), q_int(1));
            assert_eq!(got.len(), 1);
        }
    }

    #[test]
    fn h_squared_via_binomials() {
        // h1^2 = 2 (h1 choose 2) + h1; with p^m > 2 the level basis is the Kostant basis
        let params = LevelParams::new(3, 1, 0).unwrap();
        let h = PBWElement::monomial([0, 2, 0, 0], q_int(1));
        let got = to_level_m_basis(&h, &params);
        assert_eq!(got.coeff(&[0, 2, 0, 0]), q_int(2));
        assert_eq!(got.coeff(&[0, 1, 0, 0]), q_int(1));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn round_trip() {
        let params = LevelParams::new(2, 1, 1).unwrap();
        let mut a = PBWElement::monomial([2, 3, 1, 4], q_int(7));
        a.add_term([0, 5, 0, 1], crate::arith::q_frac(-2, 9));
        for b in [Basis::LevelM(params), Basis::LevelMN(params)] {
            assert_eq!(convert(&convert(&a, b), Basis::Plain), a);
        }
    }

    #[test]
    fn kostant_agrees_with_plain_and_words() {
        let idx = indices_up_to(3);
        for nu in &idx {
            for mu in idx.iter().step_by(2) {
                let kost = kostant_product(nu, mu);
                let plain = pbw_multiply(
                    &kostant_to_plain(&PBWElement::monomial(*nu, Q::one())),
                    &kostant_to_plain(&PBWElement::monomial(*mu, Q::one())),
                );
                assert_eq!(kostant_to_plain(&kost), plain, "{nu:?} * {mu:?}");
            }
        }
        let a = kostant_to_plain(&PBWElement::monomial([2, 1, 1, 2], Q::one()));
        let b = kostant_to_plain(&PBWElement::monomial([1, 2, 0, 2], Q::one()));
        assert_eq!(
            kostant_to_plain(&kostant_product(&[2, 1, 1, 2], &[1, 2, 0, 2])),
            words::multiply(&a, &b)
        );
    }

    #[test]
    fn closure_small_cases() {
        for (p, m, n, d) in [(2, 0, 0, 2), (3, 1, 0, 4), (5, 2, 0, 1), (2, 1, 1, 3)] {
            let params = LevelParams::new(p, m, n).unwrap();
            let r = check_subalgebra_closure(d, &params);
            assert!(r.passed(), "{p} {m} {n} {d}: {:?}", r.counterexample);
            assert!(r.min_valuation >= Val::Finite(0));
        }
    }

    #[test]
    fn closure_fast_matches_slow() {
        for (p, m, n) in [(2, 1, 0), (3, 1, 1), (2, 2, 0)] {
            let params = LevelParams::new(p, m, n).unwrap();
            assert_eq!(
                check_subalgebra_closure(2, &params).min_valuation,
                closure_min_valuation_plain(2, &params)
            );
        }
    }
}
