use std::collections::BTreeMap;

use arithdiff::arith::{factorial, q_factorial, vp, vp_factorial, vp_int, Prime, Val, Q};
use arithdiff::gl2::pbw::{indices_up_to, Idx};
use arithdiff::gl2::{from_level_m_basis, pbw_multiply, to_level_m_basis, Basis, PBWElement};
use arithdiff::models::lattice::hermite_normal_form;
use arithdiff::models::sections::{coeff_vector, global_section_lattice, symbol_in_ideal_sheaf};
use arithdiff::models::{extension_test, IdealSpec};
use arithdiff::poly::taylor_shift;
use arithdiff::theorems::xi::xi;
use arithdiff::weyl::{chart_swap_laurent, compose};
use arithdiff::{Chart, DiffOperator, GradedSymbol, LevelParams, Poly};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_map(|p| Prime::new(p).unwrap())
}

fn nonzero_q() -> impl Strategy<Value = Q> {
    (-5000i64..5000, 1i64..5000)
        .prop_filter("nonzero", |(a, _)| *a != 0)
        .prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..10, 1i64..4).prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_q(), 0..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn operator(order: u32, deg: usize) -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec(poly(deg), 1..=order as usize + 1).prop_map(|fs| {
        let mut op = DiffOperator::zero(Chart::X);
        for (k, f) in fs.into_iter().enumerate() {
            op.add_term(k as u32, f);
        }
        op
    })
}

fn idx(max: u32) -> impl Strategy<Value = Idx> {
    [0..=max, 0..=max, 0..=max, 0..=max]
}

/// Laurent-coefficient operator from the y-chart back to the x-chart:
/// `y^e d_y^j = x^{-e} (-x^2 d_x)^j`.
fn swap_back(lau: &BTreeMap<u32, BTreeMap<i64, Q>>) -> BTreeMap<u32, BTreeMap<i64, Q>> {
    let base = DiffOperator::monomial(Chart::X, -Q::one(), 2, 1);
    let mut out: BTreeMap<u32, BTreeMap<i64, Q>> = BTreeMap::new();
    for (j, coeffs) in lau {
        let mut pw = DiffOperator::identity(Chart::X);
        for _ in 0..*j {
            pw = compose(&pw, &base).unwrap();
        }
        for (e, c) in coeffs {
            for (i, g) in pw.terms() {
                for (l, w) in g.terms() {
                    *out.entry(i).or_default().entry(l as i64 - e).or_insert_with(Q::zero) += c * w;
                }
            }
        }
    }
    for v in out.values_mut() {
        v.retain(|_, c| !c.is_zero());
    }
    out.retain(|_, v| !v.is_empty());
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, .. ProptestConfig::default() })]

    #[test]
    fn valuation_is_a_valuation(p in prime(), x in nonzero_q(), y in nonzero_q()) {
        let (vx, vy) = (vp(&x, p).finite().unwrap(), vp(&y, p).finite().unwrap());
        prop_assert_eq!(vp(&(&x * &y), p), Val::Finite(vx + vy));
        let s = &x + &y;
        if vx != vy {
            prop_assert_eq!(vp(&s, p), Val::Finite(vx.min(vy)));
        } else {
            prop_assert!(vp(&s, p) >= Val::Finite(vx));
        }
    }

    #[test]
    fn legendre_matches_digit_sum(k in 0u64..10_000, p in prop::sample::select(vec![2u64, 3, 5])) {
        let pr = Prime::new(p).unwrap();
        let mut digits = 0;
        let mut r = k;
        while r > 0 {
            digits += r % p;
            r /= p;
        }
        prop_assert_eq!(vp_factorial(k, pr), (k - digits) / (p - 1));
    }

    #[test]
    fn asymptotic_bound(nu in 0u64..10_000, p in prop::sample::select(vec![2u64, 3, 5]), m in 0u32..=3) {
        let params = LevelParams::new(p, m, 0).unwrap();
        let q = nu / params.pm();
        let v = vp_factorial(q, params.p) as f64;
        let main = nu as f64 / ((p - 1) as f64 * params.pm() as f64);
        prop_assert!((v - main).abs() <= ((nu + 1) as f64).log(p as f64) + 2.0);
    }

    #[test]
    fn taylor_round_trip(f in poly(20), a in small_q()) {
        prop_assert_eq!(taylor_shift(&taylor_shift(&f, &a), &-a.clone()), f);
    }

    #[test]
    fn level_basis_round_trip(nu in idx(3), p in prop::sample::select(vec![2u64, 3]), m in 0u32..=2, n in 0u32..=2) {
        let params = LevelParams::new(p, m, n).unwrap();
        let basis = if n > 0 { Basis::LevelMN(params) } else { Basis::LevelM(params) };
        let b = PBWElement::basis_element(basis, nu);
        let plain = from_level_m_basis(&b);
        let back = arithdiff::gl2::level::convert(&plain, basis);
        prop_assert_eq!(back, b);
        if n == 0 {
            prop_assert_eq!(to_level_m_basis(&plain, &params), PBWElement::basis_element(basis, nu));
        }
    }

    #[test]
    fn hnf_is_canonical(rows in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 3..6), mix in prop::collection::vec(-3i64..4, 9)) {
        let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        // a unimodular recombination of the first three rows plus the rest
        let u = [[1, mix[0], mix[1]], [0, 1, mix[2]], [0, 0, 1]];
        let mut other: Vec<Vec<BigInt>> = (0..3)
            .map(|i| (0..3).map(|c| (0..3).map(|j| BigInt::from(u[i][j]) * &rows[j][c]).sum()).collect())
            .collect();
        other.extend(rows[3..].iter().cloned());
        other.reverse();
        prop_assert_eq!(hermite_normal_form(&rows, 3), hermite_normal_form(&other, 3));
    }

    #[test]
    fn lattice_membership_matches_ideal(
        coeffs in prop::collection::vec(-30i64..30, 7),
        scale in 0u32..4,
        p in prop::sample::select(vec![2u64, 3]),
        n in 0u32..=2,
    ) {
        let pr = Prime::new(p).unwrap();
        let f = Poly::from_i64(&coeffs).scale(&pr.qpow(scale as i64));
        let spec = IdealSpec::new(n, 3);
        let lat = global_section_lattice(&spec, &LevelParams::new(p, 0, 0).unwrap()).lattice;
        let inside = symbol_in_ideal_sheaf(&f, &spec, pr);
        prop_assert_eq!(lat.contains(&coeff_vector(&f, 3)), inside);
        prop_assert_eq!(extension_test(&GradedSymbol::new(Chart::X, 3, f), pr, n), inside);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, .. ProptestConfig::default() })]

    #[test]
    fn compose_is_associative(a in operator(4, 4), b in operator(4, 4), c in operator(4, 4)) {
        let l = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let r = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }
}

#[test]
fn legendre_matches_brute_force() {
    for p in [2, 3, 5] {
        let pr = Prime::new(p).unwrap();
        for k in 0..=200u64 {
            assert_eq!(Val::Finite(vp_factorial(k, pr) as i64), vp_int(&factorial(k), pr));
        }
    }
}

#[test]
fn q_factorial_is_factorial_of_floor() {
    let params = LevelParams::new(3, 1, 0).unwrap();
    for nu in 0..40 {
        assert_eq!(q_factorial(nu, &params), factorial(nu / 3));
    }
}

#[test]
fn chart_swap_is_an_involution() {
    for d in 0..=5u32 {
        for k in 0..=2 * d {
            let op = DiffOperator::monomial(Chart::X, Q::one(), k, d);
            let back = swap_back(&chart_swap_laurent(&op));
            let expect: BTreeMap<u32, BTreeMap<i64, Q>> =
                BTreeMap::from([(d, BTreeMap::from([(k as i64, Q::one())]))]);
            assert_eq!(back, expect, "x^{k} d^{d}");
        }
    }
}

#[test]
fn symbols_multiply() {
    use arithdiff::weyl::{h0_tensor_basis, symbol_of};
    for d in 0..=4 {
        for e in 0..=4 {
            for s in h0_tensor_basis(d) {
                for t in h0_tensor_basis(e) {
                    let a = DiffOperator::term(Chart::X, s.coeff.clone(), d);
                    let b = DiffOperator::term(Chart::X, t.coeff.clone(), e);
                    let ab = symbol_of(&compose(&a, &b).unwrap()).unwrap();
                    assert_eq!(ab, s.mul(&t).unwrap());
                }
            }
        }
    }
}

#[test]
fn xi_is_multiplicative_up_to_degree_four() {
    let idx = indices_up_to(2);
    for nu in &idx {
        for mu in &idx {
            let a = PBWElement::monomial(*nu, Q::one());
            let b = PBWElement::monomial(*mu, Q::one());
            assert_eq!(xi(&pbw_multiply(&a, &b)), compose(&xi(&a), &xi(&b)).unwrap());
        }
    }
}
