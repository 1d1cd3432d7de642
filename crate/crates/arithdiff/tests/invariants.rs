//! Deterministic grids over the algebraic and geometric invariants.

use arithdiff::arith::{
    factorial, integrality_ratio, q_big, vp, vp_factorial, vp_int, dp_coeff, Prime, Val, Q,
};
use arithdiff::gl2::cnj::{caution_pair, cnj_row, in_hypothesis_range};
use arithdiff::gl2::hopf::{
    coassociative_on, determinant_is_multiplicative, transition_compatible_on,
    transition_preserves_determinant,
};
use arithdiff::gl2::level::check_subalgebra_closure;
use arithdiff::gl2::pbw::{indices_up_to, total_degree, Idx};
use arithdiff::gl2::regular::{duality_pairing, duality_pairing_general};
use arithdiff::models::charts::{chart_tree, enumerate_charts, ChartKind};
use arithdiff::models::ideal::{ideal_membership, membership_witness};
use arithdiff::models::lattice::ZpLattice;
use arithdiff::models::sections::{
    coeff_vector, global_section_lattice, rewrite_d_certificate, sandwich_c, sandwich_from_lattice,
    seeded_integral_symbols, symbol_in_ideal_sheaf,
};
use arithdiff::models::{extension_test, IdealSpec};
use arithdiff::weyl::binomial_of_operator;
use arithdiff::{Chart, DiffOperator, GradedSymbol, LevelParams, Poly};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn dp_coefficients_have_unit_parts() {
    for p in [2, 3, 5] {
        for m in 0..=3 {
            let params = LevelParams::new(p, m, 0).unwrap();
            for d in 0..=500u64 {
                let c = dp_coeff(d, &params);
                assert_eq!(c.unit_valuation(params.p), Val::Finite(0), "p={p} m={m} d={d}");
                let denom = factorial(c.s) * num_traits::pow(factorial(params.pm()), c.q as usize);
                assert_eq!(c.value * q_big(denom), c.unit);
            }
        }
    }
}

#[test]
fn integrality_ratio_against_legendre() {
    for p in [2, 3, 5] {
        let pr = prime(p);
        for m in 0..=3 {
            let params = LevelParams::new(p, m, 0).unwrap();
            let qv = |k: u64| vp_factorial(k / params.pm(), pr) as i64;
            for i in 0..=200u64 {
                for j in 0..=200 - i {
                    let v = vp(&integrality_ratio(i, j, &params), pr).finite().unwrap();
                    let bin = vp_factorial(i + j, pr) as i64
                        - vp_factorial(i, pr) as i64
                        - vp_factorial(j, pr) as i64;
                    assert_eq!(v, bin - (qv(i + j) - qv(i) - qv(j)));
                    assert!(v >= 0, "p={p} m={m} i={i} j={j}");
                }
            }
        }
    }
}

#[test]
fn binomial_of_euler_operator() {
    let euler = DiffOperator::monomial(Chart::X, Q::one(), 1, 1);
    for nu in 0..=12u32 {
        let expect = DiffOperator::monomial(Chart::X, Q::new(BigInt::one(), factorial(nu as u64)), nu, nu);
        assert_eq!(binomial_of_operator(&euler, nu), expect, "nu={nu}");
    }
}

#[test]
fn level_m_closure_up_to_degree_six() {
    for p in [2, 3] {
        for m in 0..=2 {
            let r = check_subalgebra_closure(6, &LevelParams::new(p, m, 0).unwrap());
            assert!(r.passed(), "p={p} m={m}: {r:?}");
        }
    }
}

#[test]
fn hopf_identities() {
    for p in [2, 3] {
        let pr = prime(p);
        for n in 0..=3 {
            assert!(determinant_is_multiplicative(pr, n));
            for i in 0..4 {
                assert!(coassociative_on(pr, n, i), "p={p} n={n} i={i}");
                if n >= 1 {
                    assert!(transition_compatible_on(pr, n, i), "p={p} n={n} i={i}");
                }
            }
            if n >= 1 {
                assert!(transition_preserves_determinant(pr, n));
            }
        }
    }
}

#[test]
fn cnj_integral_in_range() {
    for p in [2, 3, 5] {
        for n in 0..=3 {
            let params = LevelParams::new(p, 0, n).unwrap();
            for nu in 1..=50 {
                let row = cnj_row(nu, &params);
                assert!(row.identity_ok, "p={p} n={n} nu={nu}");
                if in_hypothesis_range(params.p, n) {
                    assert!(row.min_valuation.is_nonneg(), "p={p} n={n} nu={nu}");
                }
            }
        }
    }
    // n = 0 is outside the range and integrality really fails there
    let row = cnj_row(2, &LevelParams::new(2, 0, 0).unwrap());
    assert_eq!(row.min_valuation, Val::Finite(-1));
    // (2, 1) is excluded too, yet stays integral on this range
    assert!(!in_hypothesis_range(prime(2), 1));
    let params = LevelParams::new(2, 0, 1).unwrap();
    assert!((1..=50).all(|nu| cnj_row(nu, &params).min_valuation.is_nonneg()));
}

#[test]
fn caution_pair_differs() {
    for (p, n) in [(2, 1), (3, 1), (5, 2)] {
        let (a, b) = caution_pair(2, &LevelParams::new(p, 0, n).unwrap());
        assert_ne!(a, b);
        // same leading term
        assert_eq!(a.coeff(2), b.coeff(2));
    }
}

fn sigma(nu: &Idx) -> Idx {
    [nu[1], nu[0], nu[3], nu[2]]
}

/// Pairing against the centred coordinates is unitriangular in total degree:
/// zero when `|nu| < |mu|`, and `delta_{sigma(nu), mu}` when the degrees agree.
#[test]
fn pairing_is_unitriangular() {
    let idx = indices_up_to(6);
    for p in [2, 3, 5] {
        for n in 0..=2 {
            let params = LevelParams::new(p, 0, n).unwrap();
            for nu in &idx {
                for mu in &idx {
                    let (a, b) = (total_degree(nu), total_degree(mu));
                    if a > b {
                        continue;
                    }
                    let v = duality_pairing(nu, mu, &params);
                    let expect = if a == b && sigma(nu) == *mu { Q::one() } else { Q::zero() };
                    assert_eq!(v, expect, "p={p} n={n} nu={nu:?} mu={mu:?}");
                }
            }
        }
    }
}

#[test]
fn pairing_strict_delta_fails() {
    let params = LevelParams::new(2, 0, 0).unwrap();
    assert_eq!(duality_pairing(&[1, 0, 0, 0], &[0, 1, 0, 0], &params), Q::one());
    assert_eq!(duality_pairing(&[1, 0, 0, 1], &[1, 0, 0, 0], &params), Q::one());
}

#[test]
fn pairing_fast_matches_general() {
    let idx = indices_up_to(3);
    for (p, n) in [(2, 0), (3, 1), (5, 2)] {
        let params = LevelParams::new(p, 0, n).unwrap();
        for nu in &idx {
            for mu in &idx {
                assert_eq!(duality_pairing(nu, mu, &params), duality_pairing_general(nu, mu, &params));
            }
        }
    }
}

#[test]
fn chart_counts() {
    for p in [2u64, 3, 5] {
        let pr = prime(p);
        for n in 0..=3u32 {
            let charts = enumerate_charts(pr, n);
            let count = |k: ChartKind, level: u32| {
                charts.iter().filter(|c| c.kind == k && c.level == level).count() as u64
            };
            assert_eq!(count(ChartKind::Interior, 0), 1);
            for nu in 1..=n {
                assert_eq!(count(ChartKind::BlowUpChart, nu), (p + 1) * p.pow(nu - 1));
            }
            assert_eq!(count(ChartKind::ResidualDisc, n), (p + 1) * p.pow(n));
            let tree = chart_tree(pr, n);
            assert!(tree.is_tree() && tree.degrees_ok(), "p={p} n={n}");
            let nodes: u64 = 1 + (1..=n).map(|nu| (p + 1) * p.pow(nu - 1)).sum::<u64>();
            assert_eq!(tree.nodes.len() as u64, nodes);
        }
    }
    assert_eq!(chart_tree(prime(2), 1).nodes.len(), 4);
    assert_eq!(chart_tree(prime(3), 0).nodes.len(), 1);
    assert_eq!(chart_tree(prime(2), 2).ends(), 6);
}

#[test]
fn taylor_criterion_matches_witness_search() {
    for p in [2u64, 3] {
        let pr = prime(p);
        for n in 0..=2 {
            for d in 0..=3 {
                let spec = IdealSpec::new(n, d);
                for j in 0..=6 {
                    for e in 0..=4 {
                        let f = Poly::monomial(q_big(pr.pow(e)), j);
                        for a in 0..(p.pow(n).max(1) * p) {
                            let a = BigInt::from(a);
                            let fast = ideal_membership(&f, &a, &spec, pr).unwrap();
                            let slow = membership_witness(&f, &a, &spec, pr).unwrap().is_some();
                            assert_eq!(fast, slow, "p={p} n={n} d={d} j={j} e={e} a={a}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn membership_depends_on_residue_only() {
    let pr = prime(3);
    let spec = IdealSpec::new(1, 2);
    let f = Poly::from_i64(&[3, -6, 9, 1]);
    for a in 0..3i64 {
        let base = ideal_membership(&f, &BigInt::from(a), &spec, pr).unwrap();
        for lift in [a + 3, a + 9, a - 3] {
            assert_eq!(ideal_membership(&f, &BigInt::from(lift), &spec, pr).unwrap(), base);
        }
    }
}

#[test]
fn extension_matches_membership() {
    for p in [2u64, 3] {
        let pr = prime(p);
        for n in 0..=2 {
            let mut positives = 0;
            for d in 1..=5 {
                let spec = IdealSpec::new(n, d);
                let mut inputs: Vec<Poly> = (0..=2 * d).map(|k| Poly::monomial(Q::one(), k)).collect();
                inputs.extend(seeded_integral_symbols(d, n, pr, 200, 7 + d as u64));
                for f in inputs {
                    let inside = symbol_in_ideal_sheaf(&f, &spec, pr);
                    positives += inside as usize;
                    let s = GradedSymbol::new(Chart::X, d, f.clone());
                    assert_eq!(extension_test(&s, pr, n), inside, "p={p} n={n} d={d} f={f}");
                }
            }
            assert!(positives > 0, "p={p} n={n}: no positive samples");
        }
    }
}

#[test]
fn sandwich_grid() {
    for p in [2u64, 3] {
        for n in 0..=3 {
            for d in 1..=8 {
                for m in 0..=1 {
                    let params = LevelParams::new(p, m, 0).unwrap();
                    let sl = global_section_lattice(&IdealSpec::new(n, d), &params);
                    let r = sandwich_from_lattice(&sl, &params);
                    assert!(r.passed(), "{r:?}");
                    if d == 1 {
                        assert_eq!(sl.lattice, ZpLattice::standard(params.p, 3).scale_p(n));
                    }
                }
            }
        }
    }
}

fn witness(p: Prime, k: u32) -> Poly {
    let xp_minus_x = &Poly::monomial(Q::one(), p.get() as u32) - &Poly::x();
    xp_minus_x.pow(k).scale(&p.qpow((k as u64 * (p.get() - 1)) as i64))
}

#[test]
fn optimal_exponent_witnesses() {
    let three = prime(3);
    let params = LevelParams::new(3, 0, 0).unwrap();
    let l13 = global_section_lattice(&IdealSpec::new(1, 3), &params).lattice;
    assert_eq!(witness(three, 1), Poly::from_i64(&[0, -9, 0, 9]));
    assert!(l13.contains(&coeff_vector(&witness(three, 1), 3)));

    for p in [2u64, 3, 5] {
        let pr = prime(p);
        let params = LevelParams::new(p, 0, 0).unwrap();
        let d = p as u32;
        let l = global_section_lattice(&IdealSpec::new(1, d), &params).lattice;
        let e = l.optimal_exponent();
        // the upper inclusion already forces e >= ceil(p(p-1)/(p+1)) = p - 1
        assert!(e >= sandwich_c(d, pr) as i64);
        assert!(e <= p as i64 - 1, "e(1,{p}) = {e}");
    }

    for p in [2u64, 3] {
        let pr = prime(p);
        let params = LevelParams::new(p, 0, 0).unwrap();
        for k in 1..=3 {
            let d = k * p as u32;
            let l = global_section_lattice(&IdealSpec::new(1, d), &params).lattice;
            assert!(l.contains(&coeff_vector(&witness(pr, k), d)), "p={p} k={k}");
        }
    }
}

#[test]
fn rewrite_certificates() {
    for p in [2u64, 3] {
        for n in 1..=3 {
            for nu in 1..=n {
                for d in 0..=6 {
                    for k in 0..=d {
                        let c = rewrite_d_certificate(n, nu, d, k, prime(p));
                        assert!(c.passed(), "{c:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn witness_valuation_matches_exponent() {
    // p^{k(p-1)} (x^p - x)^k has content exactly p^{k(p-1)}
    for p in [2u64, 3, 5] {
        for k in 1..=3u32 {
            let w = witness(prime(p), k);
            let v = w.terms().map(|(_, c)| vp_int(c.numer(), prime(p))).min().unwrap();
            assert_eq!(v, Val::Finite((k as u64 * (p - 1)) as i64));
        }
    }
}
