use arithdiff::arith::{Prime, Q};
use arithdiff::gl2::center::central_character;
use arithdiff::theorems::generation::{graded_generation, torsion_bound};
use arithdiff::theorems::theorem1::theorem1_graded_check;
use arithdiff::theorems::theorem2::{binomial_ratio_sweep, right_inequality_sweep, theorem2_check};
use arithdiff::LevelParams;
use num_traits::Zero;

fn params(p: u64, m: u32, n: u32) -> LevelParams {
    LevelParams::new(p, m, n).unwrap()
}

#[test]
fn generation_grid_and_torsion() {
    for p in [2, 3] {
        for m in 0..=1 {
            let pr = params(p, m, 0);
            for d in 0..=4 * pr.pm() as u32 {
                for k in 0..=2 * d {
                    let st = graded_generation(d, k, &pr).unwrap();
                    assert!(st.residual.0 < 2 * pr.pm() as u32);
                }
            }
            let t = torsion_bound(&pr, 6);
            assert!(t.passed(), "{t:?}");
        }
    }
}

#[test]
fn theorem1_grid() {
    for p in [2, 3] {
        for m in 0..=1 {
            let r = theorem1_graded_check(&params(p, m, 0), 6);
            assert!(r.passed(), "{r:?}");
        }
    }
}

#[test]
fn theorem2_grid() {
    for p in [2, 3] {
        for n in 0..=3 {
            for m in 0..=1 {
                let r = theorem2_check(&params(p, m, n), 6);
                assert!(r.passed(), "{r:?}");
                if n == 0 {
                    assert_eq!(r.n_prime, 0);
                }
            }
        }
    }
    let primes: Vec<Prime> = [2, 3, 5].iter().map(|&p| Prime::new(p).unwrap()).collect();
    assert!(right_inequality_sweep(&primes, 6, 12).is_empty());
}

#[test]
fn binomial_ratios_up_to_300() {
    for p in [2, 3, 5] {
        for m in 0..=3 {
            assert_eq!(binomial_ratio_sweep(300, &params(p, m, 0)), None);
        }
    }
}

#[test]
fn central_character_is_zero() {
    let c = central_character(&params(3, 1, 0));
    assert!(c.trace.is_zero() && c.casimir == Q::zero());
}
