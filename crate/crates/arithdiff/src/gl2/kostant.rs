//! Integral multiplication in the Kostant basis
//! `e^(i) (h1 choose a) (h2 choose b) f^(j)`, where `x^(k) = x^k / k!`.
//!
//! Structure constants in this basis are integers, so products are computed
//! with `i128` arithmetic. The level-m basis is this basis rescaled by
//! `q_i! q_a! q_b! q_j!`, which makes closure checks cheap.

use std::collections::BTreeMap;

use super::pbw::Idx;

/// Polynomial in `h1, h2` written in the basis `(h1 choose a)(h2 choose b)`.
pub type HBinom = BTreeMap<(u32, u32), i128>;

/// Element of `U(gl_2)` with integer coordinates in the Kostant basis.
pub type KElement = BTreeMap<Idx, i128>;

fn checked(x: Option<i128>) -> i128 {
    x.expect("Kostant structure constant overflowed i128")
}

/// Generalized binomial `(top choose k)` for integer `top`.
pub fn binom_i(top: i64, k: u32) -> i128 {
    let mut r: i128 = 1;
    for i in 0..k as i128 {
        r = checked(r.checked_mul(top as i128 - i)) / (i + 1);
    }
    r
}

fn add_to<K: Ord + Copy>(m: &mut BTreeMap<K, i128>, k: K, v: i128) {
    if v == 0 {
        return;
    }
    let e = m.entry(k).or_insert(0);
    *e = checked(e.checked_add(v));
    if *e == 0 {
        m.remove(&k);
    }
}

/// `(h choose a)(h choose b) = sum_k binom(k,a) binom(a,k-b) (h choose k)`.
fn binom_product(a: u32, b: u32) -> Vec<(u32, i128)> {
    let lo = a.max(b);
    (lo..=a + b)
        .map(|k| (k, binom_i(k as i64, a) * binom_i(a as i64, k - b)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

/// `(h + s choose a) = sum_r binom(s, a - r) (h choose r)`.
fn binom_shift(a: u32, s: i64) -> Vec<(u32, i128)> {
    (0..=a)
        .map(|r| (r, binom_i(s, a - r)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn hb_mul(x: &HBinom, y: &HBinom) -> HBinom {
    let mut out = HBinom::new();
    for ((a1, b1), u) in x {
        for ((a2, b2), v) in y {
            let uv = checked(u.checked_mul(*v));
            for (ka, ca) in binom_product(*a1, *a2) {
                for (kb, cb) in binom_product(*b1, *b2) {
                    add_to(&mut out, (ka, kb), checked(uv.checked_mul(ca * cb)));
                }
            }
        }
    }
    out
}

/// `P(h1 + s, h2 - s)`.
fn hb_shift(x: &HBinom, s: i64) -> HBinom {
    if s == 0 {
        return x.clone();
    }
    let mut out = HBinom::new();
    for ((a, b), u) in x {
        for (ra, ca) in binom_shift(*a, s) {
            for (rb, cb) in binom_shift(*b, -s) {
                add_to(&mut out, (ra, rb), checked(u.checked_mul(ca * cb)));
            }
        }
    }
    out
}

/// `(c - h1 + h2 choose t)` in the binomial basis, by Vandermonde in `h2`
/// and finite differences in `h1`.
fn reorder_binomial(c: i64, t: u32) -> HBinom {
    let mut out = HBinom::new();
    for r in 0..=t {
        // (c - h1 choose t - r): coefficient of (h1 choose alpha) is the
        // alpha-th forward difference at 0
        let s = t - r;
        let vals: Vec<i128> = (0..=s as i64).map(|x| binom_i(c - x, s)).collect();
        for alpha in 0..=s {
            let mut diff: i128 = 0;
            for i in 0..=alpha {
                let sign = if (alpha - i) % 2 == 0 { 1 } else { -1 };
                diff += sign * binom_i(alpha as i64, i) * vals[i as usize];
            }
            add_to(&mut out, (alpha, r), diff);
        }
    }
    out
}

/// Product of two Kostant basis elements.
pub fn multiply_basis(nu: &Idx, mu: &Idx) -> KElement {
    let [i, a, b, j] = *nu;
    let [k, c, d, l] = *mu;
    let left_h: HBinom = [((a, b), 1)].into_iter().collect();
    let right_h: HBinom = [((c, d), 1)].into_iter().collect();
    let mut out = KElement::new();
    // f^(j) e^(k) = sum_t e^(k-t) (t - H - j - k + t choose t) f^(j-t), H = h1 - h2
    for t in 0..=j.min(k) {
        let mid = reorder_binomial(2 * t as i64 - j as i64 - k as i64, t);
        let e_pow = k - t;
        let f_pow = j - t;
        // move left_h right past e^(k-t), right_h left past f^(j-t)
        let h = hb_mul(
            &hb_mul(&hb_shift(&left_h, e_pow as i64), &mid),
            &hb_shift(&right_h, f_pow as i64),
        );
        let ce = binom_i((i + e_pow) as i64, i);
        let cf = binom_i((f_pow + l) as i64, l);
        let scale = checked(ce.checked_mul(cf));
        for ((ha, hb), v) in h {
            add_to(&mut out, [i + e_pow, ha, hb, f_pow + l], checked(v.checked_mul(scale)));
        }
    }
    out
}

pub fn multiply(x: &KElement, y: &KElement) -> KElement {
    let mut out = KElement::new();
    for (nu, u) in x {
        for (mu, v) in y {
            let uv = checked(u.checked_mul(*v));
            for (lam, w) in multiply_basis(nu, mu) {
                add_to(&mut out, lam, checked(uv.checked_mul(w)));
            }
        }
    }
    out
}
