//! The right-regular action of `U(gl_2)` on polynomial functions in the
//! matrix coordinates `a, b, c, d`, and the pairing with the monomial basis
//! of the coordinate ring centred at the identity.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::pbw::{total_degree, Basis, Gen, Idx, PBWElement};
use crate::arith::{binomial, q_big, q_int, LevelParams, Q};

/// Polynomial in `a, b, c, d`; exponents indexed in that order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly4 {
    terms: BTreeMap<[u32; 4], Q>,
}

impl Poly4 {
    pub fn zero() -> Poly4 {
        Poly4::default()
    }

    pub fn monomial(exps: [u32; 4], c: Q) -> Poly4 {
        let mut out = Poly4::zero();
        out.add_term(exps, c);
        out
    }

    /// A single coordinate; `var` is 0 for `a` up to 3 for `d`.
    pub fn var(var: usize) -> Poly4 {
        let mut e = [0; 4];
        e[var] = 1;
        Poly4::monomial(e, Q::one())
    }

    pub fn constant(c: Q) -> Poly4 {
        Poly4::monomial([0; 4], c)
    }

    pub fn add_term(&mut self, exps: [u32; 4], c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly4 {
        let mut out = Poly4::zero();
        for (e, v) in self.terms() {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly4) -> Poly4 {
        let mut out = Poly4::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly4 {
        let mut acc = Poly4::constant(Q::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at `(a, b, c, d)`.
    pub fn eval(&self, pt: &[Q; 4]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in self.terms() {
            let mut t = c.clone();
            for i in 0..4 {
                for _ in 0..e[i] {
                    t *= &pt[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Value at the identity matrix.
    pub fn eval_identity(&self) -> Q {
        self.eval(&[Q::one(), Q::zero(), Q::zero(), Q::one()])
    }
}

/// The derivation `R(g)`: each generator sends one coordinate to another,
/// `e: b -> a, d -> c`; `h1: a -> a, c -> c`; `h2: b -> b, d -> d`; `f: a -> b, c -> d`.
fn apply_gen(g: Gen, f: &Poly4) -> Poly4 {
    // (from, to) pairs
    let moves: [(usize, usize); 2] = match g {
        Gen::E => [(1, 0), (3, 2)],
        Gen::H1 => [(0, 0), (2, 2)],
        Gen::H2 => [(1, 1), (3, 3)],
        Gen::F => [(0, 1), (2, 3)],
    };
    let mut out = Poly4::zero();
    for (e, c) in f.terms() {
        for (from, to) in moves {
            if e[from] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[from] -= 1;
            e2[to] += 1;
            out.add_term(e2, c * q_int(e[from] as i64));
        }
    }
    out
}

/// `R(X) F` for `X` in any basis. Rightmost factors act first, since
/// `R(XY) = R(X) R(Y)`.
pub fn regular_action(x: &PBWElement, f: &Poly4) -> Poly4 {
    let x = super::level::convert(x, Basis::Plain);
    let mut out = Poly4::zero();
    for (nu, c) in x.terms() {
        let mut g = f.clone();
        for gen in [Gen::F, Gen::H2, Gen::H1, Gen::E] {
            for _ in 0..nu[gen.index()] {
                g = apply_gen(gen, &g);
            }
        }
        out = out.add(&g.scale(c));
    }
    out
}

/// `(a-1)^{m1} b^{m2} c^{m3} (d-1)^{m4}`, each coordinate scaled by `s`.
fn centred_monomial(mu: &Idx, s: &Q) -> Poly4 {
    let one = Poly4::constant(Q::one());
    let am = Poly4::var(0).add(&one.scale(&-Q::one())).scale(s);
    let dm = Poly4::var(3).add(&one.scale(&-Q::one())).scale(s);
    am.pow(mu[0])
        .mul(&Poly4::var(1).scale(s).pow(mu[1]))
        .mul(&Poly4::var(2).scale(s).pow(mu[2]))
        .mul(&dm.pow(mu[3]))
}

/// The distribution `e^(n1) (h1 choose n2) (h2 choose n3) f^(n4)`, scaled by
/// `p^{n|nu|}` at level `n`, in the plain basis.
pub fn basis_distribution(nu: &Idx, params: &LevelParams) -> PBWElement {
    let scale = params.p.qpow((params.n * total_degree(nu)) as i64);
    super::level::kostant_to_plain(&PBWElement::monomial(*nu, scale))
}

/// Pairing computed directly from [`regular_action`], as an independent check of
/// [`duality_pairing`].
pub fn duality_pairing_general(nu: &Idx, mu: &Idx, params: &LevelParams) -> Q {
    let s = params.p.qpow(-(params.n as i64));
    let x = basis_distribution(nu, params);
    regular_action(&x, &centred_monomial(mu, &s)).eval_identity()
}

/// `< e^(n1) (h1 choose n2)(h2 choose n3) f^(n4), (a-1)^{m1} b^{m2} c^{m3} (d-1)^{m4} >`,
/// with both sides rescaled by `p^n` and `p^{-n}` per generator at level `n`.
/// The pairing does not involve q-factorials, so it is independent of `m`.
pub fn duality_pairing(nu: &Idx, mu: &Idx, params: &LevelParams) -> Q {
    let g = centred_monomial(mu, &Q::one());
    // f^(k) = sum_{i+j=k} (b d_a)^(i) (d d_c)^(j)
    let k = nu[3];
    let mut after_f = Poly4::zero();
    for (e, c) in g.terms() {
        for i in 0..=k.min(e[0]) {
            let j = k - i;
            if j > e[2] {
                continue;
            }
            let coef = binomial(e[0] as u64, i as u64) * binomial(e[2] as u64, j as u64);
            after_f.add_term([e[0] - i, e[1] + i, e[2] - j, e[3] + j], c * q_big(coef));
        }
    }
    // h1, h2 act diagonally; e^(k) followed by evaluation at the identity
    // keeps exactly the monomials with c-degree 0 and b-degree k
    let mut total = Q::zero();
    for (e, c) in after_f.terms() {
        if e[2] != 0 || e[1] != nu[0] {
            continue;
        }
        let h1 = binomial((e[0] + e[2]) as u64, nu[1] as u64);
        let h2 = binomial((e[1] + e[3]) as u64, nu[2] as u64);
        total += c * q_big(h1 * h2);
    }
    let shift = params.n as i64 * (total_degree(nu) as i64 - total_degree(mu) as i64);
    total * params.p.qpow(shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::pbw::indices_up_to;

    #[test]
    fn action_examples() {
        let e = PBWElement::gen(Gen::E);
        assert_eq!(regular_action(&e, &Poly4::var(1)), Poly4::var(0));
        let h1 = PBWElement::gen(Gen::H1);
        assert_eq!(regular_action(&h1, &Poly4::var(0)), Poly4::var(0));
        let f = Poly4::var(0).mul(&Poly4::var(3)).add(&Poly4::var(2));
        assert_eq!(regular_action(&PBWElement::one(), &f), f);
    }

    #[test]
    fn action_is_a_representation() {
        // R([X, Y]) = [R(X), R(Y)] on a test polynomial
        let f = Poly4::var(0).pow(2).mul(&Poly4::var(3)).add(&Poly4::var(1).mul(&Poly4::var(2)));
        for x in Gen::ALL {
            for y in Gen::ALL {
                let gx = PBWElement::gen(x);
                let gy = PBWElement::gen(y);
                let br = super::super::pbw::commutator(&gx, &gy);
                let lhs = regular_action(&br, &f);
                let rhs = regular_action(&gx, &regular_action(&gy, &f))
                    .add(&regular_action(&gy, &regular_action(&gx, &f)).scale(&-Q::one()));
                assert_eq!(lhs, rhs, "{x:?} {y:?}");
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let p0 = LevelParams::new(3, 0, 0).unwrap();
        assert_eq!(duality_pairing(&[1, 0, 0, 0], &[1, 0, 0, 0], &p0), Q::zero());
        assert_eq!(duality_pairing(&[1, 0, 0, 0], &[0, 1, 0, 0], &p0), Q::one());
    }

    #[test]
    fn fast_pairing_matches_general() {
        for (p, n) in [(2, 0), (3, 1), (2, 2)] {
            let params = LevelParams::new(p, 0, n).unwrap();
            let idx = indices_up_to(3);
            for nu in &idx {
                for mu in &idx {
                    assert_eq!(
                        duality_pairing(nu, mu, &params),
                        duality_pairing_general(nu, mu, &params),
                        "{nu:?} {mu:?}"
                    );
                }
            }
        }
    }
}
