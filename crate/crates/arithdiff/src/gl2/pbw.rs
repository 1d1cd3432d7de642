//! The enveloping algebra of `gl_2` in the ordered basis
//! `e^{n1} h1^{n2} h2^{n3} f^{n4}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{binomial_signed, q_big, q_int, vp, LevelParams, Val, Q};

/// Multi-index `(n1, n2, n3, n4)` for `e, h1, h2, f`.
pub type Idx = [u32; 4];

pub fn total_degree(nu: &Idx) -> u32 {
    nu.iter().sum()
}

/// All multi-indices with total degree at most `d`, in lexicographic order.
pub fn indices_up_to(d: u32) -> Vec<Idx> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                for e in 0..=d - a - b - c {
                    out.push([a, b, c, e]);
                }
            }
        }
    }
    out
}

/// All multi-indices of total degree exactly `d`.
pub fn indices_of_degree(d: u32) -> Vec<Idx> {
    indices_up_to(d)
        .into_iter()
        .filter(|nu| total_degree(nu) == d)
        .collect()
}

/// The four generators with their matrix meaning:
/// `e = E12`, `h1 = E11`, `h2 = E22`, `f = E21`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E,
    H1,
    H2,
    F,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::E, Gen::H1, Gen::H2, Gen::F];

    pub fn index(self) -> usize {
        match self {
            Gen::E => 0,
            Gen::H1 => 1,
            Gen::H2 => 2,
            Gen::F => 3,
        }
    }

    pub fn name(self) -> &'static str {
        ["e", "h1", "h2", "f"][self.index()]
    }
}

/// Which basis the coefficients of a [`PBWElement`] refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `e^{n1} h1^{n2} h2^{n3} f^{n4}`.
    Plain,
    /// `q_{n1}! e^{n1}/n1! * q_{n2}! (h1 choose n2) * q_{n3}! (h2 choose n3) * q_{n4}! f^{n4}/n4!`.
    LevelM(LevelParams),
    /// The level-m basis with every generator scaled by `p^n`:
    /// `p^{n|nu|}` times the level-m basis element.
    LevelMN(LevelParams),
}

/// Finitely supported coefficient map over multi-indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBWElement {
    pub basis: Basis,
    coeffs: BTreeMap<Idx, Q>,
}

impl PBWElement {
    pub fn zero(basis: Basis) -> PBWElement {
        PBWElement { basis, coeffs: BTreeMap::new() }
    }

    pub fn one() -> PBWElement {
        PBWElement::monomial([0, 0, 0, 0], Q::one())
    }

    /// `c * e^{n1} h1^{n2} h2^{n3} f^{n4}` in the plain basis.
    pub fn monomial(nu: Idx, c: Q) -> PBWElement {
        let mut out = PBWElement::zero(Basis::Plain);
        out.add_term(nu, c);
        out
    }

    pub fn basis_element(basis: Basis, nu: Idx) -> PBWElement {
        let mut out = PBWElement::zero(basis);
        out.add_term(nu, Q::one());
        out
    }

    pub fn gen(g: Gen) -> PBWElement {
        let mut nu = [0; 4];
        nu[g.index()] = 1;
        PBWElement::monomial(nu, Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, nu: &Idx) -> Q {
        self.coeffs.get(nu).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Idx, &Q)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Maximum total degree over the support.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(total_degree).max()
    }

    pub fn add_term(&mut self, nu: Idx, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(nu).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&nu);
        }
    }

    pub fn add(&self, other: &PBWElement) -> PBWElement {
        assert_eq!(self.basis, other.basis, "adding elements in different bases");
        let mut out = self.clone();
        for (nu, c) in other.terms() {
            out.add_term(*nu, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> PBWElement {
        let mut out = PBWElement::zero(self.basis);
        for (nu, v) in self.terms() {
            out.add_term(*nu, v * c);
        }
        out
    }

    pub fn sub(&self, other: &PBWElement) -> PBWElement {
        self.add(&other.scale(&-Q::one()))
    }

    /// Minimum p-adic valuation of the coefficients.
    pub fn min_valuation(&self, p: crate::arith::Prime) -> Val {
        self.coeffs
            .values()
            .map(|c| vp(c, p))
            .min()
            .unwrap_or(Val::Infinite)
    }
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (nu, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for g in Gen::ALL {
                let k = nu[g.index()];
                if k > 0 {
                    write!(f, "*{}^{}", g.name(), k)?;
                }
            }
        }
        Ok(())
    }
}

/// Polynomial in the commuting variables `h1, h2`.
pub type HPoly = BTreeMap<(u32, u32), Q>;

fn hpoly_add(target: &mut HPoly, key: (u32, u32), c: Q) {
    if c.is_zero() {
        return;
    }
    let e = target.entry(key).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        target.remove(&key);
    }
}

fn hpoly_mul(a: &HPoly, b: &HPoly) -> HPoly {
    let mut out = HPoly::new();
    for ((i, j), x) in a {
        for ((k, l), y) in b {
            hpoly_add(&mut out, (i + k, j + l), x * y);
        }
    }
    out
}

/// `P(h1 + s, h2 + t)`.
fn hpoly_shift(a: &HPoly, s: i64, t: i64) -> HPoly {
    if s == 0 && t == 0 {
        return a.clone();
    }
    let mut out = HPoly::new();
    for ((i, j), c) in a {
        // (h+s)^i = sum_k binom(i,k) s^(i-k) h^k
        for k in 0..=*i {
            let ck = q_big(binomial_signed(*i as i64, k as u64)) * q_big(num_traits::pow(
                num_bigint::BigInt::from(s),
                (*i - k) as usize,
            ));
            if ck.is_zero() {
                continue;
            }
            for l in 0..=*j {
                let cl = q_big(binomial_signed(*j as i64, l as u64))
                    * q_big(num_traits::pow(num_bigint::BigInt::from(t), (*j - l) as usize));
                hpoly_add(&mut out, (k, l), c * &ck * cl);
            }
        }
    }
    out
}

/// Working form `sum e^i P_ij(h1,h2) f^j` used for straightening.
type Blocks = BTreeMap<(u32, u32), HPoly>;

fn blocks_add(target: &mut Blocks, key: (u32, u32), p: HPoly) {
    let entry = target.entry(key).or_default();
    for (k, c) in p {
        hpoly_add(entry, k, c);
    }
    if entry.is_empty() {
        target.remove(&key);
    }
}

fn to_blocks(a: &PBWElement) -> Blocks {
    let mut out = Blocks::new();
    for (nu, c) in a.terms() {
        let mut p = HPoly::new();
        p.insert((nu[1], nu[2]), c.clone());
        blocks_add(&mut out, (nu[0], nu[3]), p);
    }
    out
}

fn from_blocks(b: &Blocks) -> PBWElement {
    let mut out = PBWElement::zero(Basis::Plain);
    for ((i, j), p) in b {
        for ((k, l), c) in p {
            out.add_term([*i, *k, *l, *j], c.clone());
        }
    }
    out
}

/// Right multiplication by `e`:
/// `e^i P f^j e = e^{i+1} P(h1+1, h2-1) f^j - j e^i P (h1 - h2 + j - 1) f^{j-1}`.
fn blocks_times_e(b: &Blocks) -> Blocks {
    let mut out = Blocks::new();
    for ((i, j), p) in b {
        blocks_add(&mut out, (i + 1, *j), hpoly_shift(p, 1, -1));
        if *j > 0 {
            let mut lin = HPoly::new();
            lin.insert((1, 0), Q::one());
            lin.insert((0, 1), -Q::one());
            if *j != 1 {
                lin.insert((0, 0), q_int(*j as i64 - 1));
            }
            let prod = hpoly_mul(p, &lin);
            let scaled: HPoly = prod.into_iter().map(|(k, c)| (k, -c * q_int(*j as i64))).collect();
            blocks_add(&mut out, (*i, j - 1), scaled);
        }
    }
    out
}

/// Right multiplication by a polynomial in `h1, h2`: `f^j Q(h) = Q(h1 + j, h2 - j) f^j`.
fn blocks_times_h(b: &Blocks, q: &HPoly) -> Blocks {
    let mut out = Blocks::new();
    for ((i, j), p) in b {
        let shifted = hpoly_shift(q, *j as i64, -(*j as i64));
        blocks_add(&mut out, (*i, *j), hpoly_mul(p, &shifted));
    }
    out
}

fn blocks_times_f(b: &Blocks, k: u32) -> Blocks {
    b.iter().map(|((i, j), p)| ((*i, j + k), p.clone())).collect()
}

/// Product in the plain basis, straightened with the commutation table
/// `[h1,e]=e, [h2,e]=-e, [h1,f]=-f, [h2,f]=f, [e,f]=h1-h2, [h1,h2]=0`.
pub fn pbw_multiply(a: &PBWElement, b: &PBWElement) -> PBWElement {
    assert!(
        a.basis == Basis::Plain && b.basis == Basis::Plain,
        "pbw_multiply expects plain-basis operands"
    );
    let left = to_blocks(a);
    let right = to_blocks(b);
    let mut result = Blocks::new();
    // group the right factor by its e-power so A e^c is computed once
    let mut by_e: BTreeMap<u32, Vec<(u32, &HPoly)>> = BTreeMap::new();
    for ((c, d), q) in &right {
        by_e.entry(*c).or_default().push((*d, q));
    }
    let mut cur = left;
    let mut cur_e = 0u32;
    for (c, items) in by_e {
        while cur_e < c {
            cur = blocks_times_e(&cur);
            cur_e += 1;
        }
        for (d, q) in items {
            let t = blocks_times_f(&blocks_times_h(&cur, q), d);
            for (k, p) in t {
                blocks_add(&mut result, k, p);
            }
        }
    }
    from_blocks(&result)
}

/// Commutator `AB - BA` in the plain basis.
pub fn commutator(a: &PBWElement, b: &PBWElement) -> PBWElement {
    pbw_multiply(a, b).sub(&pbw_multiply(b, a))
}

/// Naive straightening by rewriting words; used as an independent check of
/// [`pbw_multiply`].
pub mod words {
    use super::*;

    pub type Word = Vec<Gen>;

    fn bracket(x: Gen, y: Gen) -> Vec<(i64, Gen)> {
        use Gen::*;
        match (x, y) {
            (H1, E) => vec![(1, E)],
            (H2, E) => vec![(-1, E)],
            (H1, F) => vec![(-1, F)],
            (H2, F) => vec![(1, F)],
            (E, F) => vec![(1, H1), (-1, H2)],
            (a, b) if a == b => vec![],
            (H1, H2) | (H2, H1) => vec![],
            (a, b) => bracket(b, a).into_iter().map(|(c, g)| (-c, g)).collect(),
        }
    }

    /// Straightens a linear combination of words into the plain PBW basis.
    pub fn straighten(input: Vec<(Q, Word)>) -> PBWElement {
        let mut out = PBWElement::zero(Basis::Plain);
        let mut stack = input;
        while let Some((c, w)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            match w.windows(2).position(|p| p[0] > p[1]) {
                None => {
                    let mut nu = [0u32; 4];
                    for g in &w {
                        nu[g.index()] += 1;
                    }
                    out.add_term(nu, c);
                }
                Some(i) => {
                    let (x, y) = (w[i], w[i + 1]);
                    let mut swapped = w.clone();
                    swapped[i] = y;
                    swapped[i + 1] = x;
                    stack.push((c.clone(), swapped));
                    for (k, g) in bracket(x, y) {
                        let mut shorter = w[..i].to_vec();
                        shorter.push(g);
                        shorter.extend_from_slice(&w[i + 2..]);
                        stack.push((&c * q_int(k), shorter));
                    }
                }
            }
        }
        out
    }

    pub fn word_of(nu: &Idx) -> Word {
        let mut w = Vec::new();
        for g in Gen::ALL {
            for _ in 0..nu[g.index()] {
                w.push(g);
            }
        }
        w
    }

    /// Product of two plain elements by concatenating words.
    pub fn multiply(a: &PBWElement, b: &PBWElement) -> PBWElement {
        let mut input = Vec::new();
        for (nu, x) in a.terms() {
            for (mu, y) in b.terms() {
                let mut w = word_of(nu);
                w.extend(word_of(mu));
                input.push((x * y, w));
            }
        }
        straighten(input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: Gen) -> PBWElement {
        PBWElement::gen(x)
    }

    #[test]
    fn commutation_examples() {
        let fe = pbw_multiply(&g(Gen::F), &g(Gen::E));
        let mut expect = PBWElement::monomial([1, 0, 0, 1], Q::one());
        expect.add_term([0, 1, 0, 0], -Q::one());
        expect.add_term([0, 0, 1, 0], Q::one());
        assert_eq!(fe, expect);
        let he = pbw_multiply(&g(Gen::H1), &g(Gen::E));
        let mut expect = PBWElement::monomial([1, 1, 0, 0], Q::one());
        expect.add_term([1, 0, 0, 0], Q::one());
        assert_eq!(he, expect);
        let a = PBWElement::monomial([2, 1, 0, 3], q_int(5));
        assert_eq!(pbw_multiply(&a, &PBWElement::one()), a);
    }

    #[test]
    fn jacobi_identity() {
        for x in Gen::ALL {
            for y in Gen::ALL {
                for z in Gen::ALL {
                    let t1 = commutator(&commutator(&g(x), &g(y)), &g(z));
                    let t2 = commutator(&commutator(&g(y), &g(z)), &g(x));
                    let t3 = commutator(&commutator(&g(z), &g(x)), &g(y));
                    assert!(t1.add(&t2).add(&t3).is_zero());
                }
            }
        }
    }

    #[test]
    fn agrees_with_word_rewriting() {
        let idx = indices_up_to(3);
        for nu in idx.iter().step_by(3) {
            for mu in idx.iter().step_by(5) {
                let a = PBWElement::monomial(*nu, Q::one());
                let b = PBWElement::monomial(*mu, Q::one());
                assert_eq!(pbw_multiply(&a, &b), words::multiply(&a, &b), "{nu:?} {mu:?}");
            }
        }
    }
}
