//! The coordinate Hopf algebras of the congruence group schemes `G(n)`,
//! whose points are matrices `1 + p^n A`, together with their
//! comultiplications and the transition maps `G(n) -> G(n-1)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{Prime, Q};

/// Polynomial with rational coefficients in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> MPoly {
        let mut out = MPoly::zero(nvars);
        out.add_term(vec![0; nvars], c);
        out
    }

    pub fn one(nvars: usize) -> MPoly {
        MPoly::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut out = MPoly::zero(nvars);
        out.add_term(e, Q::one());
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in self.terms() {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The algebra map sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |m| m.nvars);
        let mut out = MPoly::zero(target);
        for (e, c) in self.terms() {
            let mut t = MPoly::constant(target, c.clone());
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    t = t.mul(&images[i].pow(*k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Re-indexes into `nvars` variables, placing variable `i` at `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (e, c) in self.terms() {
            let mut e2 = vec![0; nvars];
            e2[offset..offset + self.nvars].copy_from_slice(e);
            out.add_term(e2, c.clone());
        }
        out
    }
}

/// Element `poly / Delta_n^k` of `O(G(n))` in the coordinates `a_n, b_n, c_n, d_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfElement {
    pub n: u32,
    pub p: Prime,
    pub poly: MPoly,
    pub det_power: u32,
}

/// Element of `O(G(n)) (x) O(G(n))`: an 8-variable polynomial
/// `(a, b, c, d, a', b', c', d')` over `(Delta_n Delta_n')^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub poly: MPoly,
    pub det_power: u32,
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

impl HopfElement {
    pub fn new(p: Prime, n: u32, poly: MPoly) -> HopfElement {
        assert_eq!(poly.nvars(), 4);
        HopfElement { n, p, poly, det_power: 0 }
    }

    /// Coordinate function; `i` is 0..4 for `a_n, b_n, c_n, d_n`.
    pub fn coordinate(p: Prime, n: u32, i: usize) -> HopfElement {
        HopfElement::new(p, n, MPoly::var(4, i))
    }

    pub fn one(p: Prime, n: u32) -> HopfElement {
        HopfElement::new(p, n, MPoly::one(4))
    }

    /// `Delta_n`; for `n = 0` this is `ad - bc`.
    pub fn determinant(p: Prime, n: u32) -> HopfElement {
        HopfElement::new(p, n, determinant_poly(p, n, 0, 4))
    }
}

/// `Delta_n` in variables `offset..offset+4` of an `nvars`-variable ring.
fn determinant_poly(p: Prime, n: u32, offset: usize, nvars: usize) -> MPoly {
    let v = |i| MPoly::var(nvars, offset + i);
    if n == 0 {
        return v(A).mul(&v(D)).sub(&v(B).mul(&v(C)));
    }
    let pn = p.qpow(n as i64);
    let one = MPoly::one(nvars);
    let a = one.add(&v(A).scale(&pn));
    let d = one.add(&v(D).scale(&pn));
    a.mul(&d).sub(&v(B).mul(&v(C)).scale(&(&pn * &pn)))
}

/// Images of the four coordinates under the comultiplication, in a ring
/// with variables `left..left+4` and `right..right+4` of `nvars`.
fn coproduct_images(p: Prime, n: u32, nvars: usize, left: usize, right: usize) -> Vec<MPoly> {
    let x = |i| MPoly::var(nvars, left + i);
    let y = |i| MPoly::var(nvars, right + i);
    // entry (r, s) of the product X Y
    let prod = |r: usize, s: usize| x(2 * r).mul(&y(s)).add(&x(2 * r + 1).mul(&y(2 + s)));
    (0..4)
        .map(|i| {
            let (r, s) = (i / 2, i % 2);
            if n == 0 {
                prod(r, s)
            } else {
                let pn = p.qpow(n as i64);
                x(i).add(&y(i)).add(&prod(r, s).scale(&pn))
            }
        })
        .collect()
}

/// The comultiplication of `O(G(n))`, extended multiplicatively.
pub fn comultiplication(f: &HopfElement) -> TensorElement {
    let images = coproduct_images(f.p, f.n, 8, 0, 4);
    TensorElement { poly: f.poly.substitute(&images), det_power: f.det_power }
}

/// `Delta_n (x) Delta_n'` as an 8-variable polynomial.
pub fn tensor_determinant(p: Prime, n: u32) -> MPoly {
    determinant_poly(p, n, 0, 8).mul(&determinant_poly(p, n, 4, 8))
}

/// Checks `Delta(Delta_n) = Delta_n Delta_n'` exactly.
pub fn determinant_is_multiplicative(p: Prime, n: u32) -> bool {
    comultiplication(&HopfElement::determinant(p, n)).poly == tensor_determinant(p, n)
}

/// Checks `(Delta (x) id) Delta = (id (x) Delta) Delta` on the coordinate `i`,
/// as a 12-variable polynomial identity.
pub fn coassociative_on(p: Prime, n: u32, i: usize) -> bool {
    let once = coproduct_images(p, n, 8, 0, 4)[i].clone();
    // (Delta (x) id): first factor goes to variables 0..8, second to 8..12
    let left_images: Vec<MPoly> = coproduct_images(p, n, 12, 0, 4)
        .into_iter()
        .chain((0..4).map(|j| MPoly::var(12, 8 + j)))
        .collect();
    let right_images: Vec<MPoly> = (0..4)
        .map(|j| MPoly::var(12, j))
        .chain(coproduct_images(p, n, 12, 4, 8))
        .collect();
    once.substitute(&left_images) == once.substitute(&right_images)
}

/// Images of the level `n-1` coordinates under the transition map into level `n`,
/// placed at variables `offset..offset+4` of an `nvars`-variable ring.
fn transition_images(p: Prime, n: u32, nvars: usize, offset: usize) -> Vec<MPoly> {
    assert!(n >= 1, "transition maps start at n = 1");
    let pp = Q::from_integer(p.big());
    (0..4)
        .map(|i| {
            let scaled = MPoly::var(nvars, offset + i).scale(&pp);
            if n == 1 && (i == A || i == D) {
                scaled.add(&MPoly::one(nvars))
            } else {
                scaled
            }
        })
        .collect()
}

/// The algebra map `O(G(n-1)) -> O(G(n))` dual to `G(n) -> G(n-1)`.
pub fn transition_hom(f: &HopfElement, n: u32) -> HopfElement {
    assert_eq!(f.n + 1, n, "transition_hom expects an element at level n - 1");
    HopfElement {
        n,
        p: f.p,
        poly: f.poly.substitute(&transition_images(f.p, n, 4, 0)),
        det_power: f.det_power,
    }
}

/// The transition map is a map of coalgebras on coordinate `i`:
/// `Delta_n(phi(x)) = (phi (x) phi)(Delta_{n-1}(x))`.
pub fn transition_compatible_on(p: Prime, n: u32, i: usize) -> bool {
    let x = HopfElement::coordinate(p, n - 1, i);
    let lhs = comultiplication(&transition_hom(&x, n)).poly;
    let both: Vec<MPoly> = transition_images(p, n, 8, 0)
        .into_iter()
        .chain(transition_images(p, n, 8, 4))
        .collect();
    let rhs = comultiplication(&x).poly.substitute(&both);
    lhs == rhs
}

/// The transition map sends `Delta_{n-1}` to `Delta_n`, so denominators are preserved.
pub fn transition_preserves_determinant(p: Prime, n: u32) -> bool {
    transition_hom(&HopfElement::determinant(p, n - 1), n).poly
        == HopfElement::determinant(p, n).poly
}
