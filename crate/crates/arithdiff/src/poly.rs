//! Univariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{binomial, q_big, vp, Prime, Val, Q};

/// Finitely supported map from degree to coefficient; zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: BTreeMap<u32, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        Poly::monomial(c, 0)
    }

    pub fn monomial(c: Q, k: u32) -> Poly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Poly { coeffs }
    }

    /// The polynomial `x`.
    pub fn x() -> Poly {
        Poly::monomial(Q::one(), 1)
    }

    /// Builds from a dense coefficient list, lowest degree first.
    pub fn from_coeffs<I: IntoIterator<Item = Q>>(cs: I) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in cs.into_iter().enumerate() {
            p.add_term(k as u32, c);
        }
        p
    }

    pub fn from_i64(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| Q::from_integer(c.into())))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, k: u32) -> Q {
        self.coeffs.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Q)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Dense coefficients `[c_0, ..., c_deg]`.
    pub fn dense(&self) -> Vec<Q> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    pub fn add_term(&mut self, k: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: u32) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|(j, v)| (j + k, v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The `j`-th derivative.
    pub fn derivative(&self, j: u32) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in self.terms() {
            if k >= j {
                let mut f = Q::one();
                for i in 0..j {
                    f *= Q::from_integer((k - i).into());
                }
                out.add_term(k - j, c * f);
            }
        }
        out
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.dense().iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self(a + b t)` as a polynomial in `t`.
    pub fn substitute_affine(&self, a: &Q, b: &Q) -> Poly {
        // Horner on dense coefficients: acc <- acc * (a + b t) + c
        let mut acc: Vec<Q> = Vec::new();
        for c in self.dense().iter().rev() {
            let mut next = vec![Q::zero(); acc.len() + 1];
            for (i, v) in acc.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if !a.is_zero() {
                    next[i] += v * a;
                }
                next[i + 1] += v * b;
            }
            next[0] += c;
            acc = next;
        }
        Poly::from_coeffs(acc)
    }

    /// Minimum valuation over the coefficients.
    pub fn min_valuation(&self, p: Prime) -> Val {
        self.coeffs
            .values()
            .map(|c| vp(c, p))
            .min()
            .unwrap_or(Val::Infinite)
    }

    pub fn is_p_integral(&self, p: Prime) -> bool {
        self.min_valuation(p).is_nonneg()
    }
}

/// Coefficients of `f` in the basis `(x-a)^k`, lowest first.
pub fn taylor_shift(f: &Poly, a: &Q) -> Poly {
    let mut out = Poly::zero();
    for (j, c) in f.terms() {
        // x^j = sum_k binom(j,k) a^(j-k) (x-a)^k
        let mut apow = Q::one();
        let mut pows = Vec::with_capacity(j as usize + 1);
        for _ in 0..=j {
            pows.push(apow.clone());
            apow *= a;
        }
        for k in 0..=j {
            let term = c * q_big(binomial(j as u64, k as u64)) * &pows[(j - k) as usize];
            out.add_term(k, term);
        }
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_int;

    #[test]
    fn taylor_examples() {
        let f = Poly::from_i64(&[0, 0, 1]);
        assert_eq!(taylor_shift(&f, &q_int(1)), Poly::from_i64(&[1, 2, 1]));
        let g = Poly::from_i64(&[3, -1, 4]);
        assert_eq!(taylor_shift(&g, &q_int(0)), g);
        let h = Poly::from_i64(&[0, -9, 0, 9]);
        assert_eq!(taylor_shift(&h, &q_int(1)), Poly::from_i64(&[0, 18, 27, 9]));
    }

    #[test]
    fn arithmetic() {
        let a = Poly::from_i64(&[1, 1]);
        let b = Poly::from_i64(&[-1, 1]);
        assert_eq!(&a * &b, Poly::from_i64(&[-1, 0, 1]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(a.pow(3).coeff(2), q_int(3));
        assert_eq!(Poly::from_i64(&[0, 0, 0, 1]).derivative(2), Poly::from_i64(&[0, 6]));
        assert_eq!(a.substitute_affine(&q_int(2), &q_int(3)), Poly::from_i64(&[3, 3]));
    }
}
