//! Exact rationals with p-adic valuations, level-m factorials and the
//! integer sequences used by the basis conversions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParamError;

/// Scalar type used everywhere: an exact rational kept in lowest terms with
/// a positive denominator.
pub type PadicRational = BigRational;
/// Short alias used internally.
pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_big(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn q_frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// A validated prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime, ParamError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(ParamError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as an exact integer.
    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.0), e as usize)
    }

    /// `p^e` as a rational; negative exponents allowed.
    pub fn qpow(self, e: i64) -> Q {
        let base = self.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            q_big(base)
        } else {
            Q::new(BigInt::one(), base)
        }
    }
}

impl TryFrom<u64> for Prime {
    type Error = ParamError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// The prime `p`, the level `m` and the congruence depth `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelParams {
    pub p: Prime,
    pub m: u32,
    pub n: u32,
}

impl LevelParams {
    pub fn new(p: u64, m: u32, n: u32) -> Result<LevelParams, ParamError> {
        Ok(LevelParams { p: Prime::new(p)?, m, n })
    }

    /// `p^m`.
    pub fn pm(&self) -> u64 {
        self.p.get().pow(self.m)
    }
}

/// A p-adic valuation; `Infinite` is the valuation of zero and sorts last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Val {
    Finite(i64),
    Infinite,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinite => None,
        }
    }

    pub fn is_nonneg(self) -> bool {
        self >= Val::Finite(0)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer, `Infinite` for zero.
pub fn vp_int(x: &BigInt, p: Prime) -> Val {
    if x.is_zero() {
        return Val::Infinite;
    }
    let pb = p.big();
    let mut v = 0i64;
    let mut y = x.abs();
    loop {
        let (quo, rem) = y.div_rem(&pb);
        if !rem.is_zero() {
            break;
        }
        y = quo;
        v += 1;
    }
    Val::Finite(v)
}

/// Exact p-adic valuation of a rational.
pub fn vp(x: &Q, p: Prime) -> Val {
    if x.is_zero() {
        return Val::Infinite;
    }
    let a = vp_int(x.numer(), p).finite().unwrap_or(0);
    let b = vp_int(x.denom(), p).finite().unwrap_or(0);
    Val::Finite(a - b)
}

/// `floor(nu / p^m)`.
pub fn q_floor(nu: u64, params: &LevelParams) -> u64 {
    nu / params.pm()
}

/// Legendre's formula for `v_p(k!)`.
pub fn vp_factorial(k: u64, p: Prime) -> u64 {
    let mut total = 0;
    let mut pk = p.get();
    while pk <= k {
        total += k / pk;
        pk = match pk.checked_mul(p.get()) {
            Some(v) => v,
            None => break,
        };
    }
    total
}

fn factorial_table() -> &'static Mutex<Vec<BigInt>> {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigInt::one()]))
}

pub fn factorial(k: u64) -> BigInt {
    let mut t = factorial_table().lock().expect("factorial table poisoned");
    while (t.len() as u64) <= k {
        let next = t.last().unwrap() * BigInt::from(t.len() as u64);
        t.push(next);
    }
    t[k as usize].clone()
}

type QFactTable = HashMap<(u64, u32), Vec<BigInt>>;

fn q_factorial_tables() -> &'static Mutex<QFactTable> {
    static TABLES: OnceLock<Mutex<QFactTable>> = OnceLock::new();
    TABLES.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `q^{(m)}_nu !`, memoized per `(p, m)`.
pub fn q_factorial(nu: u64, params: &LevelParams) -> BigInt {
    let key = (params.p.get(), params.m);
    {
        let tables = q_factorial_tables().lock().expect("q-factorial table poisoned");
        if let Some(t) = tables.get(&key) {
            if (nu as usize) < t.len() {
                return t[nu as usize].clone();
            }
        }
    }
    let mut tables = q_factorial_tables().lock().expect("q-factorial table poisoned");
    let t = tables.entry(key).or_insert_with(Vec::new);
    while (t.len() as u64) <= nu {
        let v = factorial(q_floor(t.len() as u64, params));
        t.push(v);
    }
    t[nu as usize].clone()
}

/// `q^{(m)}_nu ! / nu!`.
pub fn q_ratio(nu: u64, params: &LevelParams) -> Q {
    Q::new(q_factorial(nu, params), factorial(nu))
}

/// The divided-power coefficient `q_d!/d!` together with its decomposition
/// `u / (s! (p^m!)^q)`, `d = p^m q + s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpCoeff {
    pub value: Q,
    pub q: u64,
    pub s: u64,
    pub unit: Q,
}

impl DpCoeff {
    pub fn unit_valuation(&self, p: Prime) -> Val {
        vp(&self.unit, p)
    }
}

pub fn dp_coeff(d: u64, params: &LevelParams) -> DpCoeff {
    let pm = params.pm();
    let q = d / pm;
    let s = d % pm;
    let value = q_ratio(d, params);
    let denom = factorial(s) * num_traits::pow(factorial(pm), q as usize);
    let unit = &value * q_big(denom);
    DpCoeff { value, q, s, unit }
}

/// `binom(i+j, i) * (q_{i+j}! / (q_i! q_j!))^{-1}`.
pub fn integrality_ratio(i: u64, j: u64, params: &LevelParams) -> Q {
    let bin = binomial(i + j, i);
    let qr = Q::new(
        q_factorial(i + j, params),
        q_factorial(i, params) * q_factorial(j, params),
    );
    q_big(bin) / qr
}

/// `q_nu! / (q_k! q_{nu-k}!)`.
pub fn binomial_ratio(nu: u64, k: u64, params: &LevelParams) -> Q {
    assert!(k <= nu, "binomial_ratio needs k <= nu");
    Q::new(
        q_factorial(nu, params),
        q_factorial(k, params) * q_factorial(nu - k, params),
    )
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient with an arbitrary integer top, `top (top-1) ... (top-k+1) / k!`.
pub fn binomial_signed(top: i64, k: u64) -> BigInt {
    if top >= 0 {
        return binomial(top as u64, k);
    }
    // binom(-t, k) = (-1)^k binom(t + k - 1, k)
    let t = top.unsigned_abs();
    let b = binomial(t + k - 1, k);
    if k % 2 == 0 {
        b
    } else {
        -b
    }
}

fn stirling_first_table() -> &'static Mutex<Vec<Vec<BigInt>>> {
    static TABLE: OnceLock<Mutex<Vec<Vec<BigInt>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![vec![BigInt::one()]]))
}

/// Signed Stirling numbers of the first kind:
/// `T(T-1)...(T-nu+1) = sum_j s(nu, j) T^j`.
pub fn stirling_first(nu: u64, j: u64) -> BigInt {
    if j > nu {
        return BigInt::zero();
    }
    let mut t = stirling_first_table().lock().expect("stirling table poisoned");
    while (t.len() as u64) <= nu {
        let k = t.len() as u64 - 1;
        let prev = t.last().unwrap().clone();
        let mut row = vec![BigInt::zero(); prev.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            row[i + 1] += c;
            row[i] -= c * BigInt::from(k);
        }
        t.push(row);
    }
    t[nu as usize][j as usize].clone()
}

/// Stirling numbers of the second kind, `T^a = sum_k S(a,k) T(T-1)...(T-k+1)`.
pub fn stirling_second(a: u64, k: u64) -> BigInt {
    if k > a {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for n in 1..=a {
        let mut next = vec![BigInt::zero(); (n + 1) as usize];
        for (j, c) in row.iter().enumerate() {
            next[j] += c * BigInt::from(j as u64);
            next[j + 1] += c;
        }
        row = next;
    }
    row[k as usize].clone()
}

/// Integer `i64` view of a small rational known to be integral.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Serializes big integers as decimal strings.
pub fn big_as_string<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Serializes rationals as their decimal string form `a` or `a/b`.
pub mod q_as_string {
    use super::Q;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub mod vec {
        use super::Q;
        use serde::ser::{SerializeSeq, Serializer};

        pub fn serialize<S: Serializer>(qs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(qs.len()))?;
            for q in qs {
                seq.serialize_element(&q.to_string())?;
            }
            seq.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    fn lp(pp: u64, m: u32) -> LevelParams {
        LevelParams::new(pp, m, 0).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&Q::zero(), p(3)), Val::Infinite);
        assert_eq!(vp(&q_frac(1, 15), p(2)), Val::Finite(0));
        assert_eq!(vp(&q_frac(9, 2), p(3)), Val::Finite(2));
        assert_eq!(vp(&q_frac(9, 2), p(2)), Val::Finite(-1));
    }

    #[test]
    fn rejects_composite() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
        assert!(LevelParams::new(9, 0, 0).is_err());
    }

    #[test]
    fn q_floor_examples() {
        assert_eq!(q_floor(7, &lp(2, 1)), 3);
        assert_eq!(q_floor(5, &lp(3, 0)), 5);
        assert_eq!(q_floor(0, &lp(5, 2)), 0);
    }

    #[test]
    fn legendre() {
        assert_eq!(vp_factorial(4, p(2)), 3);
        assert_eq!(vp_factorial(0, p(5)), 0);
        assert_eq!(vp_factorial(10, p(3)), 4);
    }

    #[test]
    fn dp_coeff_examples() {
        let c = dp_coeff(5, &lp(2, 1));
        assert_eq!(c.value, q_frac(1, 60));
        assert_eq!((c.q, c.s), (2, 1));
        assert_eq!(c.unit, q_frac(1, 15));
        assert_eq!(c.unit_valuation(p(2)), Val::Finite(0));
        assert_eq!(dp_coeff(0, &lp(7, 3)).value, q_int(1));
        assert_eq!(dp_coeff(3, &lp(3, 0)).value, q_int(1));
    }

    #[test]
    fn integrality_examples() {
        assert_eq!(integrality_ratio(1, 1, &lp(2, 1)), q_int(2));
        assert_eq!(integrality_ratio(0, 9, &lp(3, 2)), q_int(1));
        assert_eq!(integrality_ratio(2, 2, &lp(2, 1)), q_int(3));
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_first(3, 1), BigInt::from(2));
        assert_eq!(stirling_first(3, 2), BigInt::from(-3));
        assert_eq!(stirling_first(4, 2), BigInt::from(11));
        assert_eq!(stirling_first(6, 6), BigInt::one());
        assert_eq!(stirling_first(2, 5), BigInt::zero());
        assert_eq!(stirling_second(4, 2), BigInt::from(7));
    }

    #[test]
    fn signed_binomials() {
        assert_eq!(binomial_signed(-1, 3), BigInt::from(-1));
        assert_eq!(binomial_signed(-2, 2), BigInt::from(3));
        assert_eq!(binomial_signed(5, 2), BigInt::from(10));
    }
}
