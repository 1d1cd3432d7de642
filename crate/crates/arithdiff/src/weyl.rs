//! Differential operators on the two standard charts of the projective line.
//!
//! The x-chart has coordinate `x`, the y-chart coordinate `y`, glued along
//! `xy = 1` with `d/dx = -y^2 d/dy`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, q_big, q_int, q_ratio, LevelParams, Prime, Q};
use crate::error::OperatorError;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    X,
    Y,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::X => Chart::Y,
            Chart::Y => Chart::X,
        }
    }

    fn var(self) -> &'static str {
        match self {
            Chart::X => "x",
            Chart::Y => "y",
        }
    }
}

/// `sum_k f_k(t) d_t^k` in normal form (all derivatives on the right).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    chart: Chart,
    terms: BTreeMap<u32, Poly>,
}

impl DiffOperator {
    pub fn zero(chart: Chart) -> DiffOperator {
        DiffOperator { chart, terms: BTreeMap::new() }
    }

    pub fn identity(chart: Chart) -> DiffOperator {
        DiffOperator::term(chart, Poly::one(), 0)
    }

    /// `f * d^k`.
    pub fn term(chart: Chart, f: Poly, k: u32) -> DiffOperator {
        let mut op = DiffOperator::zero(chart);
        op.add_term(k, f);
        op
    }

    /// `c * t^i * d^k`.
    pub fn monomial(chart: Chart, c: Q, i: u32, k: u32) -> DiffOperator {
        DiffOperator::term(chart, Poly::monomial(c, i), k)
    }

    /// The derivation `d_t`.
    pub fn d(chart: Chart) -> DiffOperator {
        DiffOperator::monomial(chart, Q::one(), 0, 1)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, k: u32) -> Poly {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.terms.iter().map(|(k, f)| (*k, f))
    }

    pub fn add_term(&mut self, k: u32, f: Poly) {
        if f.is_zero() {
            return;
        }
        let merged = match self.terms.get(&k) {
            Some(g) => g + &f,
            None => f,
        };
        if merged.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, merged);
        }
    }

    pub fn add(&self, other: &DiffOperator) -> Result<DiffOperator, OperatorError> {
        if self.chart != other.chart {
            return Err(OperatorError::ChartMismatch);
        }
        let mut out = self.clone();
        for (k, f) in other.terms() {
            out.add_term(k, f.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> DiffOperator {
        let mut out = DiffOperator::zero(self.chart);
        for (k, f) in self.terms() {
            out.add_term(k, f.scale(c));
        }
        out
    }

    pub fn sub(&self, other: &DiffOperator) -> Result<DiffOperator, OperatorError> {
        self.add(&other.scale(&-Q::one()))
    }

    /// Coefficients relative to `(q_k!/k!) d^k` instead of `d^k`.
    pub fn dp_normal_form(&self, params: &LevelParams) -> BTreeMap<u32, Poly> {
        self.terms()
            .map(|(k, f)| (k, f.scale(&(Q::one() / q_ratio(k as u64, params)))))
            .collect()
    }
}

/// Normal form of `A o B`, using `d^k f = sum_j binom(k,j) f^(j) d^(k-j)`.
pub fn compose(a: &DiffOperator, b: &DiffOperator) -> Result<DiffOperator, OperatorError> {
    if a.chart != b.chart {
        return Err(OperatorError::ChartMismatch);
    }
    let mut out = DiffOperator::zero(a.chart);
    for (i, ai) in a.terms() {
        for (j, bj) in b.terms() {
            for l in 0..=i {
                let deriv = bj.derivative(l);
                if deriv.is_zero() {
                    continue;
                }
                let c = q_big(binomial(i as u64, l as u64));
                out.add_term(i - l + j, (ai * &deriv).scale(&c));
            }
        }
    }
    Ok(out)
}

/// `D (D-1) ... (D-nu+1) / nu!`.
pub fn binomial_of_operator(d: &DiffOperator, nu: u32) -> DiffOperator {
    let mut acc = DiffOperator::identity(d.chart);
    for i in 0..nu {
        let shifted = d
            .sub(&DiffOperator::identity(d.chart).scale(&q_int(i as i64)))
            .expect("same chart");
        acc = compose(&acc, &shifted).expect("same chart");
    }
    let mut fact = Q::one();
    for i in 1..=nu {
        fact *= q_int(i as i64);
    }
    acc.scale(&(Q::one() / fact))
}

/// Laurent polynomial used for the intermediate of a chart change.
pub type Laurent = BTreeMap<i64, Q>;

fn laurent_add(target: &mut Laurent, k: i64, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = target.entry(k).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        target.remove(&k);
    }
}

/// `(-s^2 d_s)^k` in normal form on the other chart.
fn pullback_power(chart: Chart, k: u32) -> DiffOperator {
    let base = DiffOperator::monomial(chart, -Q::one(), 2, 1);
    let mut acc = DiffOperator::identity(chart);
    for _ in 0..k {
        acc = compose(&acc, &base).expect("same chart");
    }
    acc
}

/// The operator on the other chart with Laurent coefficients.
pub fn chart_swap_laurent(a: &DiffOperator) -> BTreeMap<u32, Laurent> {
    let target = a.chart.other();
    let mut out: BTreeMap<u32, Laurent> = BTreeMap::new();
    for (k, f) in a.terms() {
        let pk = pullback_power(target, k);
        for (j, g) in pk.terms() {
            let entry = out.entry(j).or_default();
            for (i, c) in f.terms() {
                for (l, e) in g.terms() {
                    laurent_add(entry, l as i64 - i as i64, c * e);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_empty());
    out
}

/// The same operator written on the other chart, if it has polynomial
/// coefficients there.
pub fn chart_swap(a: &DiffOperator) -> Result<DiffOperator, OperatorError> {
    let target = a.chart.other();
    let mut out = DiffOperator::zero(target);
    for (j, lau) in chart_swap_laurent(a) {
        let mut poly = Poly::zero();
        for (e, c) in lau {
            if e < 0 {
                return Err(OperatorError::NotExtendable(format!(
                    "coefficient of d^{j} has a pole of order {} at {}=0",
                    -e,
                    target.var()
                )));
            }
            poly.add_term(e as u32, c);
        }
        out.add_term(j, poly);
    }
    Ok(out)
}

fn level_m_shape_ok(a: &DiffOperator, params: &LevelParams) -> bool {
    a.dp_normal_form(params)
        .values()
        .all(|g| g.is_p_integral(params.p))
}

/// Whether `A` is a global section of the level-m operator sheaf: p-integral
/// coefficients relative to `(q_k!/k!) d^k` on both charts.
pub fn is_global_section_level_m(a: &DiffOperator, params: &LevelParams) -> bool {
    if !level_m_shape_ok(a, params) {
        return false;
    }
    match chart_swap(a) {
        Ok(b) => level_m_shape_ok(&b, params),
        Err(_) => false,
    }
}

/// Symbol-level analogue: `S = (q_d!/d!) g(x) d^{(x) d}` with `g` p-integral
/// and of degree at most `2d`.
pub fn is_global_symbol_level_m(s: &GradedSymbol, params: &LevelParams) -> bool {
    let g = s.coeff.scale(&(Q::one() / q_ratio(s.degree as u64, params)));
    g.is_p_integral(params.p) && g.degree().map_or(true, |k| k <= 2 * s.degree)
}

/// `coeff * d^{(x) d}`: a section of the `d`-th tensor power of the tangent sheaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSymbol {
    pub chart: Chart,
    pub degree: u32,
    pub coeff: Poly,
}

impl GradedSymbol {
    pub fn new(chart: Chart, degree: u32, coeff: Poly) -> GradedSymbol {
        GradedSymbol { chart, degree, coeff }
    }

    /// `c x^k d^{(x) d}` on the x-chart.
    pub fn monomial(c: Q, k: u32, degree: u32) -> GradedSymbol {
        GradedSymbol::new(Chart::X, degree, Poly::monomial(c, k))
    }

    pub fn mul(&self, other: &GradedSymbol) -> Result<GradedSymbol, OperatorError> {
        if self.chart != other.chart {
            return Err(OperatorError::ChartMismatch);
        }
        Ok(GradedSymbol::new(
            self.chart,
            self.degree + other.degree,
            &self.coeff * &other.coeff,
        ))
    }

    pub fn scale(&self, c: &Q) -> GradedSymbol {
        GradedSymbol::new(self.chart, self.degree, self.coeff.scale(c))
    }

    /// `g(y) = (-1)^d y^{2d} f(1/y)`; `None` if `deg f > 2d`.
    pub fn to_other_chart(&self) -> Option<GradedSymbol> {
        let d = self.degree;
        let mut g = Poly::zero();
        let sign = if d % 2 == 0 { Q::one() } else { -Q::one() };
        for (k, c) in self.coeff.terms() {
            if k > 2 * d {
                return None;
            }
            g.add_term(2 * d - k, c * &sign);
        }
        Some(GradedSymbol::new(self.chart.other(), d, g))
    }
}

impl fmt::Display for GradedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*D{}^(x){}", self.coeff, self.chart.var(), self.degree)
    }
}

/// The basis `x^k d^{(x) d}`, `0 <= k <= 2d`, of global sections.
pub fn h0_tensor_basis(d: u32) -> Vec<GradedSymbol> {
    (0..=2 * d)
        .map(|k| GradedSymbol::monomial(Q::one(), k, d))
        .collect()
}

/// Principal symbol: the top-order term read as a commutative symbol.
pub fn symbol_of(a: &DiffOperator) -> Result<GradedSymbol, OperatorError> {
    let k = a.order().ok_or(OperatorError::ZeroOperator)?;
    Ok(GradedSymbol::new(a.chart, k, a.coeff(k)))
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0*{}^0*D{}^0", self.chart.var(), self.chart.var());
        }
        let v = self.chart.var();
        let mut first = true;
        for (k, poly) in self.terms() {
            for (i, c) in poly.terms() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{c}*{v}^{i}*D{v}^{k}")?;
            }
        }
        Ok(())
    }
}

mod parse {
    use super::*;
    use num_bigint::BigInt;

    struct Cursor<'a> {
        bytes: &'a [u8],
        pos: usize,
    }

    impl Cursor<'_> {
        fn err(&self, msg: &str) -> OperatorError {
            OperatorError::Parse { pos: self.pos, msg: msg.to_string() }
        }

        fn peek(&self) -> Option<u8> {
            self.bytes.get(self.pos).copied()
        }

        fn eat(&mut self, lit: &str) -> bool {
            if self.bytes[self.pos..].starts_with(lit.as_bytes()) {
                self.pos += lit.len();
                true
            } else {
                false
            }
        }

        fn expect(&mut self, lit: &str) -> Result<(), OperatorError> {
            if self.eat(lit) {
                Ok(())
            } else {
                Err(self.err(&format!("expected '{lit}'")))
            }
        }

        fn digits(&mut self) -> Result<&str, OperatorError> {
            let start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected digits"));
            }
            Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
        }

        fn rational(&mut self) -> Result<Q, OperatorError> {
            let neg = self.eat("-");
            let num: BigInt = self.digits()?.parse().expect("digits");
            let den: BigInt = if self.eat("/") {
                self.digits()?.parse().expect("digits")
            } else {
                BigInt::one()
            };
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            let q = Q::new(num, den);
            Ok(if neg { -q } else { q })
        }

        fn exponent(&mut self) -> Result<u32, OperatorError> {
            self.digits()?
                .parse()
                .map_err(|_| self.err("exponent out of range"))
        }
    }

    /// Parses `c*x^k*Dx^j + ...` (or the same with `y`, `Dy`).
    pub fn parse_operator(text: &str) -> Result<DiffOperator, OperatorError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cur = Cursor { bytes: compact.as_bytes(), pos: 0 };
        let mut chart: Option<Chart> = None;
        let mut terms = Vec::new();
        loop {
            let c = cur.rational()?;
            cur.expect("*")?;
            let this_chart = if cur.eat("x^") {
                Chart::X
            } else if cur.eat("y^") {
                Chart::Y
            } else {
                return Err(cur.err("expected 'x^' or 'y^'"));
            };
            let i = cur.exponent()?;
            cur.expect("*")?;
            cur.expect(match this_chart {
                Chart::X => "Dx^",
                Chart::Y => "Dy^",
            })?;
            let k = cur.exponent()?;
            match chart {
                None => chart = Some(this_chart),
                Some(ch) if ch != this_chart => return Err(OperatorError::ChartMismatch),
                _ => {}
            }
            terms.push((c, i, k));
            if cur.peek().is_none() {
                break;
            }
            cur.expect("+")?;
        }
        let chart = chart.expect("at least one term");
        let mut op = DiffOperator::zero(chart);
        for (c, i, k) in terms {
            op.add_term(k, Poly::monomial(c, i));
        }
        Ok(op)
    }
}

pub use parse::parse_operator;

/// Checks `p`-integrality of all coefficients.
pub fn operator_is_p_integral(a: &DiffOperator, p: Prime) -> bool {
    a.terms().all(|(_, f)| f.is_p_integral(p))
}
