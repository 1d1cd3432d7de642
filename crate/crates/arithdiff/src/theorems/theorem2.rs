//! Degree-filtered shadow of the second comparison theorem, which sandwiches
//! the operators on the n-th blow-up between the images of the congruence
//! levels `n` and `n' = floor(n (p-1)/(p+1))`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::generation::torsion_bound;
use super::theorem1::graded_image_lattice;
use super::xi::xi_basis;
use crate::arith::{binomial, binomial_ratio, q_factorial, q_ratio, LevelParams, Prime, Q};
use crate::gl2::pbw::{indices_up_to, Idx};
use crate::models::charts::{enumerate_charts, ChartKind, ChartTransform};
use crate::models::ideal::IdealSpec;
use crate::models::sections::{extension_test_on, global_section_lattice, sandwich_c};
use crate::poly::Poly;
use crate::weyl::{chart_swap, compose, is_global_section_level_m, Chart, DiffOperator, GradedSymbol};

/// `floor(n (p-1) / (p+1))`.
pub fn n_prime(n: u32, p: Prime) -> u32 {
    (n as u64 * (p.get() - 1) / (p.get() + 1)) as u32
}

/// `n c(d) >= d n'`, the inequality behind the right inclusion.
pub fn right_inequality(n: u32, d: u32, p: Prime) -> bool {
    n * sandwich_c(d, p) >= d * n_prime(n, p)
}

/// Every `(p, n, d)` violating [`right_inequality`] in the given ranges.
pub fn right_inequality_sweep(primes: &[Prime], n_max: u32, d_max: u32) -> Vec<(u64, u32, u32)> {
    let mut bad = Vec::new();
    for &p in primes {
        for n in 0..=n_max {
            for d in 0..=d_max {
                if !right_inequality(n, d, p) {
                    bad.push((p.get(), n, d));
                }
            }
        }
    }
    bad
}

/// `A` in the chart coordinate `t`, `x = c + p^s t`. `A` must already live
/// on the chart of `tr`.
#[cfg(test)]
fn substitute_chart(a: &DiffOperator, tr: &ChartTransform, p: Prime) -> DiffOperator {
    debug_assert_eq!(a.chart(), tr.chart);
    let ps = p.qpow(tr.scale as i64);
    let center = Q::from_integer(tr.center.clone());
    let mut out = DiffOperator::zero(tr.chart);
    for (k, f) in a.terms() {
        out.add_term(k, f.substitute_affine(&center, &ps).scale(&p.qpow(-((tr.scale * k) as i64))));
    }
    out
}

/// Same, moving to the y-chart first if needed. `None` if that has poles.
#[cfg(test)]
fn operator_on_chart(a: &DiffOperator, tr: &ChartTransform, p: Prime) -> Option<DiffOperator> {
    let on = if a.chart() == tr.chart { a.clone() } else { chart_swap(a).ok()? };
    Some(substitute_chart(&on, tr, p))
}

#[cfg(test)]
fn level_m_integral(a: &DiffOperator, params: &LevelParams) -> bool {
    a.dp_normal_form(params).values().all(|g| g.is_p_integral(params.p))
}

/// p-integral coefficients of the level-m normal form, reduced mod `p^e`.
struct Residues {
    modulus: BigInt,
    coeffs: Vec<(u32, Vec<BigInt>)>,
    binom: Vec<Vec<BigInt>>,
}

impl Residues {
    fn new(a: &DiffOperator, params: &LevelParams, e: u32) -> Residues {
        let modulus = params.p.pow(e);
        let coeffs = a
            .dp_normal_form(params)
            .into_iter()
            .map(|(k, g)| {
                let v = g
                    .dense()
                    .iter()
                    .map(|c| {
                        let inv = c.denom().modinv(&modulus).expect("p-integral");
                        (c.numer() * inv).mod_floor(&modulus)
                    })
                    .collect::<Vec<BigInt>>();
                (k, v)
            })
            .collect::<Vec<_>>();
        let len = coeffs.iter().map(|(_, v)| v.len()).max().unwrap_or(0) as u64;
        let binom = (0..len).map(|i| (0..=i).map(|j| binomial(i, j)).collect()).collect();
        Residues { modulus, coeffs, binom }
    }

    /// Level-m integrality in `t` with `x = c + p^s t`: the Taylor
    /// coefficients `T_j` of `g_k` at `c` need `vp(T_j) >= s (k - j)`.
    fn chart_ok(&self, tr: &ChartTransform, p: Prime) -> bool {
        let c = tr.center.mod_floor(&self.modulus);
        self.coeffs.iter().all(|(k, g)| {
            (0..*k).all(|j| {
                let m = p.pow(tr.scale * (k - j));
                let mut t = BigInt::zero();
                let mut cp = BigInt::one();
                for i in j as usize..g.len() {
                    t += &g[i] * &self.binom[i][j as usize] * &cp;
                    cp = (cp * &c) % &m;
                }
                (t % &m).is_zero()
            })
        })
    }
}

/// `(q_nu!/nu!) p^{n nu} x^nu d^nu` against the expansion in powers of `x - b`:
/// `sum_k [q_nu!/(q_k! q_{nu-k}!)] p^{nk} b^{nu-k} ((q_k!/k!) (x-b)^k d^k)((q_{nu-k}!/(nu-k)!) (p^n d)^{nu-k})`.
/// Returns whether the identity holds and every bracketed ratio is integral.
pub fn calc_identity(nu: u32, b: &BigInt, params: &LevelParams) -> bool {
    let p = params.p;
    let n = params.n as i64;
    let lhs = DiffOperator::monomial(Chart::X, q_ratio(nu as u64, params) * p.qpow(n * nu as i64), nu, nu);
    let bq = Q::from_integer(b.clone());
    let xb = Poly::from_coeffs([-bq.clone(), Q::one()]);
    let mut rhs = DiffOperator::zero(Chart::X);
    let mut ratios_ok = true;
    for k in 0..=nu {
        let ratio = binomial_ratio(nu as u64, k as u64, params);
        ratios_ok &= ratio.is_integer();
        let scalar = &ratio * p.qpow(n * k as i64) * num_traits::pow(bq.clone(), (nu - k) as usize);
        let left = DiffOperator::term(Chart::X, xb.pow(k).scale(&q_ratio(k as u64, params)), k);
        let right = DiffOperator::monomial(
            Chart::X,
            q_ratio((nu - k) as u64, params) * p.qpow(n * (nu - k) as i64),
            0,
            nu - k,
        );
        let t = compose(&left, &right).expect("x-chart").scale(&scalar);
        rhs = rhs.add(&t).expect("x-chart");
    }
    ratios_ok && lhs == rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct LeftFailure {
    pub nu: Idx,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RightDegree {
    pub d: u32,
    pub c: u32,
    pub inequality: bool,
    /// `p^N L(n,d) ⊆ p^{d n'} Im_d`.
    pub lattice_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub n_prime: u32,
    pub degree_bound: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub generators_checked: usize,
    pub charts_checked: usize,
    pub calc_checked: usize,
    pub left_failures: Vec<LeftFailure>,
    pub calc_failures: Vec<(u32, String)>,
    pub right: Vec<RightDegree>,
}

impl Theorem2Report {
    pub fn passed(&self) -> bool {
        self.left_failures.is_empty()
            && self.calc_failures.is_empty()
            && self.right.iter().all(|r| r.inequality && r.lattice_ok)
    }
}

/// Why `xi` of a level-(m,n) generator fails to be a section on the blow-up.
fn left_check(nu: &Idx, charts: &[ChartTransform], discs: &[ChartTransform], params: &LevelParams) -> Option<String> {
    let level = LevelParams { n: 0, ..*params };
    let p = params.p;
    let op = xi_basis(nu, params);
    if !is_global_section_level_m(&op, &level) {
        return Some("not a global level-m operator on the line".into());
    }
    // lower-order parts are not symbols on their own; only the principal one is
    let k = op.order().expect("basis elements map to nonzero operators");
    let sym = GradedSymbol::new(Chart::X, k, op.coeff(k).scale(&(Q::one() / q_ratio(k as u64, &level))));
    if !extension_test_on(&sym, discs, p) {
        return Some("principal symbol does not extend".into());
    }
    let Ok(swapped) = chart_swap(&op) else {
        return Some("has a pole at infinity".into());
    };
    let top = charts.iter().map(|t| t.scale).max().unwrap_or(0) * k;
    let (rx, ry) = (Residues::new(&op, &level, top), Residues::new(&swapped, &level, top));
    for tr in charts {
        let r = if tr.chart == Chart::X { &rx } else { &ry };
        if !r.chart_ok(tr, p) {
            return Some(format!("not integral on chart {tr:?}"));
        }
    }
    None
}

pub fn theorem2_check(params: &LevelParams, degree_bound: u32) -> Theorem2Report {
    let p = params.p;
    let level = LevelParams { n: 0, ..*params };
    let np = n_prime(params.n, p);
    let all = enumerate_charts(p, params.n);
    let transforms = |keep: fn(ChartKind) -> bool| -> Vec<ChartTransform> {
        all.iter().filter(|c| keep(c.kind)).filter_map(|c| c.transform(p)).collect()
    };
    let charts = transforms(|k| k != ChartKind::Interior);
    let discs = transforms(|k| k == ChartKind::ResidualDisc);
    let gens = indices_up_to(degree_bound);
    let left_failures: Vec<LeftFailure> = gens
        .par_iter()
        .filter_map(|nu| left_check(nu, &charts, &discs, params).map(|reason| LeftFailure { nu: *nu, reason }))
        .collect();

    let centers: BTreeSet<BigInt> =
        charts.iter().filter(|t| t.chart == Chart::X).map(|t| t.center.clone()).collect();
    let mut calc_failures = Vec::new();
    let mut calc_checked = 0;
    for nu in 0..=degree_bound {
        for b in &centers {
            calc_checked += 1;
            if !calc_identity(nu, b, params) {
                calc_failures.push((nu, b.to_string()));
            }
        }
    }

    let big_n = torsion_bound(&level, degree_bound).big_n;
    let right = (1..=degree_bound)
        .map(|d| {
            let l = global_section_lattice(&IdealSpec::new(params.n, d), &level).lattice;
            let im = graded_image_lattice(d, &level);
            RightDegree {
                d,
                c: sandwich_c(d, p),
                inequality: right_inequality(params.n, d, p),
                lattice_ok: im.scale_p(d * np).contains_lattice(&l.scale_p(big_n)),
            }
        })
        .collect();

    Theorem2Report {
        p: p.get(),
        n: params.n,
        m: params.m,
        n_prime: np,
        degree_bound,
        big_n,
        generators_checked: gens.len(),
        charts_checked: charts.len(),
        calc_checked,
        left_failures,
        calc_failures,
        right,
    }
}

/// `q_nu!/(q_k! q_{nu-k}!)` is an integer for all `k <= nu <= top`; returns
/// the first failure.
pub fn binomial_ratio_sweep(top: u64, params: &LevelParams) -> Option<(u64, u64)> {
    for nu in 0..=top {
        let qn = q_factorial(nu, params);
        for k in 0..=nu {
            let den = q_factorial(k, params) * q_factorial(nu - k, params);
            if !(&qn % den).is_zero() {
                return Some((nu, k));
            }
        }
    }
    None
}
