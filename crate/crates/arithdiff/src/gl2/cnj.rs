//! Rewriting `p^{n nu} (T choose nu)` in the divided powers `(p^n T)^j / j!`.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{factorial, q_big, stirling_first, vp, LevelParams, Prime, Val, Q};
use crate::poly::Poly;

/// The range `n >= 1`, and `n >= 2` when `p = 2`, where the coefficients are
/// known to be p-integral.
pub fn in_hypothesis_range(p: Prime, n: u32) -> bool {
    n >= 1 && (p.get() != 2 || n >= 2)
}

/// `c_{nu,j} = s(nu,j) j! p^{n(nu-j)} / nu!` for `j = 1..=nu`.
pub fn cnj_coefficients(nu: u32, params: &LevelParams) -> Vec<Q> {
    let p = params.p;
    let nf = q_big(factorial(nu as u64));
    let coeffs: Vec<Q> = (1..=nu)
        .map(|j| {
            let s = q_big(stirling_first(nu as u64, j as u64) * factorial(j as u64));
            s * p.qpow((params.n * (nu - j)) as i64) / &nf
        })
        .collect();
    if in_hypothesis_range(p, params.n) {
        for (j, c) in coeffs.iter().enumerate() {
            assert!(
                vp(c, p).is_nonneg(),
                "c_({nu},{}) = {c} is not {}-integral",
                j + 1,
                p.get()
            );
        }
    }
    coeffs
}

/// Checks `p^{n nu} (T choose nu) = sum_j c_{nu,j} (p^n T)^j / j!` as polynomials in `T`.
pub fn cnj_identity_holds(nu: u32, coeffs: &[Q], params: &LevelParams) -> bool {
    let pn = params.p.qpow(params.n as i64);
    let t = Poly::x();
    let mut lhs = Poly::one();
    for i in 0..nu {
        lhs = &lhs * &(&t - &Poly::constant(Q::from_integer(i.into())));
    }
    let lhs = lhs.scale(&(params.p.qpow((params.n * nu) as i64) / q_big(factorial(nu as u64))));
    let mut rhs = Poly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        let j = j as u32 + 1;
        let term = Poly::monomial(pn.clone(), 1).pow(j);
        rhs = &rhs + &term.scale(&(c / q_big(factorial(j as u64))));
    }
    if nu == 0 {
        rhs = Poly::one();
    }
    lhs == rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct CnjRow {
    pub nu: u32,
    pub in_range: bool,
    pub min_valuation: Val,
    pub identity_ok: bool,
}

/// Minimum valuation of `c_{nu,j}` over `j`, without asserting integrality.
pub fn cnj_row(nu: u32, params: &LevelParams) -> CnjRow {
    let p = params.p;
    let nf = q_big(factorial(nu as u64));
    let coeffs: Vec<Q> = (1..=nu)
        .map(|j| {
            q_big(stirling_first(nu as u64, j as u64) * factorial(j as u64))
                * p.qpow((params.n * (nu - j)) as i64)
                / &nf
        })
        .collect();
    let min_valuation =
        coeffs.iter().filter(|c| !c.is_zero()).map(|c| vp(c, p)).min().unwrap_or(Val::Infinite);
    CnjRow {
        nu,
        in_range: in_hypothesis_range(p, params.n),
        min_valuation,
        identity_ok: cnj_identity_holds(nu, &coeffs, params),
    }
}

/// `(p^n h choose nu)` and `p^{n nu} (h choose nu)` as polynomials in `h`.
/// They are different elements, although both are written with a binomial.
pub fn caution_pair(nu: u32, params: &LevelParams) -> (Poly, Poly) {
    let pn = params.p.qpow(params.n as i64);
    let h = Poly::x();
    let falling = |x: &Poly| {
        let mut acc = Poly::one();
        for i in 0..nu {
            acc = &acc * &(x - &Poly::constant(Q::from_integer(i.into())));
        }
        acc.scale(&(Q::from_integer(1.into()) / q_big(factorial(nu as u64))))
    };
    let scaled_arg = falling(&h.scale(&pn));
    let scaled_out = falling(&h).scale(&params.p.qpow((params.n * nu) as i64));
    (scaled_arg, scaled_out)
}
