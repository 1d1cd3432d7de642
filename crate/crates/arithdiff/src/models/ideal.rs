//! Membership in `(x - a, p^n)^d` and in the intersection over all residues
//! `a mod p^n`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::lattice::solve_zp;
use crate::arith::{vp, Prime, Val, Q};
use crate::error::ParamError;
use crate::poly::{taylor_shift, Poly};
use crate::weyl::Chart;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealSpec {
    pub n: u32,
    pub d: u32,
    pub chart: Chart,
}

impl IdealSpec {
    pub fn new(n: u32, d: u32) -> IdealSpec {
        IdealSpec { n, d, chart: Chart::X }
    }
}

fn check_integral(f: &Poly, p: Prime) -> Result<(), ParamError> {
    if f.is_p_integral(p) {
        Ok(())
    } else {
        Err(ParamError::NegativeValuation(f.to_string()))
    }
}

/// `f ∈ (t - a, p^n)^d` by the Taylor criterion: the coefficients `c_k` of
/// `f` in powers of `t - a` satisfy `vp(c_k) >= n (d - k)` for `k < d`.
pub fn ideal_membership(f: &Poly, a: &BigInt, spec: &IdealSpec, p: Prime) -> Result<bool, ParamError> {
    check_integral(f, p)?;
    let c = taylor_shift(f, &Q::from_integer(a.clone()));
    Ok((0..spec.d).all(|k| vp(&c.coeff(k), p) >= Val::Finite((spec.n * (spec.d - k)) as i64)))
}

/// `f ∈ ∩_a (t - a, p^n)^d` over `a = 0..p^n`.
pub fn in_ideal_all_residues(f: &Poly, spec: &IdealSpec, p: Prime) -> Result<bool, ParamError> {
    let pn = p.pow(spec.n);
    let mut a = BigInt::zero();
    while a < pn {
        if !ideal_membership(f, &a, spec, p)? {
            return Ok(false);
        }
        a += 1;
    }
    Ok(true)
}

/// Generators `p^{n(d-i)} (t - a)^i`, `i = 0..=d`.
pub fn ideal_generators(a: &BigInt, spec: &IdealSpec, p: Prime) -> Vec<Poly> {
    let lin = Poly::from_coeffs([-Q::from_integer(a.clone()), Q::from_integer(1.into())]);
    (0..=spec.d)
        .map(|i| lin.pow(i).scale(&p.qpow((spec.n * (spec.d - i)) as i64)))
        .collect()
}

/// Independent membership test: solves `f = sum_i g_i * p^{n(d-i)} (t - a)^i`
/// for `g_i ∈ Z_(p)[t]` with `deg(g_i) + i <= max(deg f, d)` as an exact linear
/// system over `Z_(p)`, and returns the `g_i` after checking the identity by
/// polynomial multiplication.
///
/// The degree bound loses nothing: in the variable `u = t - a` the ideal is
/// spanned by the monomials `p^{max(0, n(d-k))} u^k`.
pub fn membership_witness(f: &Poly, a: &BigInt, spec: &IdealSpec, p: Prime) -> Result<Option<Vec<Poly>>, ParamError> {
    check_integral(f, p)?;
    let top = f.degree().unwrap_or(0).max(spec.d);
    let gens = ideal_generators(a, spec, p);
    // columns: x^j * gens[i] for j + i <= top
    let mut cols: Vec<(usize, u32, Poly)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for j in 0..=(top - i as u32) {
            cols.push((i, j, g.shift_up(j)));
        }
    }
    let rows = (top + 1) as usize;
    let matrix: Vec<Vec<Q>> =
        (0..rows).map(|r| cols.iter().map(|(_, _, c)| c.coeff(r as u32)).collect()).collect();
    let rhs: Vec<Q> = (0..rows).map(|r| f.coeff(r as u32)).collect();
    let Some(x) = solve_zp(&matrix, &rhs, p) else {
        return Ok(None);
    };
    let mut parts = vec![Poly::zero(); gens.len()];
    for ((i, j, _), c) in cols.iter().zip(&x) {
        parts[*i].add_term(*j, c.clone());
    }
    let mut total = Poly::zero();
    for (g, h) in parts.iter().zip(&gens) {
        total = &total + &(g * h);
    }
    assert_eq!(&total, f, "witness does not recombine");
    assert!(parts.iter().all(|g| g.is_p_integral(p)));
    Ok(Some(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_int;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn examples() {
        let p = Prime::new(3).unwrap();
        let s = IdealSpec::new(1, 1);
        let px = Poly::from_i64(&[0, 3]);
        assert!(ideal_membership(&px, &b(0), &s, p).unwrap());
        assert!(!ideal_membership(&Poly::one(), &b(0), &s, p).unwrap());
        let f = Poly::from_i64(&[0, -9, 0, 9]);
        let s3 = IdealSpec::new(1, 3);
        for a in 0..3 {
            assert!(ideal_membership(&f, &b(a), &s3, p).unwrap());
            assert!(membership_witness(&f, &b(a), &s3, p).unwrap().is_some());
        }
        let bad = Poly::constant(crate::arith::q_frac(1, 3));
        assert!(ideal_membership(&bad, &b(0), &s, p).is_err());
    }

    #[test]
    fn depends_on_residue_only() {
        let p = Prime::new(2).unwrap();
        let s = IdealSpec::new(2, 2);
        let f = Poly::from_i64(&[4, 4, 1, 0, 3]);
        for a in 0..4 {
            assert_eq!(
                ideal_membership(&f, &b(a), &s, p).unwrap(),
                ideal_membership(&f, &b(a + 4), &s, p).unwrap()
            );
        }
        assert_eq!(f.coeff(0), q_int(4));
    }
}
