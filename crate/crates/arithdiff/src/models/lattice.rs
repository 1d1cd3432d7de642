//! Full-rank lattices in `Z_(p)^N`, stored as integer lattices of p-power
//! index in Hermite normal form.
//!
//! A `Z_(p)`-lattice `M` with `p^K Z_(p)^N ⊆ M ⊆ Z_(p)^N` is determined by the
//! integer lattice `M ∩ Z^N`, which has p-power index and a canonical HNF.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{vp, vp_int, Prime, Val, Q};

/// Row-style Hermite normal form: upper triangular, positive pivots, entries
/// above a pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..dim {
        // gcd-combine all remaining rows on this column
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for row in m.into_iter() {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(pv) => {
                    let (a, b) = (&pv[col], &row[col]);
                    let eg = a.extended_gcd(b);
                    let (g, x, y) = (eg.gcd, eg.x, eg.y);
                    let (ag, bg) = (a / &g, b / &g);
                    let new_pv: Vec<BigInt> =
                        pv.iter().zip(&row).map(|(u, v)| &x * u + &y * v).collect();
                    let other: Vec<BigInt> =
                        pv.iter().zip(&row).map(|(u, v)| &ag * v - &bg * u).collect();
                    debug_assert!(other[col].is_zero());
                    if other.iter().any(|z| !z.is_zero()) {
                        rest.push(other);
                    }
                    pivot = Some(new_pv);
                }
            }
        }
        m = rest;
        if let Some(mut pv) = pivot {
            if pv[col].is_negative() {
                pv.iter_mut().for_each(|z| *z = -z.clone());
            }
            out.push(pv);
        }
    }
    // reduce entries above pivots
    let n = out.len();
    for i in 0..n {
        let col = out[i].iter().position(|x| !x.is_zero()).expect("nonzero row");
        let piv = out[i][col].clone();
        for j in 0..i {
            let q = out[j][col].div_floor(&piv);
            if !q.is_zero() {
                let ri = out[i].clone();
                for (z, w) in out[j].iter_mut().zip(ri) {
                    *z -= &q * w;
                }
            }
        }
    }
    out
}

/// Full-rank lattice in `Z_(p)^dim` represented by an integer HNF.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZpLattice {
    pub p: Prime,
    pub dim: usize,
    #[serde(with = "matrix_as_strings")]
    pub hnf: Vec<Vec<BigInt>>,
}

/// Integer matrices serialized as nested arrays of decimal strings.
mod matrix_as_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| x.parse::<BigInt>().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

fn prime_to_p_part(x: &BigInt, p: Prime) -> BigInt {
    let mut y = x.abs();
    let pb = p.big();
    while !y.is_zero() && (&y % &pb).is_zero() {
        y /= &pb;
    }
    y
}

impl ZpLattice {
    /// The standard lattice `Z_(p)^dim`.
    pub fn standard(p: Prime, dim: usize) -> ZpLattice {
        let hnf = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        ZpLattice { p, dim, hnf }
    }

    /// `Z_(p)`-span of p-integral rational vectors. Panics if the span is not
    /// of full rank or some entry is not p-integral.
    pub fn from_generators(p: Prime, dim: usize, gens: &[Vec<Q>]) -> ZpLattice {
        // clearing prime-to-p denominators multiplies each vector by a unit
        let ints: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim);
                let mut l = BigInt::one();
                for q in g {
                    assert!(vp(q, p).is_nonneg(), "generator entry {q} is not p-integral");
                    l = l.lcm(q.denom());
                }
                g.iter().map(|q| (q * Q::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        ZpLattice::from_integer_generators(p, dim, &ints)
    }

    pub fn from_integer_generators(p: Prime, dim: usize, gens: &[Vec<BigInt>]) -> ZpLattice {
        let h = hermite_normal_form(gens, dim);
        assert_eq!(h.len(), dim, "generators do not span a full-rank lattice");
        let det: BigInt = (0..dim).map(|i| h[i][i].clone()).product();
        let k = vp_int(&det, p).finite().expect("nonzero determinant");
        // p^K Z^N lies in the Z_(p)-span, so adding it yields the saturation
        let pk = p.pow(k as u32);
        let mut rows = h;
        for i in 0..dim {
            let mut r = vec![BigInt::zero(); dim];
            r[i] = pk.clone();
            rows.push(r);
        }
        let hnf = hermite_normal_form(&rows, dim);
        debug_assert!(hnf.iter().enumerate().all(|(i, r)| prime_to_p_part(&r[i], p).is_one()));
        ZpLattice { p, dim, hnf }
    }

    /// `p^e M`.
    pub fn scale_p(&self, e: u32) -> ZpLattice {
        let s = self.p.pow(e);
        let rows: Vec<Vec<BigInt>> =
            self.hnf.iter().map(|r| r.iter().map(|x| x * &s).collect()).collect();
        ZpLattice { p: self.p, dim: self.dim, hnf: hermite_normal_form(&rows, self.dim) }
    }

    /// Membership of a p-integral rational vector.
    pub fn contains(&self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.dim);
        if v.iter().any(|q| !vp(q, self.p).is_nonneg()) {
            return false;
        }
        let mut l = BigInt::one();
        for q in v {
            l = l.lcm(q.denom());
        }
        let mut rem: Vec<BigInt> =
            v.iter().map(|q| (q * Q::from_integer(l.clone())).to_integer()).collect();
        // triangular solve against the HNF rows
        for row in &self.hnf {
            let col = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let (q, r) = rem[col].div_rem(&row[col]);
            if !r.is_zero() {
                return false;
            }
            for (z, w) in rem.iter_mut().zip(row) {
                *z -= &q * w;
            }
        }
        rem.iter().all(|z| z.is_zero())
    }

    pub fn contains_lattice(&self, other: &ZpLattice) -> bool {
        other.hnf.iter().all(|r| {
            let v: Vec<Q> = r.iter().map(|x| Q::from_integer(x.clone())).collect();
            self.contains(&v)
        })
    }

    /// Largest `e` with `M ⊆ p^e Z_(p)^N`.
    pub fn optimal_exponent(&self) -> i64 {
        self.hnf
            .iter()
            .flatten()
            .filter(|x| !x.is_zero())
            .map(|x| vp_int(x, self.p))
            .min()
            .unwrap_or(Val::Infinite)
            .finite()
            .expect("full-rank lattice has a nonzero entry")
    }

    /// Index `[Z_(p)^N : M]` as a power of p.
    pub fn index_exponent(&self) -> i64 {
        self.hnf
            .iter()
            .enumerate()
            .map(|(i, r)| vp_int(&r[i], self.p).finite().expect("nonzero pivot"))
            .sum()
    }

    pub fn hnf_strings(&self) -> Vec<Vec<String>> {
        self.hnf.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

/// Solves `A x = b` over `Z_(p)` by elimination with full pivoting on the
/// valuation. Every elimination step is unimodular over `Z_(p)`, so a
/// solution exists iff each pivot's valuation is at most that of the
/// transformed right-hand side.
pub fn solve_zp(a: &[Vec<Q>], b: &[Q], p: Prime) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a.to_vec();
    let mut rhs: Vec<Q> = b.to_vec();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best: Option<(Val, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(rank) {
            for (j, x) in row.iter().enumerate().skip(rank) {
                if x.is_zero() {
                    continue;
                }
                let v = vp(x, p);
                if best.as_ref().map_or(true, |(bv, _, _)| v < *bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };
        m.swap(rank, i);
        rhs.swap(rank, i);
        for row in m.iter_mut() {
            row.swap(rank, j);
        }
        perm.swap(rank, j);
        let piv = m[rank][rank].clone();
        for r in rank + 1..rows {
            if m[r][rank].is_zero() {
                continue;
            }
            let f = &m[r][rank] / &piv;
            for c in rank..cols {
                let t = &f * &m[rank][c];
                m[r][c] -= t;
            }
            let t = &f * &rhs[rank];
            rhs[r] -= t;
        }
        rank += 1;
    }
    if rhs[rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![Q::zero(); cols];
    for i in (0..rank).rev() {
        let mut s = rhs[i].clone();
        for c in i + 1..cols {
            s -= &m[i][c] * &y[c];
        }
        let v = s / &m[i][i];
        if !vp(&v, p).is_nonneg() {
            return None;
        }
        y[i] = v;
    }
    let mut x = vec![Q::zero(); cols];
    for (k, &orig) in perm.iter().enumerate() {
        x[orig] = y[k].clone();
    }
    Some(x)
}

/// Rank over `Q` of a list of row vectors.
pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, piv);
        let pr = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pr[c];
            for (z, w) in row.iter_mut().zip(&pr) {
                *z -= &f * w;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q_frac, q_int};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&[bi(&[2, 4]), bi(&[0, 6])], 2);
        let b = hermite_normal_form(&[bi(&[2, -2]), bi(&[4, 8]), bi(&[2, 4])], 2);
        assert_eq!(a, b);
        assert_eq!(a, vec![bi(&[2, 4]), bi(&[0, 6])]);
    }

    #[test]
    fn saturation_drops_prime_to_p_index() {
        let p = Prime::new(3).unwrap();
        let l = ZpLattice::from_generators(p, 2, &[vec![q_int(5), q_int(0)], vec![q_int(0), q_frac(9, 7)]]);
        assert_eq!(l.hnf, vec![bi(&[1, 0]), bi(&[0, 9])]);
        assert!(l.contains(&[q_frac(1, 2), q_int(18)]));
        assert!(!l.contains(&[q_int(0), q_int(3)]));
        assert_eq!(l.index_exponent(), 2);
        assert!(ZpLattice::standard(p, 2).contains_lattice(&l));
        assert_eq!(l.scale_p(1).optimal_exponent(), 1);
    }

    #[test]
    fn solver() {
        let p = Prime::new(2).unwrap();
        let a = vec![vec![q_int(2), q_int(4)], vec![q_int(0), q_int(4)]];
        let x = solve_zp(&a, &[q_int(6), q_int(4)], p).unwrap();
        assert_eq!(x, vec![q_int(1), q_int(1)]);
        assert!(solve_zp(&a, &[q_int(1), q_int(0)], p).is_none());
        // 1/3 is a 2-adic unit, so this is solvable
        assert!(solve_zp(&a, &[q_int(2), q_int(0)], p).is_some());
    }
}
