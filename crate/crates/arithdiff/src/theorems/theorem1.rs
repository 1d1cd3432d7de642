//! Graded shadow of the first comparison theorem: in each degree `d`, the map
//! `gr xi` on `Sym^d(gl_2) / (h1 + h2, Casimir)` is injective, and `p^N` times
//! the lattice of global symbols lies in the image.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::generation::{basis_symbol, torsion_bound};
use crate::arith::{q_ratio, LevelParams, Q};
use crate::gl2::center::{casimir, trace_element};
use crate::gl2::pbw::{indices_of_degree, total_degree, Idx, PBWElement};
use crate::models::lattice::{rank_q, ZpLattice};
use crate::weyl::symbol_of;

use super::xi::xi;

/// Degree-`d` top part of a plain-basis element, as a symmetric polynomial.
fn top_symbol(a: &PBWElement, d: u32) -> BTreeMap<Idx, Q> {
    a.terms().filter(|(nu, _)| total_degree(nu) == d).map(|(nu, c)| (*nu, c.clone())).collect()
}

fn sym_mul(a: &BTreeMap<Idx, Q>, b: &BTreeMap<Idx, Q>) -> BTreeMap<Idx, Q> {
    let mut out: BTreeMap<Idx, Q> = BTreeMap::new();
    for (x, c) in a {
        for (y, e) in b {
            let z = [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]];
            *out.entry(z).or_insert_with(Q::zero) += c * e;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Columns of `gr xi` in degree `d`: the coefficients of `x^k d^{(x)d}` in the
/// symbol of `xi(e^a h1^b h2^c f^e)`.
fn gr_xi_columns(d: u32) -> BTreeMap<Idx, Vec<Q>> {
    indices_of_degree(d)
        .into_iter()
        .map(|nu| {
            let op = xi(&PBWElement::monomial(nu, Q::one()));
            let col = match op.order() {
                Some(o) if o == d => {
                    let s = symbol_of(&op).expect("nonzero");
                    (0..=2 * d).map(|k| s.coeff.coeff(k)).collect()
                }
                _ => vec![Q::zero(); (2 * d + 1) as usize],
            };
            (nu, col)
        })
        .collect()
}

fn apply(cols: &BTreeMap<Idx, Vec<Q>>, v: &BTreeMap<Idx, Q>, len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); len];
    for (nu, c) in v {
        for (z, w) in out.iter_mut().zip(&cols[nu]) {
            *z += c * w;
        }
    }
    out
}

/// The image of `gr xi` on the level-m graded piece of degree `d`, in
/// coordinates relative to `e_{d,k} = (q_d!/d!) x^k d^{(x)d}`.
pub fn graded_image_lattice(d: u32, params: &LevelParams) -> ZpLattice {
    let params = LevelParams { n: 0, ..*params };
    let scale = Q::one() / q_ratio(d as u64, &params);
    let gens: Vec<Vec<Q>> = indices_of_degree(d)
        .iter()
        .map(|nu| {
            let s = basis_symbol(nu, &params);
            (0..=2 * d).map(|k| s.coeff.coeff(k) * &scale).collect()
        })
        .collect();
    ZpLattice::from_generators(params.p, (2 * d + 1) as usize, &gens)
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Degree {
    pub d: u32,
    pub rank: usize,
    pub expected_rank: usize,
    /// `dim Sym^d - rank`.
    pub kernel_dim: usize,
    /// Rank of `(h1 + h2) Sym^{d-1} + Casimir Sym^{d-2}`.
    pub relations_rank: usize,
    pub relations_in_kernel: bool,
    /// Least `e` with `p^e L_0 ⊆ Im`.
    pub cokernel_exponent: i64,
    pub cosurjective: bool,
}

impl Theorem1Degree {
    pub fn passed(&self) -> bool {
        self.rank == self.expected_rank
            && self.relations_rank == self.kernel_dim
            && self.relations_in_kernel
            && self.cosurjective
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub p: u64,
    pub m: u32,
    pub degree_bound: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub degrees: Vec<Theorem1Degree>,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(Theorem1Degree::passed)
    }
}

pub fn theorem1_degree(d: u32, big_n: u32, params: &LevelParams) -> Theorem1Degree {
    let len = (2 * d + 1) as usize;
    let cols = gr_xi_columns(d);
    // rank of gr xi = rank of its transpose
    let rank = rank_q(&cols.values().cloned().collect::<Vec<_>>());
    let z1 = top_symbol(&trace_element(), 1);
    let z2 = top_symbol(&casimir(), 2);
    let mut rels: Vec<BTreeMap<Idx, Q>> = Vec::new();
    for (z, deg) in [(&z1, 1), (&z2, 2)] {
        if d >= deg {
            for mu in indices_of_degree(d - deg) {
                rels.push(sym_mul(z, &BTreeMap::from([(mu, Q::one())])));
            }
        }
    }
    let relations_in_kernel = rels.iter().all(|r| apply(&cols, r, len).iter().all(Zero::is_zero));
    let keys: Vec<Idx> = cols.keys().copied().collect();
    let rel_rows: Vec<Vec<Q>> =
        rels.iter().map(|r| keys.iter().map(|k| r.get(k).cloned().unwrap_or_default()).collect()).collect();
    let relations_rank = rank_q(&rel_rows);

    let image = graded_image_lattice(d, params);
    let l0 = ZpLattice::standard(params.p, len);
    let cokernel_exponent = (0..)
        .find(|&e| image.contains_lattice(&l0.scale_p(e)))
        .expect("full-rank image") as i64;
    Theorem1Degree {
        d,
        rank,
        expected_rank: len,
        kernel_dim: cols.len() - rank,
        relations_rank,
        relations_in_kernel,
        cokernel_exponent,
        cosurjective: l0.contains_lattice(&image) && image.contains_lattice(&l0.scale_p(big_n)),
    }
}

/// Runs every degree `0..=D` against the computed `N(m)`.
pub fn theorem1_graded_check(params: &LevelParams, degree_bound: u32) -> Theorem1Report {
    let params = LevelParams { n: 0, ..*params };
    let big_n = torsion_bound(&params, degree_bound).big_n;
    Theorem1Report {
        p: params.p.get(),
        m: params.m,
        degree_bound,
        big_n,
        degrees: (0..=degree_bound).map(|d| theorem1_degree(d, big_n, &params)).collect(),
    }
}
