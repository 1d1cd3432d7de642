//! Global sections of `I_{n,d} T^{(x)d}` on the projective line as lattices in
//! the basis `x^k d^{(x)d}`, `k = 0..=2d`, and the checks built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::charts::{enumerate_charts, to_chart, ChartKind, ChartTransform};
use super::ideal::{in_ideal_all_residues, IdealSpec};
use super::lattice::{hermite_normal_form, ZpLattice};
use crate::arith::{binomial, q_ratio, vp_int, LevelParams, Prime, Q};
use crate::poly::Poly;
use crate::weyl::{Chart, GradedSymbol};

/// The lattice of `f` with `f(x) d^{(x)d}` global on the blow-up, plus the
/// level-m scalar `q_d!/d!` by which the level-m lattice differs.
#[derive(Clone, Debug, Serialize)]
pub struct SectionLattice {
    pub p: u64,
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub lattice: ZpLattice,
    #[serde(with = "crate::arith::q_as_string")]
    pub level_scalar: Q,
}

/// Linear forms on `(f_0, ..., f_{2d})` giving the Taylor coefficients at `a`,
/// on the x-chart and (through `y^{2d} f(1/y)`) on the y-chart.
fn taylor_forms(d: u32, a: &BigInt) -> Vec<(Vec<BigInt>, u32)> {
    let dim = (2 * d + 1) as usize;
    let mut out = Vec::new();
    for k in 0..d {
        let mut x_form = vec![BigInt::zero(); dim];
        let mut y_form = vec![BigInt::zero(); dim];
        for j in k..=2 * d {
            let c = binomial(j as u64, k as u64) * num_traits::pow(a.clone(), (j - k) as usize);
            x_form[j as usize] = c.clone();
            y_form[(2 * d - j) as usize] = c;
        }
        out.push((x_form, k));
        out.push((y_form, k));
    }
    out
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mod_inverse(u: &BigInt, m: &BigInt) -> BigInt {
    let eg = u.mod_floor(m).extended_gcd(m);
    assert!(eg.gcd.is_one(), "not a unit");
    eg.x.mod_floor(m)
}

/// Replaces the basis by one of `{v ∈ span : form(v) ≡ 0 mod p^e}`.
fn shear(basis: &mut [Vec<BigInt>], form: &[BigInt], e: u32, p: Prime) {
    let vals: Vec<BigInt> = basis.iter().map(|v| dot(v, form)).collect();
    let Some((piv, t)) = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, vp_int(v, p).finite().expect("nonzero") as u32))
        .min_by_key(|&(_, t)| t)
    else {
        return;
    };
    if t >= e {
        return;
    }
    let pt = p.pow(t);
    let modulus = p.pow(e - t);
    let u = &vals[piv] / &pt;
    let uinv = mod_inverse(&u, &modulus);
    let pv = basis[piv].clone();
    for (j, v) in basis.iter_mut().enumerate() {
        if j == piv || vals[j].is_zero() {
            continue;
        }
        let w = &vals[j] / &pt;
        let c = (w * &uinv).mod_floor(&modulus);
        if !c.is_zero() {
            for (z, q) in v.iter_mut().zip(&pv) {
                *z -= &c * q;
            }
        }
    }
    for z in basis[piv].iter_mut() {
        *z *= &modulus;
    }
}

/// `L(n,d)`: all integral `f` of degree at most `2d` satisfying the Taylor
/// conditions at every residue `a mod p^n` on both charts.
pub fn global_section_lattice(spec: &IdealSpec, params: &LevelParams) -> SectionLattice {
    let p = params.p;
    let (n, d) = (spec.n, spec.d);
    let dim = (2 * d + 1) as usize;
    let mut basis: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let pn = p.pow(n);
    let mut a = BigInt::zero();
    while a < pn {
        for (form, k) in taylor_forms(d, &a) {
            shear(&mut basis, &form, n * (d - k), p);
        }
        // keep entries small
        basis = hermite_normal_form(&basis, dim);
        a += 1;
    }
    SectionLattice {
        p: p.get(),
        n,
        d,
        m: params.m,
        lattice: ZpLattice::from_integer_generators(p, dim, &basis),
        level_scalar: q_ratio(d as u64, params),
    }
}

/// Coefficient vector `(f_0, ..., f_{2d})` of a polynomial.
pub fn coeff_vector(f: &Poly, d: u32) -> Vec<Q> {
    (0..=2 * d).map(|k| f.coeff(k)).collect()
}

/// `f d^{(x)d}` lies in `I_{n,d} T^{(x)d}`: the Taylor conditions on both charts.
pub fn symbol_in_ideal_sheaf(f: &Poly, spec: &IdealSpec, p: Prime) -> bool {
    let s = GradedSymbol::new(Chart::X, spec.d, f.clone());
    let Some(g) = s.to_other_chart() else { return false };
    in_ideal_all_residues(f, spec, p).unwrap_or(false)
        && in_ideal_all_residues(&g.coeff, spec, p).unwrap_or(false)
}

/// Reproducible integral test symbols of degree `d`: each coefficient is
/// `c p^e` with `|c| <= 20` and `e` drawn above a per-symbol floor in
/// `0..=n d`, so that both outcomes of the membership test occur.
pub fn seeded_integral_symbols(d: u32, n: u32, p: Prime, count: usize, seed: u64) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = n * d;
    (0..count)
        .map(|_| {
            let floor = rng.gen_range(0..=top);
            Poly::from_coeffs((0..=2 * d).map(|_| {
                let c: i64 = rng.gen_range(-20..=20);
                let e = rng.gen_range(floor..=top);
                Q::from_integer(BigInt::from(c) * p.pow(e))
            }))
        })
        .collect()
}

/// `c = ceil(d (p-1) / (p+1))`.
pub fn sandwich_c(d: u32, p: Prime) -> u32 {
    let (num, den) = (d as u64 * (p.get() - 1), p.get() + 1);
    num.div_ceil(den) as u32
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub p: u64,
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub c: u32,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub optimal_exponent: i64,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// `p^{nd} L_0 ⊆ L(n,d) ⊆ p^{nc} L_0`, by exact HNF containment.
pub fn sandwich_check(spec: &IdealSpec, params: &LevelParams) -> SandwichReport {
    let sl = global_section_lattice(spec, params);
    sandwich_from_lattice(&sl, params)
}

pub fn sandwich_from_lattice(sl: &SectionLattice, params: &LevelParams) -> SandwichReport {
    let p = params.p;
    let (n, d) = (sl.n, sl.d);
    let dim = (2 * d + 1) as usize;
    let l0 = ZpLattice::standard(p, dim);
    let c = sandwich_c(d, p);
    SandwichReport {
        p: p.get(),
        n,
        d,
        m: params.m,
        c,
        lower_ok: sl.lattice.contains_lattice(&l0.scale_p(n * d)),
        upper_ok: l0.scale_p(n * c).contains_lattice(&sl.lattice),
        optimal_exponent: sl.lattice.optimal_exponent(),
    }
}

/// Exponents of `p^{n(d-k)} (x-a)^k d_x^{(x)d} = z^A x'^B x'^d d_{x'}^{(x)d}` on
/// the level-`nu` blow-up chart, with `x' = (x-a)/p^{nu-1}` and `x' z = p`.
#[derive(Clone, Debug, Serialize)]
pub struct RewriteCertificate {
    pub n: u32,
    pub nu: u32,
    pub d: u32,
    pub k: u32,
    pub z_exponent: i64,
    pub x_exponent: i64,
    pub d_exponent: i64,
    pub recombines: bool,
}

impl RewriteCertificate {
    pub fn passed(&self) -> bool {
        self.recombines && self.z_exponent >= 0 && self.x_exponent >= 0 && self.d_exponent >= 0
    }
}

pub fn rewrite_d_certificate(n: u32, nu: u32, d: u32, k: u32, p: Prime) -> RewriteCertificate {
    assert!(k <= d && 1 <= nu && nu <= n, "need k <= d and 1 <= nu <= n");
    let z = ((n - nu + 1) * (d - k)) as i64;
    let x = ((n - nu) * (d - k)) as i64;
    let dd = d as i64;
    // z^A x'^B x'^d = p^A x'^{B - A + d}
    let p_power = z;
    let x_power = x - z + dd;
    // compare with the chart pullback of p^{n(d-k)} x^k d^{(x)d} centred at 0
    let s = GradedSymbol::new(
        Chart::X,
        d,
        Poly::monomial(p.qpow((n * (d - k)) as i64), k),
    );
    let tr = super::charts::ChartTransform { chart: Chart::X, center: BigInt::zero(), scale: nu - 1 };
    let pulled = to_chart(&s, &tr, p).expect("same chart");
    let expect = if x_power >= 0 {
        Poly::monomial(p.qpow(p_power), x_power as u32)
    } else {
        Poly::zero()
    };
    RewriteCertificate {
        n,
        nu,
        d,
        k,
        z_exponent: z,
        x_exponent: x,
        d_exponent: dd,
        recombines: x_power == k as i64 && pulled.coeff == expect,
    }
}

/// `S` extends over the blow-up: on every residual disc at level `n`, the
/// chart expression of `S` has p-integral coefficients.
pub fn extension_test(s: &GradedSymbol, p: Prime, n: u32) -> bool {
    let discs: Vec<ChartTransform> = enumerate_charts(p, n)
        .into_iter()
        .filter(|c| c.kind == ChartKind::ResidualDisc)
        .map(|c| c.transform(p).expect("residual discs have coordinates"))
        .collect();
    extension_test_on(s, &discs, p)
}

/// [`extension_test`] against a precomputed list of chart transforms.
///
/// With `f = F / L`, `F` integral, the coefficient of `t^j` in
/// `f(c + p^s t) p^{-s d}` is `T_j(F)(c) p^{s(j-d)} / L`, where `T_j` is the
/// j-th Taylor coefficient, so only `T_j(F)(c) mod p^{s(d-j) + vp(L)}` matters.
pub fn extension_test_on(s: &GradedSymbol, charts: &[ChartTransform], p: Prime) -> bool {
    let Some(other) = s.to_other_chart() else { return false };
    let prepared = [s, &other].map(|g| {
        let mut l = BigInt::one();
        for (_, c) in g.coeff.terms() {
            l = l.lcm(c.denom());
        }
        let big: Vec<BigInt> =
            g.coeff.dense().iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
        (g.chart, big, vp_int(&l, p).finite().expect("nonzero") as u32)
    });
    let d = s.degree;
    charts.iter().all(|tr| {
        let (_, f, vl) = prepared.iter().find(|(c, _, _)| *c == tr.chart).expect("both charts");
        (0..f.len() as u32).all(|j| {
            let need = (tr.scale * d.saturating_sub(j) + vl) as i64 - (tr.scale * j.saturating_sub(d)) as i64;
            if need <= 0 {
                return true;
            }
            let m = p.pow(need as u32);
            let c = tr.center.mod_floor(&m);
            let mut t = BigInt::zero();
            let mut cp = BigInt::one();
            for (i, fi) in f.iter().enumerate().skip(j as usize) {
                t += fi * binomial(i as u64, j as u64) * &cp;
                cp = (cp * &c) % &m;
            }
            (t % &m).is_zero()
        })
    })
}
