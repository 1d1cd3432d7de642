//! Graded generation of the level-m symbol lattice by elements of degree
//! below `2 p^m`, and the torsion exponent `N(m)` of the graded cokernel.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{factorial, q_big, q_ratio, vp, vp_factorial, LevelParams, Val, Q};
use crate::error::ParamError;
use crate::gl2::pbw::{indices_of_degree, Idx};
use crate::weyl::{compose, symbol_of, Chart, DiffOperator, GradedSymbol};

use super::xi::xi_basis;

/// Which branch of the reduction applies. `Shifted` means the residual
/// carries `d^{p^m + s}` instead of `d^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerationCase {
    /// `d < 2 p^m`: the symbol is itself a generator.
    Trivial,
    KAtMostD,
    KAtMostDShifted,
    EvenLow,
    EvenShifted,
    OddLow,
    OddShifted,
}

/// `(q_d!/d!) x^k d^{(x)d} = unit * A^a * B^b * C^c * rho x^k' d^{(x)d'}` with
/// `A = (x d)^{p^m}/p^m!`, `B = d^{p^m}/p^m!`, `C = (x^2 d)^{p^m}/p^m!`.
/// `rho` differs from `q_{d'}!/d'!` by `residual_unit`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationStep {
    pub d: u32,
    pub k: u32,
    pub case: GenerationCase,
    pub q: u32,
    pub s: u32,
    /// `q'` when `k <= d`, `q''` otherwise.
    pub q_prime: u32,
    pub r: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    #[serde(with = "crate::arith::q_as_string")]
    pub unit: Q,
    #[serde(with = "crate::arith::q_as_string")]
    pub rho: Q,
    #[serde(with = "crate::arith::q_as_string")]
    pub residual_unit: Q,
    pub residual: (u32, u32),
}

fn factor(pm: u32, k: u32) -> GradedSymbol {
    GradedSymbol::monomial(Q::one() / q_big(factorial(pm as u64)), k, pm)
}

/// `A`, `B`, `C` as symbols.
pub fn generation_factors(params: &LevelParams) -> [GradedSymbol; 3] {
    let pm = params.pm() as u32;
    [factor(pm, pm), factor(pm, 0), factor(pm, 2 * pm)]
}

fn symbol_pow(s: &GradedSymbol, e: u32) -> GradedSymbol {
    let mut out = GradedSymbol::monomial(Q::one(), 0, 0);
    for _ in 0..e {
        out = out.mul(s).expect("x-chart");
    }
    out
}

/// The generator `e_{d,k} = (q_d!/d!) x^k d^{(x)d}`.
pub fn generator(d: u32, k: u32, params: &LevelParams) -> GradedSymbol {
    GradedSymbol::monomial(q_ratio(d as u64, params), k, d)
}

impl GenerationStep {
    /// `unit * A^a B^b C^c * rho x^k' d^{(x)d'}`.
    pub fn recombine(&self, params: &LevelParams) -> GradedSymbol {
        let [fa, fb, fc] = generation_factors(params);
        let (dr, kr) = self.residual;
        symbol_pow(&fa, self.a)
            .mul(&symbol_pow(&fb, self.b))
            .and_then(|x| x.mul(&symbol_pow(&fc, self.c)))
            .and_then(|x| x.mul(&GradedSymbol::monomial(self.rho.clone(), kr, dr)))
            .expect("x-chart")
            .scale(&self.unit)
    }
}

/// One reduction step for `e_{d,k}`, checked by exact recombination.
pub fn graded_generation(d: u32, k: u32, params: &LevelParams) -> Result<GenerationStep, ParamError> {
    if k > 2 * d {
        return Err(ParamError::Invalid(format!("need k <= 2d, got d = {d}, k = {k}")));
    }
    let pm = params.pm() as u32;
    let (q, s) = (d / pm, d % pm);
    let (qp, r) = (k / pm, k % pm);
    let inv_s = Q::new(1.into(), factorial(s as u64));
    let inv_s_pm = Q::new(1.into(), factorial(s as u64) * factorial(pm as u64));
    let under = || ParamError::Invalid(format!("inconsistent reduction at d = {d}, k = {k}"));
    let sub = |a: u32, b: u32| a.checked_sub(b).ok_or_else(under);

    // (case, q' or q'', a, b, c, residual degree, residual x-power, rho)
    let (case, qq, a, b, c, dr, kr, rho) = if d < 2 * pm {
        (GenerationCase::Trivial, qp, 0, 0, 0, d, k, q_ratio(d as u64, params))
    } else if k <= d {
        if r <= 2 * s {
            (GenerationCase::KAtMostD, qp, qp, sub(q, qp)?, 0, s, r, inv_s)
        } else {
            (GenerationCase::KAtMostDShifted, qp, qp, sub(sub(q, qp)?, 1)?, 0, pm + s, r, inv_s_pm)
        }
    } else if qp % 2 == 0 {
        let q2 = qp / 2;
        if r <= 2 * s {
            (GenerationCase::EvenLow, q2, 0, sub(q, q2)?, q2, s, r, inv_s)
        } else {
            (GenerationCase::EvenShifted, q2, 0, sub(sub(q, q2)?, 1)?, q2, pm + s, r, inv_s_pm)
        }
    } else {
        let q2 = qp / 2;
        if pm + r <= 2 * s {
            (GenerationCase::OddLow, q2, 0, sub(q, q2)?, q2, s, pm + r, inv_s)
        } else {
            (GenerationCase::OddShifted, q2, 0, sub(sub(q, q2)?, 1)?, q2, pm + s, pm + r, inv_s_pm)
        }
    };

    let [fa, fb, fc] = generation_factors(params);
    let coeff = |f: &GradedSymbol, e: u32| symbol_pow(f, e).coeff.coeff(e * f.coeff.degree().unwrap_or(0));
    let denom = coeff(&fa, a) * coeff(&fb, b) * coeff(&fc, c) * &rho;
    let unit = q_ratio(d as u64, params) / denom;
    let residual_unit = &rho / q_ratio(dr as u64, params);
    let step = GenerationStep {
        d,
        k,
        case,
        q,
        s,
        q_prime: qq,
        r,
        a,
        b,
        c,
        unit,
        rho,
        residual_unit,
        residual: (dr, kr),
    };
    let p = params.p;
    if step.recombine(params) != generator(d, k, params)
        || vp(&step.unit, p) != Val::Finite(0)
        || vp(&step.residual_unit, p) != Val::Finite(0)
        || dr >= 2 * pm
        || kr > 2 * dr
    {
        return Err(ParamError::Invalid(format!("reduction failed to certify at d = {d}, k = {k}: {step:?}")));
    }
    Ok(step)
}

/// A graded image vector: the symbol of `xi(B_nu)` for a level-m basis element.
pub(crate) fn basis_symbol(nu: &Idx, params: &LevelParams) -> GradedSymbol {
    let op = xi_basis(nu, params);
    let d: u32 = nu.iter().sum();
    match op.order() {
        Some(o) if o == d => symbol_of(&op).expect("nonzero"),
        _ => GradedSymbol::new(Chart::X, d, crate::poly::Poly::zero()),
    }
}

/// Least `e` with `p^e e_{d,k}` in the graded image, together with a basis
/// index whose symbol realizes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorExponent {
    pub d: u32,
    pub k: u32,
    pub exponent: u32,
    pub preimage: Idx,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionBound {
    pub m: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    /// `vp((p^m - 1)! p^m!)`.
    pub a_priori: u32,
    pub degree_bound: u32,
    pub generators: Vec<GeneratorExponent>,
    /// Degree-at-most-D lattice generators with a checked preimage of `p^N e_{d,k}`.
    pub verified: usize,
    pub failures: Vec<(u32, u32)>,
}

impl TorsionBound {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.big_n <= self.a_priori
    }
}

/// Image exponents of the generators of degree `d`, read off the symbols of
/// `xi(B_nu)`. Each basis symbol is a single monomial `x^k d^{(x)d}`.
pub fn degree_exponents(d: u32, params: &LevelParams) -> Vec<Option<GeneratorExponent>> {
    let params = LevelParams { n: 0, ..*params };
    let scale = q_ratio(d as u64, &params);
    let mut best: Vec<Option<GeneratorExponent>> = vec![None; (2 * d + 1) as usize];
    for nu in indices_of_degree(d) {
        let sym = basis_symbol(&nu, &params);
        for (k, c) in sym.coeff.terms() {
            let e = vp(&(c / &scale), params.p).finite().expect("nonzero") as u32;
            let slot = &mut best[k as usize];
            if slot.as_ref().map_or(true, |g| e < g.exponent) {
                *slot = Some(GeneratorExponent { d, k, exponent: e, preimage: nu });
            }
        }
    }
    best
}

fn a_priori_bound(params: &LevelParams) -> u32 {
    let pm = params.pm();
    (vp_factorial(pm - 1, params.p) + vp_factorial(pm, params.p)) as u32
}

/// Builds, for every `e_{d,k}` with `d <= D`, an element of the level-m
/// algebra whose image has symbol `p^N e_{d,k}`, and checks it by composing
/// the images of the factors. `N` is the largest generator exponent.
pub fn torsion_bound(params: &LevelParams, degree_bound: u32) -> TorsionBound {
    let params = LevelParams { n: 0, ..*params };
    let pm = params.pm() as u32;
    let p = params.p;
    let mut generators = Vec::new();
    for d in 0..2 * pm {
        for g in degree_exponents(d, &params) {
            generators.push(g.expect("every generator is hit"));
        }
    }
    let big_n = generators.iter().map(|g| g.exponent).max().unwrap_or(0);

    let pmi = pm;
    let ops = [
        xi_basis(&[0, 0, pmi, 0], &params),
        xi_basis(&[pmi, 0, 0, 0], &params),
        xi_basis(&[0, 0, 0, pmi], &params),
    ];
    let sym_of = |op: &DiffOperator| symbol_of(op).expect("nonzero");
    // xi(C-preimage) has symbol (-1)^{p^m} C
    let signs: Vec<Q> = ops
        .iter()
        .zip(generation_factors(&params))
        .map(|(op, f)| sym_of(op).coeff.coeff(f.coeff.degree().unwrap()) / f.coeff.coeff(f.coeff.degree().unwrap()))
        .collect();
    let op_pow = |op: &DiffOperator, e: u32| {
        let mut out = DiffOperator::identity(Chart::X);
        for _ in 0..e {
            out = compose(&out, op).expect("x-chart");
        }
        out
    };

    let mut verified = 0;
    let mut failures = Vec::new();
    for d in 0..=degree_bound {
        for k in 0..=2 * d {
            let ok = (|| {
                let step = graded_generation(d, k, &params).ok()?;
                let (dr, kr) = step.residual;
                let g = generators.iter().find(|g| g.d == dr && g.k == kr)?;
                let res_op = xi_basis(&g.preimage, &params);
                // symbol of xi(B_res) = w e_res with vp(w) = e
                let w = sym_of(&res_op).coeff.coeff(kr) / q_ratio(dr as u64, &params);
                let mut lambda = &step.unit * &step.residual_unit * p.qpow(big_n as i64) / w;
                for (sg, e) in signs.iter().zip([step.a, step.b, step.c]) {
                    if e % 2 == 1 {
                        lambda /= sg;
                    }
                }
                if !vp(&lambda, p).is_nonneg() {
                    return None;
                }
                let img = compose(&op_pow(&ops[0], step.a), &op_pow(&ops[1], step.b))
                    .and_then(|x| compose(&x, &op_pow(&ops[2], step.c)))
                    .and_then(|x| compose(&x, &res_op))
                    .ok()?
                    .scale(&lambda);
                let target = generator(d, k, &params).scale(&p.qpow(big_n as i64));
                (img.order() == Some(d) && sym_of(&img) == target).then_some(())
            })();
            match ok {
                Some(()) => verified += 1,
                None => failures.push((d, k)),
            }
        }
    }
    debug_assert!(signs.iter().all(|s| s.abs().is_one() && !s.is_zero()));
    TorsionBound { m: params.m, big_n, a_priori: a_priori_bound(&params), degree_bound, generators, verified, failures }
}
