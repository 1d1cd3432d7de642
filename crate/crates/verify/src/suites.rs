//! The verification suites. Each one expands its grid, checks every point
//! (in parallel), and returns the records in grid order.

use std::collections::BTreeMap;

use arithdiff::arith::{dp_coeff, integrality_ratio, vp, vp_factorial, Q};
use arithdiff::gl2::center::central_character;
use arithdiff::gl2::cnj::{caution_pair, cnj_row, in_hypothesis_range};
use arithdiff::gl2::hopf::{
    coassociative_on, determinant_is_multiplicative, transition_compatible_on,
    transition_preserves_determinant,
};
use arithdiff::gl2::level::check_subalgebra_closure;
use arithdiff::gl2::pbw::{indices_up_to, total_degree, Idx};
use arithdiff::gl2::regular::{duality_pairing, duality_pairing_general};
use arithdiff::gl2::{pbw_multiply, PBWElement};
use arithdiff::models::charts::{chart_tree, enumerate_charts, ChartKind};
use arithdiff::models::ideal::{ideal_membership, membership_witness};
use arithdiff::models::lattice::ZpLattice;
use arithdiff::models::sections::{
    coeff_vector, rewrite_d_certificate, sandwich_c, sandwich_from_lattice, seeded_integral_symbols,
    symbol_in_ideal_sheaf,
};
use arithdiff::models::{extension_test, IdealSpec};
use arithdiff::theorems::generation::{graded_generation, torsion_bound};
use arithdiff::theorems::theorem1::theorem1_degree;
use arithdiff::theorems::theorem2::{binomial_ratio_sweep, right_inequality_sweep, theorem2_check};
use arithdiff::theorems::xi::{xi, xi_level_m_integrality};
use arithdiff::weyl::{binomial_of_operator, compose};
use arithdiff::{Chart, DiffOperator, GradedSymbol, LevelParams, Poly, Prime, Val};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::section_lattice;
use crate::config::Settings;
use crate::report::{Record, SuiteReport};

pub const SUITES: [&str; 12] = [
    "arith",
    "dist-pairing",
    "closure",
    "cnj",
    "hopf",
    "charts",
    "ideal",
    "sandwich",
    "rewrite",
    "xi",
    "theorem1",
    "theorem2",
];

/// Grid flags each suite reads; any other grid flag is a usage error.
pub fn axes(name: &str) -> &'static [&'static str] {
    match name {
        "arith" => &["p", "m"],
        "dist-pairing" => &["p", "n", "deg"],
        "closure" => &["p", "m", "n", "deg"],
        "cnj" | "hopf" | "charts" => &["p", "n"],
        "ideal" | "rewrite" => &["p", "n", "d"],
        "sandwich" => &["p", "n", "d", "m"],
        "xi" | "theorem1" => &["p", "m", "deg"],
        "theorem2" => &["p", "n", "m", "deg"],
        _ => &[],
    }
}

pub fn run_suite(name: &str, s: &Settings) -> SuiteReport {
    match name {
        "arith" => arith(s),
        "dist-pairing" => dist_pairing(s),
        "closure" => closure(s),
        "cnj" => cnj(s),
        "hopf" => hopf(s),
        "charts" => charts(s),
        "ideal" => ideal(s),
        "sandwich" => sandwich(s),
        "rewrite" => rewrite(s),
        "xi" => xi_suite(s),
        "theorem1" => theorem1(s),
        "theorem2" => theorem2(s),
        other => unreachable!("unknown suite {other}"),
    }
}

/// Resolves grid axes against per-suite defaults and remembers the result.
struct Grid<'a> {
    s: &'a Settings,
    map: BTreeMap<String, Value>,
}

impl<'a> Grid<'a> {
    fn new(s: &'a Settings) -> Grid<'a> {
        Grid { s, map: BTreeMap::new() }
    }

    fn pick<T: Clone>(&self, full: T, quick: T) -> T {
        if self.s.quick {
            quick
        } else {
            full
        }
    }

    fn primes_as(&mut self, key: &str, full: &[u64], quick: &[u64]) -> Vec<Prime> {
        let v = match &self.s.primes {
            Some(v) => v.clone(),
            None => self.pick(full, quick).iter().map(|&p| Prime::new(p).expect("prime")).collect(),
        };
        self.map.insert(key.into(), json!(v.iter().map(|p| p.get()).collect::<Vec<_>>()));
        v
    }

    fn primes(&mut self, full: &[u64], quick: &[u64]) -> Vec<Prime> {
        self.primes_as("p", full, quick)
    }

    fn axis(&mut self, key: &str, given: &Option<Vec<u32>>, full: Vec<u32>, quick: Vec<u32>) -> Vec<u32> {
        let v = given.clone().unwrap_or_else(|| self.pick(full, quick));
        self.map.insert(key.into(), json!(v));
        v
    }

    fn deg(&mut self, full: u32, quick: u32) -> u32 {
        let d = self.s.deg.unwrap_or_else(|| self.pick(full, quick));
        self.map.insert("deg".into(), json!(d));
        d
    }

    fn note(&mut self, key: &str, v: impl Into<Value>) {
        self.map.insert(key.into(), v.into());
    }

    fn finish(self, suite: &str, columns: &[&str], records: Vec<Record>) -> SuiteReport {
        SuiteReport::new(suite, self.map, columns, records)
    }
}

fn range(a: u32, b: u32) -> Vec<u32> {
    (a..=b).collect()
}

fn params(p: Prime, m: u32, n: u32) -> LevelParams {
    LevelParams::new(p.get(), m, n).expect("validated prime")
}

fn val(v: Val) -> Value {
    match v.finite() {
        Some(x) => json!(x),
        None => json!("inf"),
    }
}

fn product<A: Clone, B: Clone>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// Maps each point to its records in parallel and concatenates in grid order.
fn fan_out<P: Sync, F: Fn(&P) -> Vec<Record> + Sync + Send>(points: &[P], f: F) -> Vec<Record> {
    points.par_iter().map(f).collect::<Vec<_>>().concat()
}

fn arith(s: &Settings) -> SuiteReport {
    const T: &str = "arith";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3, 5], &[2, 3]);
    let ms = g.axis("m", &s.m, range(0, 3), range(0, 1));
    let (dp_max, int_max, ratio_max, asym_max) = g.pick((500u64, 200u64, 300u64, 10_000u64), (100, 40, 60, 1000));
    g.note("dp_max", dp_max);
    g.note("integrality_max", int_max);
    g.note("ratio_max", ratio_max);
    g.note("asymptotic_max", asym_max);
    let records = fan_out(&product(&primes, &ms), |&(p, m)| {
        let pr = params(p, m, 0);
        let base = |check: &str, bound: u64| Record::new(T, check).p(p.get()).m(m).metric("bound", bound);

        let bad_dp = (0..=dp_max).find(|&d| dp_coeff(d, &pr).unit_valuation(p) != Val::Finite(0));
        let dp = base("dp-unit", dp_max).verdict(bad_dp.is_none(), || {
            let d = bad_dp.unwrap();
            json!({"d": d, "unit": dp_coeff(d, &pr).unit.to_string()})
        });

        let mut min_v = i64::MAX;
        let mut bad_int = None;
        for i in 0..=int_max {
            for j in 0..=int_max - i {
                let v = vp(&integrality_ratio(i, j, &pr), p).finite().expect("nonzero");
                min_v = min_v.min(v);
                if v < 0 && bad_int.is_none() {
                    bad_int = Some((i, j, v));
                }
            }
        }
        let int = base("integrality", int_max)
            .metric("min_valuation", min_v)
            .verdict(bad_int.is_none(), || json!({"i": bad_int.unwrap().0, "j": bad_int.unwrap().1, "valuation": bad_int.unwrap().2}));

        let bad_ratio = binomial_ratio_sweep(ratio_max, &pr);
        let ratio = base("binomial-ratio", ratio_max)
            .verdict(bad_ratio.is_none(), || json!({"nu": bad_ratio.unwrap().0, "k": bad_ratio.unwrap().1}));

        // nu - (p-1) p^m vp(q_nu!) lies in [0, p^m (1 + (p-1) * #digits(q_nu))]
        let pm = pr.pm() as i128;
        let (mut max_excess, mut bad_asym) = (0i128, None);
        for nu in 0..=asym_max {
            let q = nu / pr.pm();
            let digits = if q == 0 { 0 } else { q.ilog(p.get()) as i128 + 1 };
            let excess = nu as i128 - (p.get() as i128 - 1) * pm * vp_factorial(q, p) as i128;
            max_excess = max_excess.max(excess);
            if (excess < 0 || excess > pm * (1 + (p.get() as i128 - 1) * digits)) && bad_asym.is_none() {
                bad_asym = Some(nu);
            }
        }
        let asym = base("asymptotic", asym_max)
            .metric("max_excess", max_excess as i64)
            .verdict(bad_asym.is_none(), || json!({"nu": bad_asym.unwrap()}));
        vec![dp, int, ratio, asym]
    });
    g.finish(T, &["p", "m", "bound", "min_valuation", "max_excess"], records)
}

fn sigma(nu: &Idx) -> Idx {
    [nu[1], nu[0], nu[3], nu[2]]
}

fn dist_pairing(s: &Settings) -> SuiteReport {
    const T: &str = "dist-pairing";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3, 5], &[2]);
    let ns = g.axis("n", &s.n, range(0, 2), range(0, 1));
    let deg = g.deg(6, 3);
    let cross = deg.min(g.pick(3, 2));
    g.note("cross_check_deg", cross);
    let idx = indices_up_to(deg);
    let records = fan_out(&product(&primes, &ns), |&(p, n)| {
        let pr = params(p, 0, n);
        let mut pairs = 0u64;
        let mut delta_violations = 0u64;
        let mut first_delta = None;
        let mut bad = None;
        for nu in &idx {
            for mu in &idx {
                let v = duality_pairing(nu, mu, &pr);
                pairs += 1;
                let delta = if nu == mu { Q::one() } else { Q::zero() };
                if v != delta {
                    delta_violations += 1;
                    first_delta.get_or_insert_with(|| json!({"nu": nu, "mu": mu, "value": v.to_string()}));
                }
                let (a, b) = (total_degree(nu), total_degree(mu));
                if a <= b {
                    let expect = if a == b && sigma(nu) == *mu { Q::one() } else { Q::zero() };
                    if v != expect && bad.is_none() {
                        bad = Some(json!({"nu": nu, "mu": mu, "value": v.to_string(), "expected": expect.to_string()}));
                    }
                }
            }
        }
        let mut tri = Record::new(T, "unitriangular")
            .p(p.get())
            .n(n)
            .degree(deg)
            .metric("pairs", pairs)
            .metric("delta_violations", delta_violations)
            .metric("unitriangular", bad.is_none());
        if let Some(w) = first_delta {
            tri = tri.witness(w);
        }
        let tri = tri.verdict(bad.is_none(), || bad.clone().unwrap());

        let small = indices_up_to(cross);
        let mismatch = small.iter().flat_map(|nu| small.iter().map(move |mu| (nu, mu))).find(|(nu, mu)| {
            duality_pairing(nu, mu, &pr) != duality_pairing_general(nu, mu, &pr)
        });
        let fast = Record::new(T, "fast-vs-general")
            .p(p.get())
            .n(n)
            .degree(cross)
            .metric("pairs", (small.len() * small.len()) as u64)
            .verdict(mismatch.is_none(), || json!({"nu": mismatch.unwrap().0, "mu": mismatch.unwrap().1}));
        vec![tri, fast]
    });
    g.finish(T, &["p", "n", "degree", "pairs", "delta_violations", "unitriangular"], records)
}

fn closure(s: &Settings) -> SuiteReport {
    const T: &str = "closure";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ms = g.axis("m", &s.m, range(0, 2), range(0, 1));
    let ns = g.axis("n", &s.n, vec![0], vec![0]);
    let deg = g.deg(6, 3);
    let points: Vec<(Prime, u32, u32)> =
        product(&primes, &product(&ms, &ns)).into_iter().map(|(p, (m, n))| (p, m, n)).collect();
    let records = fan_out(&points, |&(p, m, n)| {
        let r = check_subalgebra_closure(deg, &params(p, m, n));
        vec![Record::new(T, "closure")
            .p(p.get())
            .m(m)
            .n(n)
            .degree(deg)
            .metric("pairs", r.pairs_checked)
            .metric("min_valuation", val(r.min_valuation))
            .verdict(r.passed(), || json!(r.counterexample))]
    });
    g.finish(T, &["p", "m", "n", "degree", "pairs", "min_valuation"], records)
}

fn cnj(s: &Settings) -> SuiteReport {
    const T: &str = "cnj";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3, 5], &[2, 3]);
    let ns = g.axis("n", &s.n, range(0, 3), range(1, 2));
    let nu_max = g.pick(50u32, 20u32);
    g.note("nu_max", nu_max);
    let records = fan_out(&product(&primes, &ns), |&(p, n)| {
        let pr = params(p, 0, n);
        let in_range = in_hypothesis_range(p, n);
        let rows: Vec<_> = (1..=nu_max).map(|nu| cnj_row(nu, &pr)).collect();
        let min_v = rows.iter().map(|r| r.min_valuation).min().unwrap_or(Val::Infinite);
        let identity = rows.iter().all(|r| r.identity_ok);
        let bad = rows.iter().find(|r| !r.identity_ok || (in_range && !r.min_valuation.is_nonneg()));
        let mut out = vec![Record::new(T, "integrality")
            .p(p.get())
            .n(n)
            .metric("bound", nu_max)
            .metric("in_range", in_range)
            .metric("min_valuation", val(min_v))
            .metric("identity", identity)
            .verdict(bad.is_none(), || json!(bad))];
        if n >= 1 {
            let (a, b) = caution_pair(2, &pr);
            out.push(
                Record::new(T, "caution")
                    .p(p.get())
                    .n(n)
                    .metric("bound", 2)
                    .metric("differs", a != b)
                    .witness(json!({"scaled_argument": a.to_string(), "scaled_binomial": b.to_string()}))
                    .verdict(a != b, || json!({"nu": 2})),
            );
        }
        out
    });
    g.finish(T, &["p", "n", "bound", "in_range", "min_valuation", "identity", "differs"], records)
}

fn hopf(s: &Settings) -> SuiteReport {
    const T: &str = "hopf";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ns = g.axis("n", &s.n, range(0, 3), range(0, 1));
    let records = fan_out(&product(&primes, &ns), |&(p, n)| {
        let rec = |check: &str| Record::new(T, check).p(p.get()).n(n);
        let bad = (0..4).find(|&i| !coassociative_on(p, n, i));
        let mut out = vec![
            rec("coassociativity").metric("coordinates", 4).verdict(bad.is_none(), || json!({"coordinate": bad})),
            rec("determinant").verdict(determinant_is_multiplicative(p, n), || json!({"identity": "multiplicative"})),
        ];
        if n >= 1 {
            let bad = (0..4).find(|&i| !transition_compatible_on(p, n, i));
            let det = transition_preserves_determinant(p, n);
            out.push(
                rec("transition")
                    .metric("coordinates", 4)
                    .verdict(bad.is_none() && det, || json!({"coordinate": bad, "determinant_preserved": det})),
            );
        }
        out
    });
    g.finish(T, &["p", "n", "coordinates"], records)
}

fn charts(s: &Settings) -> SuiteReport {
    const T: &str = "charts";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3, 5], &[2, 3]);
    let ns = g.axis("n", &s.n, range(0, 3), range(0, 2));
    let records = fan_out(&product(&primes, &ns), |&(p, n)| {
        let q = p.get();
        let charts = enumerate_charts(p, n);
        let count = |k: ChartKind, level: u32| charts.iter().filter(|c| c.kind == k && c.level == level).count() as u64;
        let mut bad = Vec::new();
        if count(ChartKind::Interior, 0) != 1 {
            bad.push(json!({"kind": "interior"}));
        }
        for nu in 1..=n {
            let want = (q + 1) * q.pow(nu - 1);
            if count(ChartKind::BlowUpChart, nu) != want {
                bad.push(json!({"kind": "blow-up-chart", "level": nu, "expected": want}));
            }
        }
        let discs = count(ChartKind::ResidualDisc, n);
        if discs != (q + 1) * q.pow(n) {
            bad.push(json!({"kind": "residual-disc", "expected": (q + 1) * q.pow(n)}));
        }
        let tree = chart_tree(p, n);
        let nodes: u64 = 1 + (1..=n).map(|nu| (q + 1) * q.pow(nu - 1)).sum::<u64>();
        let tree_ok = tree.is_tree() && tree.degrees_ok() && tree.nodes.len() as u64 == nodes;
        if !tree_ok {
            bad.push(json!({"kind": "tree"}));
        }
        vec![Record::new(T, "charts")
            .p(q)
            .n(n)
            .metric("charts", charts.len() as u64)
            .metric("discs", discs)
            .metric("nodes", tree.nodes.len() as u64)
            .metric("ends", tree.ends() as u64)
            .metric("tree", tree_ok)
            .verdict(bad.is_empty(), || json!(bad))]
    });
    g.finish(T, &["p", "n", "charts", "discs", "nodes", "ends", "tree"], records)
}

fn ideal(s: &Settings) -> SuiteReport {
    const T: &str = "ideal";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ns = g.axis("n", &s.n, range(0, 2), range(0, 1));
    let taylor_ds = g.axis("d", &s.d, range(0, 3), range(0, 2));
    let ext_ds: Vec<u32> = match &s.d {
        Some(v) => v.iter().copied().filter(|&d| d >= 1).collect(),
        None => g.pick(range(1, 5), range(1, 3)),
    };
    g.note("extension_d", json!(ext_ds));
    let (j_max, e_max, samples) = g.pick((6u32, 4u32, 200usize), (4, 3, 50));
    g.note("j_max", j_max);
    g.note("e_max", e_max);
    g.note("samples", samples as u64);
    g.note("seed", s.seed);

    let taylor_points: Vec<(Prime, u32, u32)> =
        product(&primes, &product(&ns, &taylor_ds)).into_iter().map(|(p, (n, d))| (p, n, d)).collect();
    let mut records = fan_out(&taylor_points, |&(p, n, d)| {
        let spec = IdealSpec::new(n, d);
        let (mut inputs, mut members, mut bad) = (0u64, 0u64, None);
        for j in 0..=j_max {
            for e in 0..=e_max {
                let f = Poly::monomial(Q::from_integer(p.pow(e)), j);
                for a in 0..p.get().pow(n + 1) {
                    let a = BigInt::from(a);
                    let fast = ideal_membership(&f, &a, &spec, p).expect("integral input");
                    let slow = membership_witness(&f, &a, &spec, p).expect("integral input").is_some();
                    inputs += 1;
                    members += fast as u64;
                    if fast != slow && bad.is_none() {
                        bad = Some(json!({"j": j, "e": e, "a": a.to_string(), "taylor": fast, "witness": slow}));
                    }
                }
            }
        }
        vec![Record::new(T, "taylor-vs-witness")
            .p(p.get())
            .n(n)
            .d(d)
            .metric("inputs", inputs)
            .metric("members", members)
            .verdict(bad.is_none(), || bad.clone().unwrap())]
    });

    let ext_points: Vec<(Prime, u32, u32)> =
        product(&primes, &product(&ns, &ext_ds)).into_iter().map(|(p, (n, d))| (p, n, d)).collect();
    records.extend(fan_out(&ext_points, |&(p, n, d)| {
        let spec = IdealSpec::new(n, d);
        let mut inputs: Vec<Poly> = (0..=2 * d).map(|k| Poly::monomial(Q::one(), k)).collect();
        inputs.extend(seeded_integral_symbols(d, n, p, samples, s.seed ^ ((p.get() << 40) | ((n as u64) << 20) | d as u64)));
        let mut members = 0u64;
        let mut bad = None;
        for f in &inputs {
            let inside = symbol_in_ideal_sheaf(f, &spec, p);
            members += inside as u64;
            let ext = extension_test(&GradedSymbol::new(Chart::X, d, f.clone()), p, n);
            if ext != inside && bad.is_none() {
                bad = Some(json!({"symbol": f.to_string(), "extension": ext, "membership": inside}));
            }
        }
        vec![Record::new(T, "extension")
            .p(p.get())
            .n(n)
            .d(d)
            .metric("inputs", inputs.len() as u64)
            .metric("members", members)
            .verdict(bad.is_none(), || bad.clone().unwrap())]
    }));
    g.finish(T, &["p", "n", "d", "inputs", "members"], records)
}

/// `p^{k(p-1)} (x^p - x)^k`.
fn family_witness(p: Prime, k: u32) -> Poly {
    let base = &Poly::monomial(Q::one(), p.get() as u32) - &Poly::x();
    base.pow(k).scale(&p.qpow(k as i64 * (p.get() as i64 - 1)))
}

fn sandwich(s: &Settings) -> SuiteReport {
    const T: &str = "sandwich";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ns = g.axis("n", &s.n, range(0, 3), range(0, 2));
    let ds = g.axis("d", &s.d, range(1, 8), range(1, 4));
    let ms = g.axis("m", &s.m, range(0, 1), vec![0]);
    let exp_primes = g.primes_as("exponent_p", &[2, 3, 5], &[2, 3]);
    let family_primes = g.primes_as("family_p", &[2, 3], &[2]);
    let k_max = g.pick(3u32, 2u32);
    g.note("family_k_max", k_max);

    let points: Vec<(Prime, u32, u32, u32)> = product(&primes, &product(&ns, &product(&ds, &ms)))
        .into_iter()
        .map(|(p, (n, (d, m)))| (p, n, d, m))
        .collect();
    let mut records = fan_out(&points, |&(p, n, d, m)| {
        let pr = params(p, m, 0);
        let sl = section_lattice(&IdealSpec::new(n, d), &pr);
        let r = sandwich_from_lattice(&sl, &pr);
        let mut out = vec![Record::new(T, "sandwich")
            .p(p.get())
            .n(n)
            .d(d)
            .m(m)
            .metric("e", r.optimal_exponent)
            .metric("c", r.c)
            .metric("lower", r.lower_ok)
            .metric("upper", r.upper_ok)
            .verdict(r.passed(), || json!({"lower": r.lower_ok, "upper": r.upper_ok}))];
        if d == 1 {
            let exact = sl.lattice == ZpLattice::standard(p, 3).scale_p(n);
            out.push(
                Record::new(T, "degree-one")
                    .p(p.get())
                    .n(n)
                    .d(d)
                    .m(m)
                    .verdict(exact, || json!({"hnf": sl.lattice.hnf_strings()})),
            );
        }
        out
    });

    records.extend(fan_out(&exp_primes, |&p| {
        let d = p.get() as u32;
        let sl = section_lattice(&IdealSpec::new(1, d), &params(p, 0, 0));
        let e = sl.lattice.optimal_exponent();
        let w = family_witness(p, 1);
        let member = sl.lattice.contains(&coeff_vector(&w, d));
        vec![Record::new(T, "witness-exponent")
            .p(p.get())
            .n(1)
            .d(d)
            .metric("e", e)
            .metric("c", sandwich_c(d, p))
            .witness(json!({"symbol": w.to_string(), "member": member}))
            .verdict(member && e <= p.get() as i64 - 1, || json!({"e": e, "witness_member": member}))]
    }));

    let family: Vec<(Prime, u32)> = product(&family_primes, &range(1, k_max));
    records.extend(fan_out(&family, |&(p, k)| {
        let d = k * p.get() as u32;
        let sl = section_lattice(&IdealSpec::new(1, d), &params(p, 0, 0));
        let w = family_witness(p, k);
        let member = sl.lattice.contains(&coeff_vector(&w, d));
        vec![Record::new(T, "witness-family")
            .p(p.get())
            .n(1)
            .d(d)
            .witness(json!({"k": k, "symbol": w.to_string()}))
            .verdict(member, || json!({"k": k, "symbol": w.to_string()}))]
    }));
    g.finish(T, &["p", "n", "d", "m", "e", "c", "lower", "upper"], records)
}

fn rewrite(s: &Settings) -> SuiteReport {
    const T: &str = "rewrite";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ns = g.axis("n", &s.n, range(1, 3), range(1, 2));
    let ds = g.axis("d", &s.d, range(0, 6), range(0, 3));
    let points: Vec<(Prime, u32, u32)> = product(&primes, &product(&ns, &ds))
        .into_iter()
        .filter(|(_, (n, _))| *n >= 1)
        .map(|(p, (n, d))| (p, n, d))
        .collect();
    let records = fan_out(&points, |&(p, n, d)| {
        let certs: Vec<_> = (1..=n)
            .flat_map(|nu| (0..=d).map(move |k| rewrite_d_certificate(n, nu, d, k, p)))
            .collect();
        let bad = certs.iter().find(|c| !c.passed());
        vec![Record::new(T, "rewrite")
            .p(p.get())
            .n(n)
            .d(d)
            .metric("certificates", certs.len() as u64)
            .verdict(bad.is_none(), || json!(bad))]
    });
    g.finish(T, &["p", "n", "d", "certificates"], records)
}

fn xi_suite(s: &Settings) -> SuiteReport {
    const T: &str = "xi";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ms = g.axis("m", &s.m, range(0, 2), range(0, 1));
    let deg = g.deg(6, 3);
    let (nu_max, hom_deg) = g.pick((12u32, 2u32), (6, 1));
    g.note("euler_nu_max", nu_max);
    g.note("homomorphism_deg", hom_deg);

    let mut records = fan_out(&product(&primes, &ms), |&(p, m)| {
        let pr = params(p, m, 0);
        let r = xi_level_m_integrality(deg, &pr);
        let cc = central_character(&pr);
        let zero = cc.trace.is_zero() && cc.casimir.is_zero();
        vec![
            Record::new(T, "integrality")
                .p(p.get())
                .m(m)
                .degree(deg)
                .metric("checked", r.checked as u64)
                .metric("failures", r.failures.len() as u64)
                .verdict(r.passed(), || json!({"indices": r.failures})),
            Record::new(T, "central-character")
                .p(p.get())
                .m(m)
                .witness(&cc)
                .verdict(zero, || json!(cc)),
        ]
    });

    let euler = DiffOperator::monomial(Chart::X, Q::one(), 1, 1);
    let bad = (0..=nu_max).find(|&nu| {
        let f: BigInt = (1..=nu as u64).map(BigInt::from).product();
        binomial_of_operator(&euler, nu) != DiffOperator::monomial(Chart::X, Q::new(BigInt::one(), f), nu, nu)
    });
    records.push(
        Record::new(T, "binomial-euler")
            .degree(nu_max)
            .metric("checked", nu_max as u64 + 1)
            .verdict(bad.is_none(), || json!({"nu": bad})),
    );

    let idx = indices_up_to(hom_deg);
    let pairs: Vec<(Idx, Idx)> = product(&idx, &idx);
    let bad: Vec<(Idx, Idx)> = pairs
        .par_iter()
        .filter(|(a, b)| {
            let (x, y) = (PBWElement::monomial(*a, Q::one()), PBWElement::monomial(*b, Q::one()));
            xi(&pbw_multiply(&x, &y)) != compose(&xi(&x), &xi(&y)).expect("x-chart")
        })
        .copied()
        .collect();
    records.push(
        Record::new(T, "homomorphism")
            .degree(hom_deg)
            .metric("checked", pairs.len() as u64)
            .metric("failures", bad.len() as u64)
            .verdict(bad.is_empty(), || json!({"left": bad[0].0, "right": bad[0].1})),
    );
    g.finish(T, &["p", "m", "degree", "checked", "failures"], records)
}

fn theorem1(s: &Settings) -> SuiteReport {
    const T: &str = "theorem1";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ms = g.axis("m", &s.m, range(0, 1), range(0, 1));
    let deg = g.deg(6, 3);
    let pm_points = product(&primes, &ms);

    let heads: Vec<(Vec<Record>, u32)> = pm_points
        .par_iter()
        .map(|&(p, m)| {
            let pr = params(p, m, 0);
            let top = 4 * pr.pm() as u32;
            let mut steps = 0u64;
            let mut bad = None;
            for d in 0..=top {
                for k in 0..=2 * d {
                    match graded_generation(d, k, &pr) {
                        Ok(_) => steps += 1,
                        Err(e) => {
                            bad.get_or_insert_with(|| json!({"d": d, "k": k, "error": e.to_string()}));
                        }
                    }
                }
            }
            let tb = torsion_bound(&pr, deg);
            let recs = vec![
                Record::new(T, "generation")
                    .p(p.get())
                    .m(m)
                    .degree(top)
                    .metric("steps", steps)
                    .verdict(bad.is_none(), || bad.clone().unwrap()),
                Record::new(T, "torsion")
                    .p(p.get())
                    .m(m)
                    .degree(deg)
                    .metric("N", tb.big_n)
                    .metric("a_priori", tb.a_priori)
                    .witness(json!({"generators": tb.generators.len(), "verified": tb.verified}))
                    .verdict(tb.passed(), || json!({"failures": tb.failures, "N": tb.big_n, "a_priori": tb.a_priori})),
            ];
            (recs, tb.big_n)
        })
        .collect();

    let graded: Vec<(Prime, u32, u32, u32)> = pm_points
        .iter()
        .zip(&heads)
        .flat_map(|(&(p, m), (_, big_n))| (0..=deg).map(move |d| (p, m, d, *big_n)))
        .collect();
    let mut records: Vec<Record> = heads.into_iter().flat_map(|(r, _)| r).collect();
    records.extend(fan_out(&graded, |&(p, m, d, big_n)| {
        let t = theorem1_degree(d, big_n, &params(p, m, 0));
        vec![Record::new(T, "graded")
            .p(p.get())
            .m(m)
            .d(d)
            .metric("N", big_n)
            .metric("rank", t.rank as u64)
            .metric("expected_rank", t.expected_rank as u64)
            .metric("kernel_dim", t.kernel_dim as u64)
            .metric("relations_rank", t.relations_rank as u64)
            .metric("cokernel_exponent", t.cokernel_exponent)
            .verdict(t.passed(), || json!(t))]
    }));
    g.finish(
        T,
        &["p", "m", "d", "degree", "N", "a_priori", "rank", "expected_rank", "kernel_dim", "relations_rank", "cokernel_exponent", "steps"],
        records,
    )
}

fn theorem2(s: &Settings) -> SuiteReport {
    const T: &str = "theorem2";
    let mut g = Grid::new(s);
    let primes = g.primes(&[2, 3], &[2]);
    let ns = g.axis("n", &s.n, range(0, 3), range(0, 1));
    let ms = g.axis("m", &s.m, range(0, 1), vec![0]);
    let deg = g.deg(6, 3);
    let sweep_primes = g.primes_as("sweep_p", &[2, 3, 5], &[2, 3]);
    let (sweep_n, sweep_d) = g.pick((6u32, 12u32), (3, 6));
    g.note("sweep_n_max", sweep_n);
    g.note("sweep_d_max", sweep_d);

    let points: Vec<(Prime, u32, u32)> =
        product(&primes, &product(&ns, &ms)).into_iter().map(|(p, (n, m))| (p, n, m)).collect();
    let mut records = fan_out(&points, |&(p, n, m)| {
        let r = theorem2_check(&params(p, m, n), deg);
        let rec = |check: &str| {
            Record::new(T, check).p(p.get()).n(n).m(m).metric("n_prime", r.n_prime).metric("N", r.big_n)
        };
        let mut out = vec![
            rec("left")
                .degree(deg)
                .metric("generators", r.generators_checked as u64)
                .metric("charts", r.charts_checked as u64)
                .verdict(r.left_failures.is_empty(), || json!(r.left_failures)),
            rec("calc")
                .degree(deg)
                .metric("generators", r.calc_checked as u64)
                .verdict(r.calc_failures.is_empty(), || json!(r.calc_failures)),
        ];
        for rd in &r.right {
            out.push(
                rec("right")
                    .d(rd.d)
                    .metric("c", rd.c)
                    .metric("inequality", rd.inequality)
                    .metric("lattice_ok", rd.lattice_ok)
                    .verdict(rd.inequality && rd.lattice_ok, || json!(rd)),
            );
        }
        out
    });

    let violations = right_inequality_sweep(&sweep_primes, sweep_n, sweep_d);
    let count = sweep_primes.len() as u64 * (sweep_n as u64 + 1) * (sweep_d as u64 + 1);
    let sweep = Record::new(T, "inequality-sweep").metric("checked", count);
    records.push(sweep.verdict(violations.is_empty(), || json!(violations)));
    g.finish(
        T,
        &["p", "n", "m", "d", "degree", "n_prime", "N", "c", "generators", "charts", "inequality", "lattice_ok", "checked"],
        records,
    )
}
