//! Charts of the iterated blow-ups of the projective line at the
//! `F_p`-rational points of the special fiber, and the tree of components.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{Prime, Q};
use crate::weyl::{Chart, GradedSymbol};

/// One digit of a chart address: a representative in `{0, ..., p-1}` or `inf`.
/// Serialized as a number or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Digit {
    Finite(u64),
    Inf,
}

impl Serialize for Digit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Digit::Finite(a) => s.serialize_u64(*a),
            Digit::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Digit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Digit, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(a) => Ok(Digit::Finite(a)),
            Raw::Str(s) if s == "inf" => Ok(Digit::Inf),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad digit {s:?}"))),
        }
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Digit::Finite(a) => write!(f, "{a}"),
            Digit::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    Interior,
    BlowUpChart,
    ResidualDisc,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChartAddress {
    pub kind: ChartKind,
    pub level: u32,
    pub address: Vec<Digit>,
}

/// `x - a = p^scale * t` on the x-chart, or the same with `y` when the
/// address starts with `inf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartTransform {
    pub chart: Chart,
    #[serde(serialize_with = "crate::arith::big_as_string")]
    pub center: BigInt,
    pub scale: u32,
}

/// Representatives of `F_p` together with `inf`.
fn r_inf(p: Prime) -> Vec<Digit> {
    (0..p.get()).map(Digit::Finite).chain([Digit::Inf]).collect()
}

/// All addresses `(a0, a1, ..., a_{len-1})` with `a0` in `R ∪ {inf}` and the rest in `R`.
fn addresses(p: Prime, len: u32) -> Vec<Vec<Digit>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out: Vec<Vec<Digit>> = r_inf(p).into_iter().map(|d| vec![d]).collect();
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..p.get()).map(move |r| {
                    let mut b = a.clone();
                    b.push(Digit::Finite(r));
                    b
                })
            })
            .collect();
    }
    out
}

/// The covering: interior, blow-up charts at levels `1..=n`, residual discs at level `n`.
pub fn enumerate_charts(p: Prime, n: u32) -> Vec<ChartAddress> {
    let mut out = vec![ChartAddress { kind: ChartKind::Interior, level: 0, address: Vec::new() }];
    for nu in 1..=n {
        for a in addresses(p, nu) {
            out.push(ChartAddress { kind: ChartKind::BlowUpChart, level: nu, address: a });
        }
    }
    for b in addresses(p, n + 1) {
        out.push(ChartAddress { kind: ChartKind::ResidualDisc, level: n, address: b });
    }
    out
}

impl ChartAddress {
    /// Center and scale of the chart coordinate. `None` for the interior.
    pub fn transform(&self, p: Prime) -> Option<ChartTransform> {
        let scale = match self.kind {
            ChartKind::Interior => return None,
            ChartKind::BlowUpChart => self.level - 1,
            ChartKind::ResidualDisc => self.level,
        };
        let (chart, start) = match self.address[0] {
            Digit::Inf => (Chart::Y, 1),
            _ => (Chart::X, 0),
        };
        let mut center = BigInt::from(0);
        let mut pw = BigInt::from(1);
        for (i, d) in self.address.iter().enumerate() {
            if let Digit::Finite(a) = d {
                if i >= start {
                    center += &pw * BigInt::from(*a);
                }
            }
            pw *= p.big();
        }
        Some(ChartTransform { chart, center, scale })
    }
}

/// Rewrites `f(x) d^{(x)d}` in the chart coordinate `t` with `x = a + p^s t`,
/// so `d_x^{(x)d} = p^{-sd} d_t^{(x)d}`. A symbol given on the x-chart is first
/// moved to the y-chart when the transform lives there.
pub fn to_chart(s: &GradedSymbol, t: &ChartTransform, p: Prime) -> Option<GradedSymbol> {
    let on_chart = if s.chart == t.chart { s.clone() } else { s.to_other_chart()? };
    let ps = p.qpow(t.scale as i64);
    let g = on_chart.coeff.substitute_affine(&Q::from_integer(t.center.clone()), &ps);
    let g = g.scale(&p.qpow(-((t.scale * s.degree) as i64)));
    Some(GradedSymbol { chart: t.chart, degree: s.degree, coeff: g })
}

/// A component of the special fiber, identified by its address; the root is
/// the strict transform of the original special fiber.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeNode {
    pub kind: String,
    pub level: u32,
    pub address: Vec<Digit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartTree {
    pub p: u64,
    pub n: u32,
    pub nodes: Vec<TreeNode>,
    /// Pairs of node indices for components that meet.
    pub edges: Vec<(usize, usize)>,
}

/// Intersection graph of the special fiber after `n` rounds of blow-ups.
pub fn chart_tree(p: Prime, n: u32) -> ChartTree {
    let mut nodes = vec![TreeNode { kind: "root".into(), level: 0, address: Vec::new() }];
    let mut edges = Vec::new();
    let mut prev: Vec<usize> = vec![0];
    for nu in 1..=n {
        let mut cur = Vec::new();
        for a in addresses(p, nu) {
            let parent_addr = &a[..a.len() - 1];
            let parent = *prev
                .iter()
                .find(|&&i| nodes[i].address == parent_addr)
                .expect("parent component exists");
            let kind = if nu == n { "end" } else { "exceptional" };
            nodes.push(TreeNode { kind: kind.into(), level: nu, address: a });
            edges.push((parent, nodes.len() - 1));
            cur.push(nodes.len() - 1);
        }
        prev = cur;
    }
    ChartTree { p: p.get(), n, nodes, edges }
}

impl ChartTree {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for (a, b) in &self.edges {
            deg[*a] += 1;
            deg[*b] += 1;
        }
        deg
    }

    pub fn ends(&self) -> usize {
        self.nodes.iter().filter(|v| v.level == self.n && self.n > 0).count()
    }

    /// Connected with `|E| = |V| - 1`.
    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.nodes.len() {
            return false;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            for (a, b) in &self.edges {
                if *a == v {
                    stack.push(*b);
                } else if *b == v {
                    stack.push(*a);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every component that is not an end meets `p + 1` others.
    pub fn degrees_ok(&self) -> bool {
        let deg = self.degrees();
        self.nodes.iter().zip(deg).all(|(v, k)| {
            if self.n == 0 {
                k == 0
            } else if v.level == self.n {
                k == 1
            } else {
                k as u64 == self.p + 1
            }
        })
    }
}
