use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::spec::{leq, ActionSpec};
use crate::algebra::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentVertex {
    pub id: String,
    #[serde(serialize_with = "ser_rationals")]
    pub mu: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEdge {
    pub from: usize,
    pub to: usize,
    pub stab: u64,
    #[serde(serialize_with = "ser_rationals")]
    pub orbit_class: Vec<Rational>,
}

/// The oriented graph of fixed components and one-dimensional orbit families.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentGraph {
    pub vertices: Vec<MomentVertex>,
    pub edges: Vec<MomentEdge>,
}

pub(crate) fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

pub fn build_moment_graph(spec: &ActionSpec) -> Result<MomentGraph> {
    let vertices = spec
        .components
        .iter()
        .map(|c| MomentVertex {
            id: c.id.clone(),
            mu: c.mu.clone(),
        })
        .collect();
    let mut edges = Vec::new();
    for e in &spec.edges {
        let (u, v) = (&spec.components[e.from].mu, &spec.components[e.to].mu);
        if !leq(u, v) || u == v {
            return Err(Error::Config(format!(
                "edge ({},{}) violates partial order",
                spec.components[e.from].id, spec.components[e.to].id
            )));
        }
        if orbit_class(u, v, e.stab) != e.orbit_class {
            return Err(Error::Config(format!(
                "edge ({},{}): class/stabilizer inconsistency",
                spec.components[e.from].id, spec.components[e.to].id
            )));
        }
        edges.push(MomentEdge {
            from: e.from,
            to: e.to,
            stab: e.stab,
            orbit_class: e.orbit_class.clone(),
        });
    }
    Ok(MomentGraph { vertices, edges })
}

/// Degree of the orbit closure of a point with limits of moment `m` and `M`.
pub fn orbit_degree(m: &Rational, big_m: &Rational) -> Rational {
    big_m - m
}

/// `(v − u) / stab`.
pub fn orbit_class(u: &[Rational], v: &[Rational], stab: u64) -> Vec<Rational> {
    let s = Rational::from_integer(stab.into());
    u.iter().zip(v).map(|(a, b)| (b - a) / &s).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum OrbitCarrier {
    Vertex(usize),
    Edge(usize),
}

/// An invariant curve class `ω = (c, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeDatum {
    pub carrier: OrbitCarrier,
    #[serde(serialize_with = "ser_rationals")]
    pub class: Vec<Rational>,
    /// Multiple of the primitive orbit class (0 for vertex carriers).
    pub k: u64,
}

impl EdgeDatum {
    pub fn edge(index: usize, k: u64, spec: &ActionSpec) -> Self {
        let o = &spec.edges[index].orbit_class;
        let kr = Rational::from_integer(k.into());
        EdgeDatum {
            carrier: OrbitCarrier::Edge(index),
            class: o.iter().map(|x| x * &kr).collect(),
            k,
        }
    }

    /// Covering degree onto the orbit closure as a reduced fraction `n/m`,
    /// i.e. `k / stab`.
    pub fn cover(&self, spec: &ActionSpec) -> (u64, u64) {
        match self.carrier {
            OrbitCarrier::Vertex(_) => (0, 1),
            OrbitCarrier::Edge(e) => {
                let s = spec.edges[e].stab;
                let g = num_integer::gcd(self.k, s);
                (self.k / g, s / g)
            }
        }
    }
}

/// All nonnegative integer combinations of the component's lattice
/// generators bounded componentwise by `beta`, including zero.
pub fn vertex_classes(spec: &ActionSpec, component: usize, beta: &[Rational]) -> Vec<Vec<Rational>> {
    let gens = &spec.components[component].vertex_lattice;
    let mut out = BTreeSet::new();
    let zero = vec![Rational::zero(); beta.len()];
    fn rec(gens: &[Vec<Rational>], i: usize, cur: Vec<Rational>, beta: &[Rational], out: &mut BTreeSet<Vec<Rational>>) {
        if i == gens.len() {
            out.insert(cur);
            return;
        }
        let mut c = cur;
        loop {
            rec(gens, i + 1, c.clone(), beta, out);
            let next: Vec<Rational> = c.iter().zip(&gens[i]).map(|(a, b)| a + b).collect();
            if !leq(&next, beta) {
                break;
            }
            c = next;
        }
    }
    if leq(&zero, beta) {
        rec(gens, 0, zero, beta, &mut out);
    }
    out.into_iter().collect()
}

/// Every invariant curve class fitting under `beta`, with edge multiples
/// capped at `bound`.
pub fn invariant_curve_classes(spec: &ActionSpec, beta: &[Rational], bound: u64) -> Vec<EdgeDatum> {
    let mut out = Vec::new();
    for (i, _) in spec.components.iter().enumerate() {
        for class in vertex_classes(spec, i, beta) {
            out.push(EdgeDatum {
                carrier: OrbitCarrier::Vertex(i),
                class,
                k: 0,
            });
        }
    }
    for (i, _) in spec.edges.iter().enumerate() {
        for k in 1..=bound {
            let d = EdgeDatum::edge(i, k, spec);
            if !leq(&d.class, beta) {
                break;
            }
            out.push(d);
        }
    }
    out
}

/// Largest `k` with `k·[O] ≤ β` over all edges, used as a default bound.
pub fn max_edge_multiple(spec: &ActionSpec, beta: &[Rational]) -> u64 {
    let mut best = 0;
    for e in &spec.edges {
        let mut k = 0u64;
        for (o, b) in e.orbit_class.iter().zip(beta) {
            if o.is_zero() {
                continue;
            }
            let q = (b / o).floor().to_integer().to_u64().unwrap_or(0);
            k = if k == 0 { q } else { k.min(q) };
        }
        best = best.max(k);
    }
    best
}
