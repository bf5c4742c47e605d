//! Localization sum: vertex correlators, edge contributions and node
//! factors assembled over the minimal triples.
//!
//! Conventions at a tree vertex `v` over the component `X_c`, with flags
//! `F` of cotangent weight `ω_F` (`s·t/k` at the source end of an edge,
//! `−s·t/k` at the sink end) and `e = e(N_{X_c})`:
//!
//! | valence | markings | factor |
//! |---|---|---|
//! | 0 | ≥ 3 | `e^{-1}` × ψ-integral |
//! | 1 | 0 | `ω_F` |
//! | 1 | 1 | `γ · (−ω_F)^a` |
//! | 2 | 0 | `e / (ω_1 + ω_2)` |
//! | otherwise | | `e^{val−1} Π γ_i` × `Σ_b ∫_{M̄_{0,k}} Π ψ_i^{a_i} Π ψ_F^{b_F} ω_F^{−b_F−1}` |
//!
//! Node smoothing contributes `1/(ω_F − ψ_F)`. Vertices with a nonzero
//! class read their correlators from the spec's table.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::action::{format_class, ActionSpec, EdgeDatum};
use crate::algebra::{format_rational, Rational, RationalFunctionT, RingClass};
use crate::edge::{EdgeInputs, PreparedEdge};
use crate::error::{Error, Result};
use crate::graphs::{enumerate_shapes, DecoratedTriple};

/// A named insertion class with a descendant power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Insertion {
    pub name: String,
    pub psi: u32,
}

impl Insertion {
    pub fn new(name: &str, psi: u32) -> Self {
        Insertion {
            name: name.to_string(),
            psi,
        }
    }
}

/// Parses a comma-separated list; `tau_a(name)` or `taua(name)` carries a
/// descendant power.
pub fn parse_insertions(s: &str) -> Result<Vec<Insertion>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if let Some(rest) = item.strip_prefix("tau") {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            let (a, name) = rest
                .split_once('(')
                .and_then(|(a, r)| r.strip_suffix(')').map(|n| (a, n)))
                .ok_or_else(|| Error::Config(format!("malformed insertion {item:?}")))?;
            let psi = a
                .parse()
                .map_err(|_| Error::Config(format!("malformed descendant power in {item:?}")))?;
            out.push(Insertion::new(name.trim(), psi));
        } else {
            out.push(Insertion::new(item, 0));
        }
    }
    Ok(out)
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

/// `∫_{M̄_{0,n}} Π ψ_i^{a_i}`.
pub fn psi_integral(a: &[u32]) -> Result<Rational> {
    let n = a.len();
    if n < 3 {
        return Err(Error::Unstable { n });
    }
    let total: u32 = a.iter().sum();
    if total as usize != n - 3 {
        return Ok(Rational::zero());
    }
    Ok(a.iter().fold(factorial(total), |acc, &x| acc / factorial(x)))
}

/// `Σ_b ∫ Π ψ_i^{a_i} Π ψ_F^{b_F} · Π ω_F^{−b_F−1}` over all `b`.
fn node_sum(marks: &[u32], omegas: &[RationalFunctionT]) -> Result<RationalFunctionT> {
    let n = marks.len() + omegas.len();
    let dim = n as i64 - 3;
    let used: i64 = marks.iter().map(|&a| a as i64).sum();
    let free = dim - used;
    if free < 0 {
        return Ok(RationalFunctionT::zero());
    }
    let mut acc = RationalFunctionT::zero();
    let mut b = vec![0u32; omegas.len()];
    fn rec(
        i: usize,
        left: u32,
        b: &mut Vec<u32>,
        marks: &[u32],
        omegas: &[RationalFunctionT],
        acc: &mut RationalFunctionT,
    ) -> Result<()> {
        if i == b.len() {
            if left != 0 {
                return Ok(());
            }
            let mut all = marks.to_vec();
            all.extend(b.iter());
            let c = psi_integral(&all)?;
            let mut term = RationalFunctionT::constant(c);
            for (w, &bi) in omegas.iter().zip(b.iter()) {
                term = &term * &w.powi(-(bi as i64) - 1)?;
            }
            *acc = &*acc + &term;
            return Ok(());
        }
        for x in 0..=left {
            b[i] = x;
            rec(i + 1, left - x, b, marks, omegas, acc)?;
        }
        b[i] = 0;
        Ok(())
    }
    rec(0, free as u32, &mut b, marks, omegas, &mut acc)?;
    Ok(acc)
}

fn beta_key(beta: &[Rational]) -> String {
    beta.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

/// Genus-0 correlator of a fixed component with marked classes and
/// ψ-powers. Class-zero correlators are computed; others come from the
/// spec's correlator table.
pub fn vertex_correlator(
    spec: &ActionSpec,
    component: usize,
    beta_v: &[Rational],
    points: &[(RingClass, u32)],
) -> Result<RationalFunctionT> {
    let comp = &spec.components[component];
    let mut prod = RingClass::one(&comp.ring);
    for (c, _) in points {
        prod = prod.mul(c)?;
    }
    if beta_v.iter().all(|x| x.is_zero()) {
        let integral = prod.integrate_on(&comp.ring)?;
        if points.len() < 3 {
            return Ok(integral);
        }
        let a: Vec<u32> = points.iter().map(|p| p.1).collect();
        return Ok(integral.scale(&psi_integral(&a)?));
    }
    let missing = || {
        Error::MissingCorrelator(format!(
            "component {} in class ({})",
            comp.id,
            beta_key(beta_v)
        ))
    };
    let entries: Vec<_> = spec
        .correlators
        .iter()
        .filter(|e| e.component == component && e.beta == beta_v)
        .collect();
    let first = entries.first().ok_or_else(missing)?;
    let ring = &comp.ring;
    // Multilinear expansion over the basis.
    let mut acc = RationalFunctionT::zero();
    let mut choice = vec![0usize; points.len()];
    loop {
        let mut coeff = RationalFunctionT::one();
        let mut degree = 0u32;
        for (i, (c, a)) in points.iter().enumerate() {
            coeff = &coeff * c.coeff(choice[i]);
            degree += ring.degree(choice[i]) + a;
        }
        if !coeff.is_zero() && degree == first.vdim {
            let mut key: Vec<(Vec<u32>, u32)> = points
                .iter()
                .enumerate()
                .map(|(i, (_, a))| (ring.basis()[choice[i]].clone(), *a))
                .collect();
            key.sort();
            let entry = entries
                .iter()
                .find(|e| {
                    let mut p = e.points.clone();
                    p.sort();
                    p == key
                })
                .ok_or_else(|| {
                    Error::MissingCorrelator(format!(
                        "component {} in class ({}) with points {key:?}",
                        comp.id,
                        beta_key(beta_v)
                    ))
                })?;
            acc = &acc + &coeff.scale(&entry.value);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                let f = first.moving_factor.clone().unwrap_or_else(RationalFunctionT::one);
                return Ok(&acc * &f);
            }
            choice[i] += 1;
            if choice[i] < ring.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Per-graph result.
#[derive(Clone, Debug)]
pub struct GraphContribution {
    pub triple: DecoratedTriple,
    /// Contribution after division by the automorphism order.
    pub value: RationalFunctionT,
    pub automorphisms: u64,
    /// Euler class of each edge (constant part of its ψ-expansion).
    pub edge_euler: Vec<RingClass>,
    /// Scalar node factor of each class-0 vertex; present when no insertion
    /// carries a descendant, so that the factor does not depend on how the
    /// insertions are distributed.
    pub node_factors: Option<Vec<Option<RationalFunctionT>>>,
}

impl GraphContribution {
    pub fn to_json(&self, spec: &ActionSpec) -> Value {
        json!({
            "graph": self.triple.to_json(spec),
            "automorphisms": self.automorphisms,
            "edge_euler": self.edge_euler.iter().map(|e| format_class(e).unwrap_or_else(|_| e.to_string())).collect::<Vec<_>>(),
            "node_factors": self.node_factors.as_ref().map(|v| v.iter().map(|f| f.as_ref().map(|x| x.to_string())).collect::<Vec<_>>()),
            "value": self.value.to_string(),
        })
    }
}

/// Shared per-query data: prepared edges and component Euler classes.
pub struct Context<'a> {
    pub spec: &'a ActionSpec,
    edges: HashMap<EdgeDatum, Arc<PreparedEdge>>,
    normal_euler: Vec<(RingClass, Option<RingClass>)>,
}

impl<'a> Context<'a> {
    pub fn new(spec: &'a ActionSpec) -> Result<Self> {
        let normal_euler = spec
            .components
            .iter()
            .map(|c| {
                let e = c.normal_euler()?;
                let inv = e.invert_unit().ok();
                Ok((e, inv))
            })
            .collect::<Result<_>>()?;
        Ok(Context {
            spec,
            edges: HashMap::new(),
            normal_euler,
        })
    }

    /// Prepares every edge datum used by `triples`, in parallel.
    pub fn prepare(&mut self, triples: &[DecoratedTriple]) -> Result<()> {
        let mut todo: Vec<EdgeDatum> = triples
            .iter()
            .flat_map(|t| t.edges.iter().map(|e| e.datum.clone()))
            .filter(|d| !self.edges.contains_key(d))
            .collect();
        todo.sort();
        todo.dedup();
        let spec = self.spec;
        let done: Vec<(EdgeDatum, Arc<PreparedEdge>)> = todo
            .into_par_iter()
            .map(|d| {
                let p = PreparedEdge::new(EdgeInputs::for_datum(spec, &d)?)?;
                Ok((d, Arc::new(p)))
            })
            .collect::<Result<_>>()?;
        self.edges.extend(done);
        Ok(())
    }

    fn edge(&self, d: &EdgeDatum) -> Result<Arc<PreparedEdge>> {
        match self.edges.get(d) {
            Some(p) => Ok(p.clone()),
            None => Ok(Arc::new(PreparedEdge::new(EdgeInputs::for_datum(self.spec, d)?)?)),
        }
    }

    fn euler_power(&self, c: usize, p: i64) -> Result<RingClass> {
        let (e, inv) = &self.normal_euler[c];
        let base = if p >= 0 {
            e
        } else {
            inv.as_ref().ok_or(Error::NonInvertible)?
        };
        Ok(base.pow(p.unsigned_abs() as u32))
    }

    fn restriction(&self, c: usize, name: &str) -> Result<&RingClass> {
        self.spec.components[c]
            .restrictions
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown insertion class {name:?}")))
    }
}

/// Cotangent weight of the edge curve at the end lying over `v`.
fn flag_omega(t: &DecoratedTriple, spec: &ActionSpec, e: usize, v: usize) -> RationalFunctionT {
    let te = &t.edges[e];
    let stab = match te.datum.carrier {
        crate::action::OrbitCarrier::Edge(i) => spec.edges[i].stab,
        crate::action::OrbitCarrier::Vertex(_) => unreachable!("tree edges carry edge data"),
    };
    let w = Rational::new((stab as i64).into(), (te.datum.k as i64).into());
    let w = if te.source == v { w } else { -w };
    RationalFunctionT::monomial(w, 1)
}

/// Scalar vertex factor of a class-0 vertex: the ψ-integral, the node
/// denominators, or both, by valence and marking count.
fn node_factor(psis: &[u32], omegas: &[RationalFunctionT]) -> Result<RationalFunctionT> {
    match (omegas.len(), psis.len()) {
        (0, _) => Ok(RationalFunctionT::constant(psi_integral(psis)?)),
        (1, 0) => Ok(omegas[0].clone()),
        (1, 1) => (-&omegas[0]).powi(psis[0] as i64),
        (2, 0) => (&omegas[0] + &omegas[1]).inverse(),
        _ => node_sum(psis, omegas),
    }
}

/// Evaluates a tree with a fixed assignment of insertions to vertices.
struct Evaluator<'c, 'a> {
    ctx: &'c Context<'a>,
    t: &'c DecoratedTriple,
    marks: &'c [Vec<&'c Insertion>],
}

impl Evaluator<'_, '_> {
    fn up(&self, v: usize, parent: Option<(usize, usize)>) -> Result<RingClass> {
        let spec = self.ctx.spec;
        let t = self.t;
        let tv = &t.vertices[v];
        let c = tv.component;
        let ring = &spec.components[c].ring;
        let nbrs = t.neighbours(v);
        let val = nbrs.len();
        let marks = &self.marks[v];

        // Classes arriving from children, transported across their edges.
        let mut child_msgs = Vec::new();
        for &(w, e) in &nbrs {
            if Some(w) == parent.map(|p| p.0) {
                continue;
            }
            let msg = self.up(w, Some((v, e)))?;
            let pe = self.ctx.edge(&t.edges[e].datum)?;
            // w is the sink of e iff v is its source: transport sink → source.
            let forward = t.edges[e].source == w;
            child_msgs.push((e, pe.transfer(forward, &msg)?));
        }
        let omegas: Vec<RationalFunctionT> = nbrs.iter().map(|&(_, e)| flag_omega(t, spec, e, v)).collect();

        if tv.class.iter().any(|x| !x.is_zero()) {
            return self.nonconstant_vertex(v, parent, &child_msgs, &omegas);
        }

        let mut class = RingClass::one(ring);
        for ins in marks {
            class = class.mul(self.ctx.restriction(c, &ins.name)?)?;
        }
        for (_, m) in &child_msgs {
            class = class.mul(m)?;
        }
        let psis: Vec<u32> = marks.iter().map(|i| i.psi).collect();
        let power = match (val, marks.len()) {
            (0, _) => -1,
            (1, _) => 0,
            (2, 0) => 1,
            _ => val as i64 - 1,
        };
        class = class.mul(&self.ctx.euler_power(c, power)?)?;
        let factor = node_factor(&psis, &omegas)?;
        Ok(class.scale(&factor))
    }

    /// Vertex with a nonconstant map: each flag evaluates at its own point.
    fn nonconstant_vertex(
        &self,
        v: usize,
        parent: Option<(usize, usize)>,
        child_msgs: &[(usize, RingClass)],
        omegas: &[RationalFunctionT],
    ) -> Result<RingClass> {
        let spec = self.ctx.spec;
        let tv = &self.t.vertices[v];
        let c = tv.component;
        let ring = &spec.components[c].ring;
        let e = self.ctx.euler_power(c, 1)?;
        let nbrs = self.t.neighbours(v);
        let mut fixed: Vec<(RingClass, u32)> = Vec::new();
        for ins in &self.marks[v] {
            fixed.push((self.ctx.restriction(c, &ins.name)?.clone(), ins.psi));
        }
        let flags: Vec<(usize, RationalFunctionT)> = nbrs.iter().map(|x| x.1).zip(omegas.iter().cloned()).collect();
        let slot_classes = |slot: &RingClass| -> Result<Vec<RingClass>> {
            let mut out = Vec::new();
            for (edge, _) in &flags {
                let base = if Some(*edge) == parent.map(|p| p.1) {
                    slot.clone()
                } else {
                    child_msgs.iter().find(|m| m.0 == *edge).unwrap().1.clone()
                };
                out.push(base.mul(&e)?);
            }
            Ok(out)
        };
        // Expand each node factor 1/(ω − ψ) up to the vertex dimension.
        let nflags = flags.len();
        // Terms of ψ-degree above the vertex's virtual dimension vanish.
        let max_b = spec
            .correlators
            .iter()
            .filter(|e| e.component == c && e.beta == tv.class)
            .map(|e| e.vdim)
            .max()
            .unwrap_or(0);
        let eval = |slot: &RingClass| -> Result<RationalFunctionT> {
            let classes = slot_classes(slot)?;
            let mut acc = RationalFunctionT::zero();
            let mut b = vec![0u32; nflags];
            loop {
                let mut pts = fixed.clone();
                let mut w = RationalFunctionT::one();
                for (i, cl) in classes.iter().enumerate() {
                    pts.push((cl.clone(), b[i]));
                    w = &w * &flags[i].1.powi(-(b[i] as i64) - 1)?;
                }
                let corr = vertex_correlator(spec, c, &tv.class, &pts)?;
                acc = &acc + &(&corr * &w);
                let mut i = 0;
                loop {
                    if i == nflags {
                        return Ok(acc);
                    }
                    b[i] += 1;
                    if b[i] <= max_b {
                        break;
                    }
                    b[i] = 0;
                    i += 1;
                }
            }
        };
        if parent.is_none() {
            return Ok(RingClass::scalar(ring, eval(&RingClass::one(ring))?));
        }
        let mut out = RingClass::zero(ring);
        for (basis, dual) in RingClass::diagonal_decomposition(ring)? {
            let x = eval(&basis)?;
            if !x.is_zero() {
                out = out.add(&dual.scale(&x))?;
            }
        }
        Ok(out)
    }

    fn total(&self) -> Result<RationalFunctionT> {
        let root = 0;
        let c = self.t.vertices[root].component;
        let x = self.up(root, None)?;
        if self.t.vertices[root].class.iter().any(|x| !x.is_zero()) {
            // Already integrated over the vertex moduli.
            return Ok(x.unit_part().clone());
        }
        x.integrate_on(&self.ctx.spec.components[c].ring)
    }
}

/// Distributions of the typed insertion multiset over vertices with the
/// given marking counts, weighted by the number of labelings realizing it.
fn typed_assignments<'i>(types: &[(&'i Insertion, usize)], counts: &[usize]) -> Vec<(Vec<Vec<&'i Insertion>>, Rational)> {
    let mut out = Vec::new();
    let nv = counts.len();
    let mut per_vertex: Vec<Vec<usize>> = vec![vec![0; types.len()]; nv];
    fn rec<'i>(
        ti: usize,
        vi: usize,
        left: usize,
        types: &[(&'i Insertion, usize)],
        counts: &[usize],
        room: &mut Vec<usize>,
        per_vertex: &mut Vec<Vec<usize>>,
        out: &mut Vec<(Vec<Vec<&'i Insertion>>, Rational)>,
    ) {
        if ti == types.len() {
            let mut weight = Rational::one();
            for (t, (_, mult)) in types.iter().enumerate() {
                weight *= factorial(*mult as u32);
                for pv in per_vertex.iter() {
                    weight /= factorial(pv[t] as u32);
                }
            }
            let lists = per_vertex
                .iter()
                .map(|pv| {
                    pv.iter()
                        .enumerate()
                        .flat_map(|(t, &k)| std::iter::repeat(types[t].0).take(k))
                        .collect()
                })
                .collect();
            out.push((lists, weight));
            return;
        }
        if vi == counts.len() {
            if left == 0 {
                rec(ti + 1, 0, if ti + 1 < types.len() { types[ti + 1].1 } else { 0 }, types, counts, room, per_vertex, out);
            }
            return;
        }
        for k in 0..=left.min(room[vi]) {
            room[vi] -= k;
            per_vertex[vi][ti] = k;
            rec(ti, vi + 1, left - k, types, counts, room, per_vertex, out);
            per_vertex[vi][ti] = 0;
            room[vi] += k;
        }
    }
    let mut room = counts.to_vec();
    if types.is_empty() {
        if counts.iter().all(|&c| c == 0) {
            out.push((vec![vec![]; nv], Rational::one()));
        }
        return out;
    }
    rec(0, 0, types[0].1, types, counts, &mut room, &mut per_vertex, &mut out);
    out
}

/// Contribution of one triple. For a shape the insertions are summed over
/// all labelings; for a labeled triple label `i` carries `insertions[i]`.
pub fn graph_contribution(ctx: &Context, t: &DecoratedTriple, insertions: &[Insertion]) -> Result<GraphContribution> {
    let mut value = RationalFunctionT::zero();
    if t.labeled {
        let marks: Vec<Vec<&Insertion>> = t
            .vertices
            .iter()
            .map(|v| v.labels.iter().map(|&l| &insertions[l]).collect())
            .collect();
        value = Evaluator { ctx, t, marks: &marks }.total()?;
    } else {
        let mut types: BTreeMap<&Insertion, usize> = BTreeMap::new();
        for i in insertions {
            *types.entry(i).or_insert(0) += 1;
        }
        let types: Vec<(&Insertion, usize)> = types.into_iter().collect();
        let counts: Vec<usize> = t.vertices.iter().map(|v| v.marks).collect();
        for (marks, weight) in typed_assignments(&types, &counts) {
            let x = Evaluator { ctx, t, marks: &marks }.total()?;
            value = &value + &x.scale(&weight);
        }
    }
    let automorphisms = t.automorphism_order();
    let value = value.scale(&Rational::new(1.into(), (automorphisms as i64).into()));
    let edge_euler = t
        .edges
        .iter()
        .map(|e| {
            let p = ctx.edge(&e.datum)?;
            Ok(p.euler.coefficient(0, 0))
        })
        .collect::<Result<_>>()?;
    let node_factors = if insertions.iter().all(|i| i.psi == 0) {
        let spec = ctx.spec;
        let f = (0..t.vertices.len())
            .map(|v| {
                if t.vertices[v].class.iter().any(|x| !x.is_zero()) {
                    return Ok(None);
                }
                let omegas: Vec<_> = t.neighbours(v).iter().map(|&(_, e)| flag_omega(t, spec, e, v)).collect();
                node_factor(&vec![0; t.vertices[v].marks], &omegas).map(Some)
            })
            .collect::<Result<_>>()?;
        Some(f)
    } else {
        None
    };
    Ok(GraphContribution {
        triple: t.clone(),
        value,
        automorphisms,
        edge_euler,
        node_factors,
    })
}

#[derive(Clone, Debug, Default)]
pub struct InvariantOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub breakdown: bool,
}

#[derive(Clone, Debug)]
pub struct InvariantResult {
    pub total: RationalFunctionT,
    /// The constant value when the total is independent of `t`.
    pub value: Option<Rational>,
    /// Whether the insertion degrees match the virtual dimension.
    pub numerical: bool,
    pub vdim: i64,
    pub graphs: usize,
    pub contributions: Vec<GraphContribution>,
    pub millis: u128,
}

impl InvariantResult {
    pub fn to_json(&self, spec: &ActionSpec) -> Value {
        let mut v = json!({
            "total": self.value.as_ref().map(format_rational).unwrap_or_else(|| self.total.to_string()),
            "t_independent": self.value.is_some(),
            "numerical": self.numerical,
            "vdim": self.vdim,
            "graphs": self.graphs,
            "duration_ms": self.millis as u64,
        });
        if !self.numerical {
            v["tag"] = json!("non-numerical");
        }
        if !self.contributions.is_empty() {
            v["breakdown"] = Value::Array(self.contributions.iter().map(|c| c.to_json(spec)).collect());
        }
        v
    }
}

/// `vdim = dim X + ∫_β c1 + n − 3`.
pub fn virtual_dimension(spec: &ActionSpec, beta: &[Rational], n: usize) -> Result<i64> {
    let c1 = spec.c1(beta);
    if !c1.is_integer() {
        return Err(Error::Config(format!("∫ c1 over the class is {c1}, not an integer")));
    }
    Ok(spec.dim_x as i64 + c1.to_integer().to_i64().unwrap_or(i64::MAX) + n as i64 - 3)
}

/// `⟨τ_{a_1}γ_1 … τ_{a_n}γ_n⟩_{0,β}` by localization.
pub fn gw_invariant(
    spec: &ActionSpec,
    beta: &[Rational],
    insertions: &[Insertion],
    opts: &InvariantOptions,
) -> Result<InvariantResult> {
    let start = Instant::now();
    let n = insertions.len();
    let mut degree: i64 = 0;
    for ins in insertions {
        let c = spec
            .insertion(&ins.name)
            .ok_or_else(|| Error::Config(format!("unknown insertion class {:?}", ins.name)))?;
        degree += c.codim as i64 + ins.psi as i64;
    }
    let vdim = virtual_dimension(spec, beta, n)?;
    let numerical = degree == vdim && beta.iter().all(|b| !b.is_negative());
    let run = || -> Result<(RationalFunctionT, Vec<GraphContribution>, usize)> {
        let shapes = enumerate_shapes(spec, n, beta)?;
        let mut ctx = Context::new(spec)?;
        ctx.prepare(&shapes)?;
        let contributions: Vec<GraphContribution> = shapes
            .par_iter()
            .map(|t| graph_contribution(&ctx, t, insertions))
            .collect::<Result<_>>()?;
        let total = contributions
            .iter()
            .fold(RationalFunctionT::zero(), |acc, c| &acc + &c.value);
        Ok((total, contributions, shapes.len()))
    };
    let (total, contributions, graphs) = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let value = total.as_constant();
    if numerical && value.is_none() {
        return Err(Error::TDependent(format!(
            "total {total} over {graphs} graphs is not constant in t"
        )));
    }
    Ok(InvariantResult {
        total,
        value,
        numerical,
        vdim,
        graphs,
        contributions: if opts.breakdown { contributions } else { vec![] },
        millis: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::projective_space_spec;
    use crate::algebra::{rat, GradedRing};
    use crate::graphs::enumerate_triples;

    fn ins(names: &[&str]) -> Vec<Insertion> {
        names.iter().map(|n| Insertion::new(n, 0)).collect()
    }

    fn value(spec: &ActionSpec, d: i64, names: &[&str]) -> Rational {
        gw_invariant(spec, &[rat(d, 1)], &ins(names), &InvariantOptions::default())
            .unwrap()
            .value
            .unwrap()
    }

    #[test]
    fn psi_integrals() {
        assert_eq!(psi_integral(&[0, 0, 0]).unwrap(), rat(1, 1));
        assert_eq!(psi_integral(&[1, 0, 0, 0]).unwrap(), rat(1, 1));
        assert_eq!(psi_integral(&[2, 1, 0, 0, 0, 0]).unwrap(), rat(3, 1));
        assert_eq!(psi_integral(&[1, 0, 0]).unwrap(), rat(0, 1));
        assert!(psi_integral(&[0, 0]).is_err());
    }

    #[test]
    fn point_correlators() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        let pt = GradedRing::point();
        let t = RingClass::scalar(&pt, RationalFunctionT::t());
        let one = RingClass::one(&pt);
        let got = vertex_correlator(&s, 0, &[rat(0, 1)], &[(t.clone(), 0), (t.clone(), 0), (one.clone(), 0)]).unwrap();
        assert_eq!(got, &RationalFunctionT::t() * &RationalFunctionT::t());
        let got = vertex_correlator(&s, 0, &[rat(0, 1)], &[(t.clone(), 1), (one.clone(), 0), (one.clone(), 0), (one, 0)]).unwrap();
        assert_eq!(got, RationalFunctionT::t());
        let y = crate::action::trivial_projective_spec(1).unwrap();
        let h = RingClass::one(&y.components[0].ring);
        let err = vertex_correlator(&y, 0, &[rat(1, 1)], &[(h, 0)]).unwrap_err();
        assert!(err.to_string().contains("vertex GW data required"));
    }

    #[test]
    fn p1_line() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        assert_eq!(value(&s, 1, &["H", "H"]), rat(1, 1));
        assert_eq!(value(&s, 1, &["H", "H", "H"]), rat(1, 1));
        assert_eq!(value(&s, 1, &["pt", "pt"]), rat(1, 1));
        let s = projective_space_spec(1, &[0, 3]).unwrap();
        assert_eq!(value(&s, 1, &["H", "H"]), rat(1, 1));
    }

    #[test]
    fn p2_low_degree() {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        assert_eq!(value(&s, 1, &["pt", "pt"]), rat(1, 1));
        assert_eq!(value(&s, 2, &["pt"; 5]), rat(1, 1));
    }

    #[test]
    fn labeled_sum_matches_shapes() {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        let insertions = vec![Insertion::new("pt", 0), Insertion::new("H", 0), Insertion::new("H^2", 0)];
        let beta = [rat(1, 1)];
        let ctx = Context::new(&s).unwrap();
        let total = |ts: Vec<DecoratedTriple>| {
            ts.iter()
                .map(|t| graph_contribution(&ctx, t, &insertions).unwrap().value)
                .fold(RationalFunctionT::zero(), |a, b| &a + &b)
        };
        let a = total(enumerate_triples(&s, 3, &beta).unwrap());
        let b = total(enumerate_shapes(&s, 3, &beta).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.as_constant(), Some(rat(1, 1)));
    }

    #[test]
    fn descendants_and_insertion_parsing() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        let parsed = parse_insertions("tau_1(pt), pt").unwrap();
        assert_eq!(parsed, vec![Insertion::new("pt", 1), Insertion::new("pt", 0)]);
        // ⟨τ_1 pt, pt⟩_1 = vdim 3... mismatched, flagged
        let r = gw_invariant(&s, &[rat(1, 1)], &parsed, &InvariantOptions::default()).unwrap();
        assert!(!r.numerical);
        // ⟨τ_1(pt)⟩_{0,1} on P^1 with one marking: vdim = 1 + 2 + 1 - 3 = 1 ≠ 2
        let r = gw_invariant(&s, &[rat(0, 1)], &ins(&["pt", "1", "1"]), &InvariantOptions::default()).unwrap();
        assert_eq!(r.value, Some(rat(1, 1)));
    }
}
