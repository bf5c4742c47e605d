use num_traits::Zero;
use serde_json::{json, Value};

use crate::action::{ActionSpec, EdgeDatum, OrbitCarrier};
use crate::algebra::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripleVertex {
    pub component: usize,
    pub class: Vec<Rational>,
    /// Number of markings carried by the vertex.
    pub marks: usize,
    /// Marking labels (sorted) when the triple is labeled, empty otherwise.
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripleEdge {
    /// Tree vertex lying over the edge's source component.
    pub source: usize,
    pub sink: usize,
    pub datum: EdgeDatum,
}

/// A decorated tree `(T, τ, m)`; markings are either counts per vertex
/// (a shape) or explicit labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedTriple {
    pub vertices: Vec<TripleVertex>,
    pub edges: Vec<TripleEdge>,
    pub labeled: bool,
}

fn fmt_vec(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

impl DecoratedTriple {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v || e.sink == v).count()
    }

    /// `(neighbour, edge index)` pairs of `v`.
    pub fn neighbours(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| {
                if e.source == v {
                    Some((e.sink, i))
                } else if e.sink == v {
                    Some((e.source, i))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn total_class(&self) -> Vec<Rational> {
        let m = self.vertices.first().map(|v| v.class.len()).unwrap_or(0);
        let mut acc = vec![Rational::zero(); m];
        for c in self.vertices.iter().map(|v| &v.class).chain(self.edges.iter().map(|e| &e.datum.class)) {
            for (a, b) in acc.iter_mut().zip(c) {
                *a += b;
            }
        }
        acc
    }

    pub fn marking_count(&self) -> usize {
        self.vertices.iter().map(|v| v.marks).sum()
    }

    /// Π_e k_e.
    pub fn deck_factor(&self) -> u64 {
        self.edges.iter().map(|e| e.datum.k).product()
    }

    fn vertex_label(&self, v: usize) -> String {
        let x = &self.vertices[v];
        let marks = if self.labeled {
            format!("{:?}", x.labels)
        } else {
            x.marks.to_string()
        };
        format!("{}|{}|{}", x.component, fmt_vec(&x.class), marks)
    }

    fn edge_label(&self, e: usize, toward: usize) -> String {
        let d = &self.edges[e];
        let idx = match d.datum.carrier {
            OrbitCarrier::Edge(i) => i,
            OrbitCarrier::Vertex(i) => i,
        };
        let dir = if d.sink == toward { '>' } else { '<' };
        format!("{idx}:{}{dir}", d.datum.k)
    }

    /// Rooted code of the subtree at `v` away from `parent`, with the
    /// order of its decoration-preserving automorphism group.
    fn rooted(&self, v: usize, parent: Option<usize>) -> (String, u64) {
        let mut kids: Vec<(String, u64)> = self
            .neighbours(v)
            .into_iter()
            .filter(|(w, _)| Some(*w) != parent)
            .map(|(w, e)| {
                let (code, aut) = self.rooted(w, Some(v));
                (format!("{}{}", self.edge_label(e, w), code), aut)
            })
            .collect();
        kids.sort();
        let mut aut: u64 = kids.iter().map(|k| k.1).product();
        let mut i = 0;
        while i < kids.len() {
            let j = (i..kids.len()).find(|&j| kids[j].0 != kids[i].0).unwrap_or(kids.len());
            aut *= factorial(j - i);
            i = j;
        }
        let body: Vec<&str> = kids.iter().map(|k| k.0.as_str()).collect();
        (format!("[{}({})]", self.vertex_label(v), body.join("")), aut)
    }

    /// Tree centre: one vertex, or the two ends of the central edge.
    fn centre(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut alive: Vec<bool> = vec![true; n];
        let mut remaining = n;
        let mut leaves: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        while remaining > 2 {
            let mut next = Vec::new();
            for &l in &leaves {
                alive[l] = false;
                remaining -= 1;
                for (w, _) in self.neighbours(l) {
                    if alive[w] {
                        deg[w] -= 1;
                        if deg[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            leaves = next;
        }
        (0..n).filter(|&v| alive[v]).collect()
    }

    fn canonical(&self) -> (String, u64) {
        let c = self.centre();
        if c.len() == 1 {
            return self.rooted(c[0], None);
        }
        let (a, b) = (c[0], c[1]);
        let e = self
            .neighbours(a)
            .into_iter()
            .find(|(w, _)| *w == b)
            .map(|x| x.1)
            .expect("central edge");
        let (ca, aa) = self.rooted(a, Some(b));
        let (cb, ab) = self.rooted(b, Some(a));
        let one = format!("{ca}{}{cb}", self.edge_label(e, b));
        let two = format!("{cb}{}{ca}", self.edge_label(e, a));
        let swap = if one == two { 2 } else { 1 };
        (one.min(two), aa * ab * swap)
    }

    /// Isomorphism-invariant key.
    pub fn canonical_key(&self) -> String {
        format!("{}{}", if self.labeled { "L" } else { "S" }, self.canonical().0)
    }

    /// Order of the group of decoration- and marking-preserving tree
    /// automorphisms.
    pub fn tree_automorphisms(&self) -> u64 {
        self.canonical().1
    }

    /// Tree automorphisms × Π_e k_e.
    pub fn automorphism_order(&self) -> u64 {
        self.tree_automorphisms() * self.deck_factor()
    }

    /// Checks the structural invariants for `n` markings and class `beta`.
    pub fn check(&self, spec: &ActionSpec, n: usize, beta: &[Rational]) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(format!("malformed triple: {m}")));
        let nv = self.vertices.len();
        if nv == 0 || self.edges.len() + 1 != nv {
            return bad("not a tree");
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (w, _) in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("disconnected");
        }
        for e in &self.edges {
            let OrbitCarrier::Edge(i) = e.datum.carrier else {
                return bad("edge decorated by a vertex carrier");
            };
            let ge = &spec.edges[i];
            if self.vertices[e.source].component != ge.from || self.vertices[e.sink].component != ge.to {
                return bad("decoration is not a graph morphism");
            }
        }
        if self.total_class() != beta {
            return bad("class sum");
        }
        if self.marking_count() != n {
            return bad("marking sum");
        }
        if self.labeled {
            let mut all: Vec<usize> = self.vertices.iter().flat_map(|v| v.labels.iter().copied()).collect();
            all.sort_unstable();
            if all != (0..n).collect::<Vec<_>>() {
                return bad("labels");
            }
        }
        Ok(())
    }

    pub fn to_json(&self, spec: &ActionSpec) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                let mut o = json!({
                    "component": spec.components[v.component].id,
                    "class": v.class.iter().map(format_rational).collect::<Vec<_>>(),
                    "markings": v.marks,
                });
                if self.labeled {
                    o["labels"] = json!(v.labels);
                }
                o
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let idx = match e.datum.carrier {
                    OrbitCarrier::Edge(i) | OrbitCarrier::Vertex(i) => i,
                };
                let ge = &spec.edges[idx];
                json!({
                    "source": e.source,
                    "sink": e.sink,
                    "edge": [spec.components[ge.from].id, spec.components[ge.to].id],
                    "k": e.datum.k,
                    "class": e.datum.class.iter().map(format_rational).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "vertices": vertices,
            "edges": edges,
            "automorphisms": self.automorphism_order(),
        })
    }
}
