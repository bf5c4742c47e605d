use std::collections::BTreeSet;

use num_traits::Zero;

use crate::action::{ActionSpec, EdgeDatum, OrbitCarrier};
use crate::algebra::{format_rational, Rational};
use crate::graphs::{DecoratedTriple, TripleEdge, TripleVertex};

fn fits(x: &[Rational], beta: &[Rational]) -> bool {
    x.iter().zip(beta).all(|(a, b)| a <= b)
}

fn add(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn scale(x: &[Rational], k: u64) -> Vec<Rational> {
    let k = Rational::from_integer(k.into());
    x.iter().map(|a| a * &k).collect()
}

/// Edge lists of every labeled tree on `v` vertices.
fn labeled_trees(v: usize) -> Vec<Vec<(usize, usize)>> {
    match v {
        0 => vec![],
        1 => vec![vec![]],
        2 => vec![vec![(0, 1)]],
        _ => {
            let mut out = Vec::new();
            let len = v - 2;
            let total = v.pow(len as u32);
            for code in 0..total {
                let mut seq = Vec::with_capacity(len);
                let mut c = code;
                for _ in 0..len {
                    seq.push(c % v);
                    c /= v;
                }
                let mut deg = vec![1usize; v];
                for &x in &seq {
                    deg[x] += 1;
                }
                let mut edges = Vec::new();
                for &x in &seq {
                    let leaf = (0..v).find(|&i| deg[i] == 1).unwrap();
                    edges.push((leaf, x));
                    deg[leaf] -= 1;
                    deg[x] -= 1;
                }
                let rest: Vec<usize> = (0..v).filter(|&i| deg[i] == 1).collect();
                edges.push((rest[0], rest[1]));
                out.push(edges);
            }
            out
        }
    }
}

fn lattice_classes(gens: &[Vec<Rational>], beta: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![vec![Rational::zero(); beta.len()]];
    while let Some(c) = stack.pop() {
        if !out.insert(c.clone()) {
            continue;
        }
        for g in gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())) {
            let next = add(&c, g);
            if fits(&next, beta) {
                stack.push(next);
            }
        }
    }
    out.into_iter().collect()
}

fn moment(spec: &ActionSpec, c: usize) -> Rational {
    spec.components[c]
        .mu
        .iter()
        .zip(&spec.projection)
        .map(|(a, b)| a * b)
        .fold(Rational::zero(), |x, y| x + y)
}

fn path(t: &DecoratedTriple, a: usize, b: usize) -> Vec<(usize, usize)> {
    // (vertex, edge used to reach it), starting after `a`.
    let nv = t.vertices.len();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut queue = std::collections::VecDeque::from([a]);
    seen[a] = true;
    while let Some(x) = queue.pop_front() {
        for (i, e) in t.edges.iter().enumerate() {
            let y = if e.source == x {
                e.sink
            } else if e.sink == x {
                e.source
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, i));
                queue.push_back(y);
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = b;
    while cur != a {
        let (p, e) = prev[cur].unwrap();
        out.push((cur, e));
        cur = p;
    }
    out.reverse();
    out
}

/// Condition (4): no chain `u_1 … u_s` through degree-2, class-0 vertices
/// carries the proportional split `β (u_{j+1} − u_j)/(u_s − u_1)` of an
/// invariant class `β` joining its ends.
fn minimal(spec: &ActionSpec, t: &DecoratedTriple) -> bool {
    let nv = t.vertices.len();
    let degree = |v: usize| t.edges.iter().filter(|e| e.source == v || e.sink == v).count();
    for a in 0..nv {
        for b in 0..nv {
            if a == b {
                continue;
            }
            let p = path(t, a, b);
            if p.len() < 2 {
                continue;
            }
            let interior_ok = p[..p.len() - 1]
                .iter()
                .all(|&(v, _)| degree(v) == 2 && t.vertices[v].class.iter().all(|x| x.is_zero()));
            if !interior_ok {
                continue;
            }
            let (ca, cb) = (t.vertices[a].component, t.vertices[b].component);
            let total = p
                .iter()
                .fold(vec![Rational::zero(); spec.h2_rank], |acc, &(_, e)| add(&acc, &t.edges[e].datum.class));
            let span = moment(spec, cb) - moment(spec, ca);
            if span.is_zero() {
                continue;
            }
            let in_omega = spec.edges.iter().any(|g| {
                ((g.from, g.to) == (ca, cb) || (g.from, g.to) == (cb, ca))
                    && g.orbit_class.iter().zip(&total).find(|(o, _)| !o.is_zero()).is_some_and(|(o, x)| {
                        let k = x / o;
                        k.is_integer() && k > Rational::zero() && scale(&g.orbit_class, k.to_integer().try_into().unwrap_or(0)) == total
                    })
            });
            if !in_omega {
                continue;
            }
            let mut last = a;
            let proportional = p.iter().all(|&(v, e)| {
                let r = (moment(spec, t.vertices[v].component) - moment(spec, t.vertices[last].component)) / &span;
                last = v;
                t.edges[e].datum.class == total.iter().map(|x| x * &r).collect::<Vec<_>>()
            });
            if proportional {
                return false;
            }
        }
    }
    true
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism-invariant form: the lexicographically least encoding over
/// all vertex orderings.
pub fn oracle_form(t: &DecoratedTriple) -> String {
    let nv = t.vertices.len();
    let mut best: Option<String> = None;
    for perm in permutations(nv) {
        // perm[new] = old
        let mut pos = vec![0; nv];
        for (new, &old) in perm.iter().enumerate() {
            pos[old] = new;
        }
        let verts: Vec<String> = perm
            .iter()
            .map(|&old| {
                let v = &t.vertices[old];
                let cls: Vec<String> = v.class.iter().map(format_rational).collect();
                let m = if t.labeled { format!("{:?}", v.labels) } else { v.marks.to_string() };
                format!("{}/{}/{}", v.component, cls.join(","), m)
            })
            .collect();
        let mut edges: Vec<String> = t
            .edges
            .iter()
            .map(|e| {
                let idx = match e.datum.carrier {
                    OrbitCarrier::Edge(i) | OrbitCarrier::Vertex(i) => i,
                };
                format!("{}>{}:{}x{}", pos[e.source], pos[e.sink], idx, e.datum.k)
            })
            .collect();
        edges.sort();
        let s = format!("{}#{}", verts.join(";"), edges.join(";"));
        if best.as_ref().map_or(true, |b| s < *b) {
            best = Some(s);
        }
    }
    best.unwrap_or_default()
}

struct Search<'a> {
    spec: &'a ActionSpec,
    beta: &'a [Rational],
    n: usize,
    classes: Vec<Vec<Vec<Rational>>>,
    found: BTreeSet<String>,
    out: Vec<DecoratedTriple>,
}

impl Search<'_> {
    fn edges(&mut self, tree: &[(usize, usize)], comps: &[usize], i: usize, sum: Vec<Rational>, chosen: &mut Vec<TripleEdge>) {
        if i == tree.len() {
            let mut vc = Vec::new();
            self.vertex_classes(comps, 0, sum, chosen, &mut vc);
            return;
        }
        let (a, b) = tree[i];
        for (g, ge) in self.spec.edges.iter().enumerate() {
            let (source, sink) = if (ge.from, ge.to) == (comps[a], comps[b]) {
                (a, b)
            } else if (ge.from, ge.to) == (comps[b], comps[a]) {
                (b, a)
            } else {
                continue;
            };
            if ge.orbit_class.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut k = 1;
            loop {
                let cls = scale(&ge.orbit_class, k);
                let next = add(&sum, &cls);
                if !fits(&next, self.beta) {
                    break;
                }
                chosen.push(TripleEdge {
                    source,
                    sink,
                    datum: EdgeDatum {
                        carrier: OrbitCarrier::Edge(g),
                        class: cls,
                        k,
                    },
                });
                self.edges(tree, comps, i + 1, next, chosen);
                chosen.pop();
                k += 1;
            }
        }
    }

    fn vertex_classes(&mut self, comps: &[usize], v: usize, sum: Vec<Rational>, edges: &[TripleEdge], vc: &mut Vec<Vec<Rational>>) {
        if v == comps.len() {
            if sum.as_slice() == self.beta {
                self.markings(comps, edges, vc);
            }
            return;
        }
        for c in self.classes[comps[v]].clone() {
            let next = add(&sum, &c);
            if fits(&next, self.beta) {
                vc.push(c);
                self.vertex_classes(comps, v + 1, next, edges, vc);
                vc.pop();
            }
        }
    }

    fn markings(&mut self, comps: &[usize], edges: &[TripleEdge], vc: &[Vec<Rational>]) {
        let nv = comps.len();
        let total = nv.pow(self.n as u32);
        for code in 0..total {
            let mut labels = vec![Vec::new(); nv];
            let mut c = code;
            for l in 0..self.n {
                labels[c % nv].push(l);
                c /= nv;
            }
            let t = DecoratedTriple {
                vertices: (0..nv)
                    .map(|v| TripleVertex {
                        component: comps[v],
                        class: vc[v].clone(),
                        marks: labels[v].len(),
                        labels: labels[v].clone(),
                    })
                    .collect(),
                edges: edges.to_vec(),
                labeled: true,
            };
            if nv == 1 && self.n < 3 && vc[0].iter().all(|x| x.is_zero()) {
                continue;
            }
            if !minimal(self.spec, &t) {
                continue;
            }
            if self.found.insert(oracle_form(&t)) {
                self.out.push(t);
            }
        }
    }
}

/// Every minimal labeled triple with at most `e_max` edges, by exhaustive
/// generation over labeled trees, decorations and marking assignments.
pub fn brute_force_triples(spec: &ActionSpec, n: usize, beta: &[Rational], e_max: usize) -> Vec<DecoratedTriple> {
    if n < 3 && beta.iter().all(|b| b.is_zero()) {
        return vec![];
    }
    let nc = spec.components.len();
    let mut s = Search {
        spec,
        beta,
        n,
        classes: spec.components.iter().map(|c| lattice_classes(&c.vertex_lattice, beta)).collect(),
        found: BTreeSet::new(),
        out: Vec::new(),
    };
    for nv in 1..=e_max + 1 {
        for tree in labeled_trees(nv) {
            for code in 0..nc.pow(nv as u32) {
                let mut comps = Vec::with_capacity(nv);
                let mut c = code;
                for _ in 0..nv {
                    comps.push(c % nc);
                    c /= nc;
                }
                if tree.iter().any(|&(a, b)| comps[a] == comps[b]) {
                    continue;
                }
                s.edges(&tree, &comps, 0, vec![Rational::zero(); beta.len()], &mut Vec::new());
            }
        }
    }
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::projective_space_spec;
    use crate::algebra::rat;

    #[test]
    fn tree_counts() {
        for v in 1..=6usize {
            let want = if v <= 2 { 1 } else { v.pow(v as u32 - 2) };
            assert_eq!(labeled_trees(v).len(), want);
        }
    }

    #[test]
    fn small_cases() {
        let p1 = projective_space_spec(1, &[0, 1]).unwrap();
        assert_eq!(brute_force_triples(&p1, 2, &[rat(1, 1)], 2).len(), 4);
        let p2 = projective_space_spec(2, &[0, 1, 5]).unwrap();
        assert_eq!(brute_force_triples(&p2, 3, &[rat(0, 1)], 2).len(), 3);
    }
}
