//! Minimal decorated trees indexing the fixed loci of the stable map space.

mod minimal;
mod triple;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

pub use minimal::is_minimal;
pub use triple::{DecoratedTriple, TripleEdge, TripleVertex};

use crate::action::{invariant_curve_classes, leq, max_edge_multiple, vertex_classes, ActionSpec, EdgeDatum, OrbitCarrier};
use crate::algebra::Rational;
use crate::error::{Error, Result};

fn check_request(spec: &ActionSpec, n: usize, beta: &[Rational]) -> Result<()> {
    if beta.len() != spec.h2_rank {
        return Err(Error::Config(format!("class has {} entries, expected {}", beta.len(), spec.h2_rank)));
    }
    if beta.iter().any(|b| b.is_negative()) {
        return Err(Error::Config("class must be effective".into()));
    }
    if n < 3 && beta.iter().all(|b| b.is_zero()) {
        return Err(Error::Unstable { n });
    }
    Ok(())
}

/// Unmarked decorated trees with total class `beta`, before minimality.
fn unmarked_trees(spec: &ActionSpec, beta: &[Rational]) -> Vec<DecoratedTriple> {
    let bound = max_edge_multiple(spec, beta);
    let data: Vec<EdgeDatum> = invariant_curve_classes(spec, beta, bound)
        .into_iter()
        .filter(|d| matches!(d.carrier, OrbitCarrier::Edge(_)))
        .collect();
    let vclasses: Vec<Vec<Vec<Rational>>> =
        (0..spec.components.len()).map(|c| vertex_classes(spec, c, beta)).collect();

    let mut level: BTreeMap<String, DecoratedTriple> = BTreeMap::new();
    for (c, classes) in vclasses.iter().enumerate() {
        for class in classes {
            let t = DecoratedTriple {
                vertices: vec![TripleVertex {
                    component: c,
                    class: class.clone(),
                    marks: 0,
                    labels: vec![],
                }],
                edges: vec![],
                labeled: false,
            };
            level.insert(t.canonical_key(), t);
        }
    }
    let mut done = Vec::new();
    while !level.is_empty() {
        let mut next = BTreeMap::new();
        for t in level.values() {
            let total = t.total_class();
            for v in 0..t.vertices.len() {
                let cv = t.vertices[v].component;
                for d in &data {
                    let OrbitCarrier::Edge(i) = d.carrier else { unreachable!() };
                    let ge = &spec.edges[i];
                    let other = if ge.from == cv {
                        ge.to
                    } else if ge.to == cv {
                        ge.from
                    } else {
                        continue;
                    };
                    for class in &vclasses[other] {
                        let sum: Vec<Rational> = total
                            .iter()
                            .zip(&d.class)
                            .zip(class)
                            .map(|((a, b), c)| a + b + c)
                            .collect();
                        if !leq(&sum, beta) {
                            continue;
                        }
                        let mut u = t.clone();
                        let w = u.vertices.len();
                        u.vertices.push(TripleVertex {
                            component: other,
                            class: class.clone(),
                            marks: 0,
                            labels: vec![],
                        });
                        let (source, sink) = if ge.from == cv { (v, w) } else { (w, v) };
                        u.edges.push(TripleEdge {
                            source,
                            sink,
                            datum: d.clone(),
                        });
                        next.entry(u.canonical_key()).or_insert(u);
                    }
                }
            }
        }
        done.extend(std::mem::take(&mut level).into_values().filter(|t| t.total_class() == beta));
        level = next;
    }
    done
}

fn compositions(n: usize, parts: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if cur.len() + 1 == parts {
        cur.push(n);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for k in 0..=n {
        cur.push(k);
        compositions(n - k, parts, out, cur);
        cur.pop();
    }
}

/// Minimal triples with marking counts per vertex, one per isomorphism
/// class. This is what the assembly sums over.
pub fn enumerate_shapes(spec: &ActionSpec, n: usize, beta: &[Rational]) -> Result<Vec<DecoratedTriple>> {
    check_request(spec, n, beta)?;
    let mut out = BTreeMap::new();
    for t in unmarked_trees(spec, beta) {
        if !is_minimal(&t, spec) {
            continue;
        }
        let mut comps = Vec::new();
        compositions(n, t.vertices.len(), &mut comps, &mut Vec::new());
        for c in comps {
            let mut u = t.clone();
            for (v, k) in u.vertices.iter_mut().zip(&c) {
                v.marks = *k;
            }
            let single_contracted = u.edges.is_empty() && u.vertices[0].class.iter().all(|x| x.is_zero());
            if single_contracted && n < 3 {
                continue;
            }
            out.entry(u.canonical_key()).or_insert(u);
        }
    }
    Ok(out.into_values().collect())
}

fn label_assignments(marks: &[usize], pool: &[usize], out: &mut Vec<Vec<Vec<usize>>>, cur: &mut Vec<Vec<usize>>) {
    if cur.len() == marks.len() {
        out.push(cur.clone());
        return;
    }
    let k = marks[cur.len()];
    let mut choose = |sel: Vec<usize>| {
        let rest: Vec<usize> = pool.iter().copied().filter(|x| !sel.contains(x)).collect();
        cur.push(sel);
        label_assignments(marks, &rest, out, cur);
        cur.pop();
    };
    let mut idx: Vec<usize> = (0..k).collect();
    if k > pool.len() {
        return;
    }
    loop {
        choose(idx.iter().map(|&i| pool[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + pool.len() - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimal triples with labeled markings `0..n`, one per isomorphism class.
pub fn enumerate_triples(spec: &ActionSpec, n: usize, beta: &[Rational]) -> Result<Vec<DecoratedTriple>> {
    let mut out = BTreeMap::new();
    for s in enumerate_shapes(spec, n, beta)? {
        let marks: Vec<usize> = s.vertices.iter().map(|v| v.marks).collect();
        let mut assignments = Vec::new();
        label_assignments(&marks, &(0..n).collect::<Vec<_>>(), &mut assignments, &mut Vec::new());
        for a in assignments {
            let mut u = s.clone();
            u.labeled = true;
            for (v, l) in u.vertices.iter_mut().zip(a) {
                v.labels = l;
            }
            out.entry(u.canonical_key()).or_insert(u);
        }
    }
    Ok(out.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{projective_space_spec, trivial_projective_spec};
    use crate::algebra::rat;

    fn r(n: i64) -> Vec<Rational> {
        vec![rat(n, 1)]
    }

    #[test]
    fn p1_degree_one_two_points() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        let ts = enumerate_triples(&s, 2, &r(1)).unwrap();
        assert_eq!(ts.len(), 4);
        for t in &ts {
            t.check(&s, 2, &r(1)).unwrap();
            assert_eq!(t.automorphism_order(), 1);
        }
        assert_eq!(enumerate_shapes(&s, 2, &r(1)).unwrap().len(), 3);
    }

    #[test]
    fn double_cover_deck_factor() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        let ts = enumerate_triples(&s, 2, &r(2)).unwrap();
        let single: Vec<_> = ts.iter().filter(|t| t.edges.len() == 1 && t.vertices[0].marks == 1).collect();
        assert!(!single.is_empty());
        assert!(single.iter().all(|t| t.automorphism_order() == 2));
    }

    #[test]
    fn symmetric_legs() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        let shapes = enumerate_shapes(&s, 0, &r(2)).unwrap();
        let star = shapes.iter().find(|t| t.edges.len() == 2 && t.edges.iter().all(|e| e.source == t.edges[0].source));
        assert_eq!(star.unwrap().tree_automorphisms(), 2);
    }

    #[test]
    fn zero_class_and_unstable() {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        let ts = enumerate_triples(&s, 3, &r(0)).unwrap();
        assert_eq!(ts.len(), 3);
        assert!(ts.iter().all(|t| t.vertices.len() == 1 && t.vertices[0].marks == 3));
        assert!(matches!(enumerate_triples(&s, 0, &r(0)), Err(Error::Unstable { n: 0 })));
        let y = trivial_projective_spec(2).unwrap();
        assert_eq!(enumerate_triples(&y, 3, &r(0)).unwrap().len(), 1);
    }

    fn chain(s: &ActionSpec, ks: (u64, u64)) -> DecoratedTriple {
        let v = |c| TripleVertex {
            component: c,
            class: r(0),
            marks: 0,
            labels: vec![],
        };
        let e01 = s.edges.iter().position(|e| e.from == 0 && e.to == 1).unwrap();
        let e15 = s.edges.iter().position(|e| e.from == 1 && e.to == 2).unwrap();
        DecoratedTriple {
            vertices: vec![v(0), v(1), v(2)],
            edges: vec![
                TripleEdge {
                    source: 0,
                    sink: 1,
                    datum: EdgeDatum::edge(e01, ks.0, s),
                },
                TripleEdge {
                    source: 1,
                    sink: 2,
                    datum: EdgeDatum::edge(e15, ks.1, s),
                },
            ],
            labeled: false,
        }
    }

    #[test]
    fn minimality_on_p2_chain() {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        assert!(is_minimal(&chain(&s, (1, 1)), &s));
        assert!(!is_minimal(&chain(&s, (1, 4)), &s));
        assert!(!is_minimal(&chain(&s, (2, 8)), &s));
        let shapes = enumerate_shapes(&s, 0, &r(5)).unwrap();
        let bad = chain(&s, (1, 4)).canonical_key();
        assert!(shapes.iter().all(|t| t.canonical_key() != bad));
        assert!(shapes.iter().all(|t| is_minimal(t, &s)));
    }
}
