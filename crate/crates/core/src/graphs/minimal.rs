use num_traits::{Signed, Zero};

use super::triple::DecoratedTriple;
use crate::action::ActionSpec;
use crate::algebra::Rational;

/// `Some(λ)` if `c = λ·d` for every pair, with `λ ≠ 0`.
fn common_ratio(pairs: &[(&[Rational], Vec<Rational>)]) -> Option<Rational> {
    let mut lambda: Option<Rational> = None;
    for (c, d) in pairs {
        for (x, y) in c.iter().zip(d) {
            if y.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let r = x / y;
            match &lambda {
                None => lambda = Some(r),
                Some(l) if *l != r => return None,
                _ => {}
            }
        }
    }
    lambda.filter(|l| !l.is_zero())
}

/// Minimality: no chain through degree-2, class-0 vertices splits a class
/// `k·[O]` of a graph edge joining its ends proportionally to the moment
/// increments.
pub fn is_minimal(t: &DecoratedTriple, spec: &ActionSpec) -> bool {
    let nv = t.vertices.len();
    let interior = |v: usize| t.degree(v) == 2 && t.vertices[v].class.iter().all(|x| x.is_zero());
    // Walk every simple path whose interior vertices are admissible.
    for start in 0..nv {
        let mut stack: Vec<Vec<(usize, usize)>> = t.neighbours(start).into_iter().map(|x| vec![x]).collect();
        while let Some(path) = stack.pop() {
            let (last, _) = *path.last().unwrap();
            if path.len() >= 2 && violates(t, spec, start, &path) {
                return false;
            }
            if !interior(last) {
                continue;
            }
            let prev = if path.len() >= 2 { path[path.len() - 2].0 } else { start };
            for (w, e) in t.neighbours(last) {
                if w != prev {
                    let mut p = path.clone();
                    p.push((w, e));
                    stack.push(p);
                }
            }
        }
    }
    true
}

fn violates(t: &DecoratedTriple, spec: &ActionSpec, start: usize, path: &[(usize, usize)]) -> bool {
    let comp = |v: usize| t.vertices[v].component;
    let mu = |v: usize| &spec.components[comp(v)].mu;
    let mut verts = vec![start];
    verts.extend(path.iter().map(|x| x.0));
    let pairs: Vec<(&[Rational], Vec<Rational>)> = path
        .iter()
        .enumerate()
        .map(|(j, (_, e))| {
            let d = mu(verts[j + 1]).iter().zip(mu(verts[j])).map(|(a, b)| a - b).collect();
            (t.edges[*e].datum.class.as_slice(), d)
        })
        .collect();
    let Some(lambda) = common_ratio(&pairs) else {
        return false;
    };
    let (u1, us) = (comp(start), comp(*verts.last().unwrap()));
    // λ > 0 reads the chain along the orientation u1 → us.
    let (from, to) = if lambda.is_positive() { (u1, us) } else { (us, u1) };
    spec.edges.iter().any(|e| {
        e.from == from && e.to == to && {
            let k = lambda.abs() * Rational::from_integer(e.stab.into());
            k.is_integer() && k.is_positive()
        }
    })
}
