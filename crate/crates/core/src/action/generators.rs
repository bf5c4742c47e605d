//! Ready-made action specs: projective spaces with diagonal actions, a
//! trivially acted-on projective space, and products.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::spec::*;
use crate::algebra::{rat, GradedRing, Rational, RationalFunctionT, RingClass};
use crate::error::{Error, Result};

fn rint(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// `P^N` with weights `a_0, …, a_N` on the homogeneous coordinates.
///
/// Fixed points `p_i` have tangent characters `(a_k - a_i) t`, moment
/// vector `[a_i]`, and `H|_{p_i} = -a_i t`. Insertions are `1`, `H`,
/// `H^2`, …, `H^N` and `pt` (equal to `H^N`).
pub fn projective_space_spec(n: u32, weights: &[i64]) -> Result<ActionSpec> {
    if n == 0 {
        return Err(Error::Config("projective space needs N >= 1".into()));
    }
    if weights.len() != n as usize + 1 {
        return Err(Error::Config(format!("expected {} weights, got {}", n + 1, weights.len())));
    }
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Config(
            "non-isolated fixed locus; supply a full ActionSpec manually".into(),
        ));
    }
    let pt = GradedRing::point();
    let insertions = insertions_up_to(n);
    let mut components = Vec::new();
    for (i, &a) in weights.iter().enumerate() {
        let normal = weights
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, &b)| {
                let sign = if b > a { Sign::Plus } else { Sign::Minus };
                WeightPiece::trivial(sign, (b - a).unsigned_abs(), 1, &pt)
            })
            .collect();
        let h = RationalFunctionT::monomial(rint(-a), 1);
        let restrictions = insertions
            .iter()
            .map(|ins| {
                let c = h.powi(ins.codim as i64).expect("nonzero power");
                (ins.name.clone(), RingClass::scalar(&pt, c))
            })
            .collect();
        components.push(FixedComponent {
            id: format!("p{i}"),
            dim: 0,
            mu: vec![rint(a)],
            ring: pt.clone(),
            normal,
            restrictions,
            vertex_lattice: vec![],
        });
    }
    let mut edges = Vec::new();
    for i in 0..weights.len() {
        for j in 0..weights.len() {
            let (a, b) = (weights[i], weights[j]);
            if a >= b {
                continue;
            }
            let walls = weights
                .iter()
                .filter(|&&c| a < c && c < b)
                .map(|&c| WallSpec {
                    position: rint(c),
                    k_plus: vec![],
                    k_minus: vec![],
                    xi_plus: RingClass::zero(&pt),
                    xi_minus: RingClass::zero(&pt),
                })
                .collect();
            edges.push(EdgeSpec {
                from: i,
                to: j,
                stab: (b - a) as u64,
                orbit_class: vec![rint(1)],
                carrier: None,
                walls,
            });
        }
    }
    edges.sort_by(|x, y| (weights[x.from], weights[x.to]).cmp(&(weights[y.from], weights[y.to])));
    let spec = ActionSpec {
        dim_x: n,
        h2_rank: 1,
        c1_pairing: vec![rint(n as i64 + 1)],
        projection: one_vec(1),
        components,
        edges,
        insertions,
        correlators: vec![],
    };
    spec.validate()?;
    Ok(spec)
}

fn insertions_up_to(n: u32) -> Vec<InsertionClass> {
    let mut out = vec![InsertionClass {
        name: "1".into(),
        codim: 0,
    }];
    for k in 1..=n {
        out.push(InsertionClass {
            name: if k == 1 { "H".into() } else { format!("H^{k}") },
            codim: k,
        });
    }
    out.push(InsertionClass {
        name: "pt".into(),
        codim: n,
    });
    out
}

/// `P^N` with the trivial action: a single fixed component `y` equal to
/// the whole space. Insertions are named as in [`projective_space_spec`].
pub fn trivial_projective_spec(n: u32) -> Result<ActionSpec> {
    let ring = GradedRing::projective(n, "h");
    let insertions = insertions_up_to(n);
    let restrictions = insertions
        .iter()
        .map(|ins| (ins.name.clone(), RingClass::basis(&ring, ins.codim as usize)))
        .collect();
    let spec = ActionSpec {
        dim_x: n,
        h2_rank: 1,
        c1_pairing: vec![rint(n as i64 + 1)],
        projection: one_vec(1),
        components: vec![FixedComponent {
            id: "y".into(),
            dim: n,
            mu: vec![Rational::zero()],
            ring,
            normal: vec![],
            restrictions,
            vertex_lattice: vec![vec![rat(1, 1)]],
        }],
        edges: vec![],
        insertions,
        correlators: vec![],
    };
    spec.validate()?;
    Ok(spec)
}

/// Image of `x ∈ A` under `A → A ⊗ B`, `a ↦ a ⊗ 1`.
pub(crate) fn embed_left(x: &RingClass, t: &Arc<GradedRing>, b: &GradedRing) -> RingClass {
    let mut coeffs = vec![RationalFunctionT::zero(); t.len()];
    for (i, c) in x.coeffs().iter().enumerate() {
        coeffs[i * b.len() + b.unit_index()] = c.clone();
    }
    RingClass::from_coeffs(t, coeffs).expect("tensor size")
}

/// Image of `y ∈ B` under `B → A ⊗ B`, `b ↦ 1 ⊗ b`.
pub(crate) fn embed_right(y: &RingClass, t: &Arc<GradedRing>, a: &GradedRing) -> RingClass {
    let mut coeffs = vec![RationalFunctionT::zero(); t.len()];
    let nb = y.ring().len();
    for (j, c) in y.coeffs().iter().enumerate() {
        coeffs[a.unit_index() * nb + j] = c.clone();
    }
    RingClass::from_coeffs(t, coeffs).expect("tensor size")
}

fn embed_piece(p: &WeightPiece, t: &Arc<GradedRing>, b: &GradedRing) -> WeightPiece {
    WeightPiece {
        sign: p.sign,
        weight: p.weight,
        rank: p.rank,
        chern: p.chern.iter().map(|c| embed_left(c, t, b)).collect(),
    }
}

/// `A × Y` where `Y` carries the trivial action and has a single fixed
/// component. Curve classes are `(β_A, β_Y)`; insertions are named
/// `"a|b"` for insertions `a` of `A` and `b` of `Y`. Correlator tables are
/// not carried over.
pub fn product_spec(a: &ActionSpec, y: &ActionSpec) -> Result<ActionSpec> {
    if y.components.len() != 1 || !y.edges.is_empty() {
        return Err(Error::Config("second factor must be acted on trivially".into()));
    }
    let yc = &y.components[0];
    let yr = &yc.ring;
    let m = a.h2_rank;
    let extend = |v: &[Rational], tail: &[Rational]| -> Vec<Rational> { [v, tail].concat() };
    let zeros_y = vec![Rational::zero(); y.h2_rank];

    let mut components = Vec::new();
    for c in &a.components {
        let t = GradedRing::tensor(&c.ring, yr)?;
        let mut restrictions = BTreeMap::new();
        for ia in &a.insertions {
            for iy in &y.insertions {
                let l = embed_left(&c.restrictions[&ia.name], &t, yr);
                let r = embed_right(&yc.restrictions[&iy.name], &t, &c.ring);
                restrictions.insert(format!("{}|{}", ia.name, iy.name), l.mul(&r)?);
            }
        }
        let mut vertex_lattice: Vec<Vec<Rational>> =
            c.vertex_lattice.iter().map(|g| extend(g, &zeros_y)).collect();
        for g in &yc.vertex_lattice {
            vertex_lattice.push(extend(&vec![Rational::zero(); m], g));
        }
        components.push(FixedComponent {
            id: c.id.clone(),
            dim: c.dim + yc.dim,
            mu: extend(&c.mu, &yc.mu),
            normal: c.normal.iter().map(|p| embed_piece(p, &t, yr)).collect(),
            ring: t,
            restrictions,
            vertex_lattice,
        });
    }

    let mut edges = Vec::new();
    for e in &a.edges {
        let (ua, va) = (&a.components[e.from], &a.components[e.to]);
        let (ut, vt) = (&components[e.from].ring, &components[e.to].ring);
        let (base, ev_s, ev_t, fixed) = match &e.carrier {
            Some(c) => (c.ring.clone(), c.ev_source.clone(), c.ev_sink.clone(), c.fixed_class.clone()),
            None => {
                let pt = GradedRing::point();
                let one = vec![RingClass::one(&pt)];
                (pt.clone(), one.clone(), one, Some(RingClass::one(&pt)))
            }
        };
        let ring = GradedRing::tensor(&base, yr)?;
        // ev^*(e_a ⊗ y_b) = ev_A^*(e_a) ⊗ y_b
        let pull = |ev: &[RingClass], src: &Arc<GradedRing>, src_a: &GradedRing| -> Result<Vec<RingClass>> {
            let mut out = Vec::with_capacity(src.len());
            for ia in 0..src_a.len() {
                for jb in 0..yr.len() {
                    let l = embed_left(&ev[ia], &ring, yr);
                    let r = embed_right(&RingClass::basis(yr, jb), &ring, &base);
                    out.push(l.mul(&r)?);
                }
            }
            Ok(out)
        };
        let ev_source = pull(&ev_s, ut, &ua.ring)?;
        let ev_sink = pull(&ev_t, vt, &va.ring)?;
        let walls = e
            .walls
            .iter()
            .map(|w| WallSpec {
                position: w.position.clone(),
                k_plus: w.k_plus.iter().map(|p| embed_piece(p, &ring, yr)).collect(),
                k_minus: w.k_minus.iter().map(|p| embed_piece(p, &ring, yr)).collect(),
                xi_plus: embed_left(&w.xi_plus, &ring, yr),
                xi_minus: embed_left(&w.xi_minus, &ring, yr),
            })
            .collect();
        edges.push(EdgeSpec {
            from: e.from,
            to: e.to,
            stab: e.stab,
            orbit_class: extend(&e.orbit_class, &zeros_y),
            carrier: Some(EdgeCarrier {
                fixed_class: fixed.map(|f| embed_left(&f, &ring, yr)),
                ring,
                ev_source,
                ev_sink,
            }),
            walls,
        });
    }

    let mut insertions = Vec::new();
    for ia in &a.insertions {
        for iy in &y.insertions {
            insertions.push(InsertionClass {
                name: format!("{}|{}", ia.name, iy.name),
                codim: ia.codim + iy.codim,
            });
        }
    }
    let spec = ActionSpec {
        dim_x: a.dim_x + y.dim_x,
        h2_rank: m + y.h2_rank,
        c1_pairing: extend(&a.c1_pairing, &y.c1_pairing),
        projection: extend(&a.projection, &zeros_y),
        components,
        edges,
        insertions,
        correlators: vec![],
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_shape() {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        assert_eq!(s.components.len(), 3);
        assert_eq!(s.edges.len(), 3);
        let long = s.edges.iter().find(|e| e.stab == 5).unwrap();
        assert_eq!(long.walls.len(), 1);
        assert_eq!(s.components[2].c1_weight(), -9);
    }

    #[test]
    fn repeated_weights_rejected() {
        let err = projective_space_spec(2, &[0, 1, 1]).unwrap_err();
        assert!(err.to_string().contains("non-isolated fixed locus"));
    }

    #[test]
    fn product_with_trivial_line() {
        let a = projective_space_spec(1, &[0, 1]).unwrap();
        let y = trivial_projective_spec(1).unwrap();
        let p = product_spec(&a, &y).unwrap();
        assert_eq!(p.dim_x, 2);
        assert_eq!(p.components[0].dim, 1);
        assert!(p.insertion("pt|pt").is_some());
        assert_eq!(p.edges[0].orbit_class, vec![rat(1, 1), rat(0, 1)]);
    }
}
