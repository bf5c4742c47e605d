//! Contributions of the edge spaces `M_{ω,2}`: the virtual normal bundle
//! as a K-class, its equivariant Euler class, the fixed class, and the
//! operator `c_{ω,n1,n2}`.
//!
//! Normalization. For `ω = k·[O]` on an edge with stabilizer `s`, write the
//! cover as the reduced fraction `n/m = k/s` and let `h = m/n`. The Euler
//! class is
//!
//! ```text
//!   Π_{Q+ at source} Π_{l ≥ 0, lh < w} p_Q((w − lh)t − lh ψ₁)
//! · Π_{Q− at sink}   Π_{l ≥ 0, lh < w} p_Q((−w + lh)t − lh ψ₂)
//! / Π_{Q− at source} Π_{l ≥ 1, lh < w} p_Q((−w + lh)t − lh ψ₁)
//! / Π_{Q+ at sink}   Π_{l ≥ 1, lh < w} p_Q((w − lh)t − lh ψ₂)
//! · wall terms,
//! ```
//!
//! with the wall terms of each interior wall taken over the same `l`
//! range. On isolated edges of `P^N` this is the product of the nonzero
//! weights of `H^0(f^*TP^N)` for every `k`.

mod blowup;

use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

pub use blowup::{blowup_tangent_delta, BlowupDelta, BlowupSummand};

use crate::action::{format_class, ActionSpec, EdgeDatum, OrbitCarrier, Sign, WallSpec, WeightPiece};
use crate::algebra::{format_rational, p_eval, GradedRing, LocalClass, Rational, RationalFunctionT, RingClass};
use crate::error::{Error, Result};

/// Everything needed to evaluate one edge datum.
#[derive(Clone, Debug)]
pub struct EdgeInputs {
    pub label: String,
    pub k: u64,
    pub stab: u64,
    /// Reduced `k / stab`.
    pub n: u64,
    pub m: u64,
    pub ring: Arc<GradedRing>,
    /// Normal pieces of the source component, pulled back to the carrier.
    pub source: Vec<WeightPiece>,
    pub sink: Vec<WeightPiece>,
    pub walls: Vec<WallSpec>,
    /// Images of the source component's basis in the carrier ring.
    pub ev_source: Vec<RingClass>,
    pub ev_sink: Vec<RingClass>,
    pub source_ring: Arc<GradedRing>,
    pub sink_ring: Arc<GradedRing>,
    pub fixed_class: Option<RingClass>,
    pub isolated: bool,
    pub psi_bound: u32,
}

fn pull(x: &RingClass, ev: &[RingClass], ring: &Arc<GradedRing>) -> Result<RingClass> {
    let mut acc = RingClass::zero(ring);
    for (c, img) in x.coeffs().iter().zip(ev) {
        if !c.is_zero() {
            acc = acc.add(&img.scale(c))?;
        }
    }
    Ok(acc)
}

fn pull_piece(p: &WeightPiece, ev: &[RingClass], ring: &Arc<GradedRing>) -> Result<WeightPiece> {
    Ok(WeightPiece {
        sign: p.sign,
        weight: p.weight,
        rank: p.rank,
        chern: p.chern.iter().map(|c| pull(c, ev, ring)).collect::<Result<_>>()?,
    })
}

impl EdgeInputs {
    /// Inputs for `k` times the orbit class of edge `index` of `spec`.
    pub fn from_spec(spec: &ActionSpec, index: usize, k: u64) -> Result<EdgeInputs> {
        let e = spec
            .edges
            .get(index)
            .ok_or_else(|| Error::Invalid(format!("no edge #{index}")))?;
        if k == 0 {
            return Err(Error::Invalid("edge multiple must be positive".into()));
        }
        let (u, v) = (&spec.components[e.from], &spec.components[e.to]);
        let label = format!("({},{})x{k}", u.id, v.id);
        let g = num_integer::gcd(k, e.stab);
        let (ring, ev_source, ev_sink, fixed_class, isolated) = match &e.carrier {
            None => {
                let pt = GradedRing::point();
                let one = vec![RingClass::one(&pt)];
                (pt.clone(), one.clone(), one, Some(RingClass::one(&pt)), true)
            }
            Some(c) => (c.ring.clone(), c.ev_source.clone(), c.ev_sink.clone(), c.fixed_class.clone(), false),
        };
        let (pu, pv) = (spec.wall_position(e.from), spec.wall_position(e.to));
        let mut interior: Vec<Rational> = (0..spec.components.len())
            .map(|c| spec.wall_position(c))
            .filter(|p| *p > pu && *p < pv)
            .collect();
        interior.sort();
        interior.dedup();
        let mut walls = Vec::new();
        for p in &interior {
            let w = e.walls.iter().find(|w| &w.position == p).ok_or_else(|| {
                Error::MissingWallData(format!("edge {label} crosses the wall at {p} without K/L data"))
            })?;
            walls.push(w.clone());
        }
        Ok(EdgeInputs {
            label,
            k,
            stab: e.stab,
            n: k / g,
            m: e.stab / g,
            source: u.normal.iter().map(|p| pull_piece(p, &ev_source, &ring)).collect::<Result<_>>()?,
            sink: v.normal.iter().map(|p| pull_piece(p, &ev_sink, &ring)).collect::<Result<_>>()?,
            psi_bound: spec.dim_x + ring.top_degree(),
            ring,
            walls,
            ev_source,
            ev_sink,
            source_ring: u.ring.clone(),
            sink_ring: v.ring.clone(),
            fixed_class,
            isolated,
        })
    }

    pub fn for_datum(spec: &ActionSpec, d: &EdgeDatum) -> Result<EdgeInputs> {
        match d.carrier {
            OrbitCarrier::Edge(i) => Self::from_spec(spec, i, d.k),
            OrbitCarrier::Vertex(_) => Err(Error::Invalid("vertex carrier has no edge space".into())),
        }
    }

    /// Step `h = m/n` between consecutive twists.
    pub fn step(&self) -> Rational {
        Rational::new(self.m.into(), self.n.into())
    }

    /// `l` values with `l·h < w`, starting at `from`.
    fn range(&self, w: u64, from: u64) -> impl Iterator<Item = u64> {
        // l·m < n·w
        let (n, m) = (self.n, self.m);
        (from..).take_while(move |l| l * m < n * w)
    }

    pub fn is_fractional(&self) -> bool {
        self.m > 1
    }
}

/// Which part of the edge a K-class summand comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Source,
    Sink,
    Wall { index: usize, plus: bool },
}

/// One summand `± [E ⊗ L]`: its Euler class is `p_E(arg)` with
/// `arg = t_coeff·t + psi_coeff·ψ_i + xi_sign·ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct KSummand {
    /// `Plus` summands multiply, `Minus` summands divide.
    pub sign: Sign,
    pub origin: Origin,
    pub piece: usize,
    pub piece_sign: Sign,
    pub weight: u64,
    pub rank: usize,
    pub l: u64,
    pub t_coeff: Rational,
    /// 1 or 2; 0 when no ψ enters.
    pub psi_index: u8,
    pub psi_coeff: Rational,
    /// `(ξ⁺ if Plus else ξ⁻, ±1)`.
    pub xi: Option<(Sign, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KClassSum {
    pub summands: Vec<KSummand>,
}

/// The K-class of the moving part of the virtual normal bundle.
pub fn edge_kclass(inputs: &EdgeInputs) -> KClassSum {
    let h = inputs.step();
    let mut out = Vec::new();
    let lh = |l: u64| &h * Rational::from_integer(l.into());
    let wr = |w: u64| Rational::from_integer(w.into());
    for (side, pieces, psi) in [(Origin::Source, &inputs.source, 1u8), (Origin::Sink, &inputs.sink, 2u8)] {
        for (i, p) in pieces.iter().enumerate() {
            // Q+ at the source and Q− at the sink multiply from l = 0; the
            // opposite signs divide from l = 1.
            let main = matches!((side, p.sign), (Origin::Source, Sign::Plus) | (Origin::Sink, Sign::Minus));
            let f = Rational::from_integer(p.sign.factor().into());
            for l in inputs.range(p.weight, if main { 0 } else { 1 }) {
                out.push(KSummand {
                    sign: if main { Sign::Plus } else { Sign::Minus },
                    origin: side,
                    piece: i,
                    piece_sign: p.sign,
                    weight: p.weight,
                    rank: p.rank,
                    l,
                    t_coeff: &f * (wr(p.weight) - lh(l)),
                    psi_index: psi,
                    psi_coeff: -lh(l),
                    xi: None,
                });
            }
        }
    }
    for (j, wall) in inputs.walls.iter().enumerate() {
        for (plus, pieces) in [(true, &wall.k_plus), (false, &wall.k_minus)] {
            for (i, p) in pieces.iter().enumerate() {
                let f = Rational::from_integer(p.sign.factor().into());
                let (own, other) = if plus { (Sign::Plus, Sign::Minus) } else { (Sign::Minus, Sign::Plus) };
                for l in inputs.range(p.weight, 0) {
                    let base = KSummand {
                        sign: Sign::Plus,
                        origin: Origin::Wall { index: j, plus },
                        piece: i,
                        piece_sign: p.sign,
                        weight: p.weight,
                        rank: p.rank,
                        l,
                        t_coeff: &f * (wr(p.weight) - lh(l)),
                        psi_index: 0,
                        psi_coeff: Rational::zero(),
                        xi: Some((own, 1)),
                    };
                    out.push(KSummand {
                        sign: Sign::Minus,
                        xi: Some((other, -1)),
                        ..base.clone()
                    });
                    out.push(base);
                }
            }
        }
    }
    KClassSum { summands: out }
}

fn argument(
    inputs: &EdgeInputs,
    t_coeff: &Rational,
    psi: u8,
    psi_coeff: &Rational,
    xi: Option<(Sign, i64)>,
    wall: Option<&WallSpec>,
) -> Result<LocalClass> {
    let b = inputs.psi_bound;
    let ring = &inputs.ring;
    let mut x = LocalClass::scalar(ring, RationalFunctionT::monomial(t_coeff.clone(), 1), b);
    if psi > 0 && !psi_coeff.is_zero() {
        let (i, j) = if psi == 1 { (1, 0) } else { (0, 1) };
        x = x.add(&LocalClass::psi_monomial(RationalFunctionT::constant(psi_coeff.clone()), ring, i, j, b))?;
    }
    if let (Some((which, sgn)), Some(w)) = (xi, wall) {
        let c = if which == Sign::Plus { &w.xi_plus } else { &w.xi_minus };
        let c = if sgn < 0 { c.neg() } else { c.clone() };
        x = x.add(&LocalClass::from_class(c, b))?;
    }
    Ok(x)
}

fn piece_of<'a>(inputs: &'a EdgeInputs, s: &KSummand) -> &'a WeightPiece {
    match s.origin {
        Origin::Source => &inputs.source[s.piece],
        Origin::Sink => &inputs.sink[s.piece],
        Origin::Wall { index, plus: true } => &inputs.walls[index].k_plus[s.piece],
        Origin::Wall { index, plus: false } => &inputs.walls[index].k_minus[s.piece],
    }
}

impl KClassSum {
    /// Euler class evaluated summand by summand.
    pub fn euler(&self, inputs: &EdgeInputs) -> Result<LocalClass> {
        let mut num = LocalClass::one(&inputs.ring, inputs.psi_bound);
        let mut den = num.clone();
        for s in &self.summands {
            let wall = match s.origin {
                Origin::Wall { index, .. } => Some(&inputs.walls[index]),
                _ => None,
            };
            let x = argument(inputs, &s.t_coeff, s.psi_index, &s.psi_coeff, s.xi, wall)?;
            let e = p_eval(&piece_of(inputs, s).chern, &x)?;
            match s.sign {
                Sign::Plus => num = num.mul(&e)?,
                Sign::Minus => den = den.mul(&e)?,
            }
        }
        num.mul(&den.invert_unit()?)
    }

    /// `Σ ± rank`.
    pub fn rank(&self) -> i64 {
        self.summands.iter().map(|s| s.sign.factor() * s.rank as i64).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.summands
                .iter()
                .map(|s| {
                    let origin = match s.origin {
                        Origin::Source => "source".to_string(),
                        Origin::Sink => "sink".to_string(),
                        Origin::Wall { index, plus } => format!("wall{index}{}", if plus { "+" } else { "-" }),
                    };
                    json!({
                        "sign": s.sign.as_str(),
                        "origin": origin,
                        "piece": format!("Q{}_{}", s.piece_sign.as_str(), s.weight),
                        "rank": s.rank,
                        "l": s.l,
                        "t": format_rational(&s.t_coeff),
                        "psi": if s.psi_index == 0 { Value::Null } else {
                            json!({"index": s.psi_index, "coeff": format_rational(&s.psi_coeff)})
                        },
                        "xi": s.xi.map(|(w, sg)| format!("{}xi{}", if sg < 0 { "-" } else { "+" }, w.as_str())),
                    })
                })
                .collect(),
        )
    }
}

/// Equivariant Euler class of the moving part, by the closed product
/// formula (see the module documentation).
pub fn edge_euler(inputs: &EdgeInputs) -> Result<LocalClass> {
    let ring = &inputs.ring;
    let b = inputs.psi_bound;
    let h = inputs.step();
    let mut num = LocalClass::one(ring, b);
    let mut den = LocalClass::one(ring, b);
    let lh = |l: u64| &h * Rational::from_integer(l.into());
    for (pieces, psi, positive_side) in [(&inputs.source, 1u8, Sign::Plus), (&inputs.sink, 2u8, Sign::Minus)] {
        for p in pieces.iter() {
            let f = Rational::from_integer(p.sign.factor().into());
            let w = Rational::from_integer(p.weight.into());
            let first = if p.sign == positive_side { 0 } else { 1 };
            for l in inputs.range(p.weight, first) {
                let x = argument(inputs, &(&f * (&w - lh(l))), psi, &-lh(l), None, None)?;
                let e = p_eval(&p.chern, &x)?;
                if first == 0 {
                    num = num.mul(&e)?;
                } else {
                    den = den.mul(&e)?;
                }
            }
        }
    }
    for wall in &inputs.walls {
        for (pieces, own, other) in [(&wall.k_plus, Sign::Plus, Sign::Minus), (&wall.k_minus, Sign::Minus, Sign::Plus)] {
            for p in pieces.iter() {
                let f = Rational::from_integer(p.sign.factor().into());
                let w = Rational::from_integer(p.weight.into());
                for l in inputs.range(p.weight, 0) {
                    let tc = &f * (&w - lh(l));
                    let zero = Rational::zero();
                    let top = argument(inputs, &tc, 0, &zero, Some((own, 1)), Some(wall))?;
                    let bottom = argument(inputs, &tc, 0, &zero, Some((other, -1)), Some(wall))?;
                    num = num.mul(&p_eval(&p.chern, &top)?)?;
                    den = den.mul(&p_eval(&p.chern, &bottom)?)?;
                }
            }
        }
    }
    num.mul(&den.invert_unit()?)
}

/// The fixed part of the virtual class as a class on the carrier ring.
pub fn edge_fixed_class(inputs: &EdgeInputs) -> Result<RingClass> {
    if inputs.isolated {
        return Ok(RingClass::one(&inputs.ring));
    }
    inputs
        .fixed_class
        .clone()
        .ok_or_else(|| Error::MissingFixedClass(inputs.label.clone()))
}

/// `c_{ω,n1,n2}(α) = ev_{2*}(ev_1^*(α) ψ₁^{n1} ψ₂^{n2} ∩ [M]^{vir} / e(N^{vir}))`.
///
/// The cotangent classes at the two ends are taken non-equivariantly, as
/// in the Euler class; they vanish on the carrier, so only `n1 = n2 = 0`
/// survives once truncated.
pub fn c_operator(inputs: &EdgeInputs, n1: u32, n2: u32, alpha: &RingClass) -> Result<RingClass> {
    let euler = edge_euler(inputs)?;
    c_operator_with(inputs, &euler, n1, n2, alpha)
}

/// [`c_operator`] with a precomputed Euler class.
pub fn c_operator_with(
    inputs: &EdgeInputs,
    euler: &LocalClass,
    n1: u32,
    n2: u32,
    alpha: &RingClass,
) -> Result<RingClass> {
    let ring = &inputs.ring;
    let b = inputs.psi_bound;
    let pulled = pull(alpha, &inputs.ev_source, ring)?;
    let psi = LocalClass::psi_monomial(RationalFunctionT::one(), ring, n1, n2, b);
    let integrand = LocalClass::from_class(pulled, b).mul(&psi)?.mul(&euler.invert_unit()?)?;
    let zero = RingClass::zero(ring);
    let z = integrand.substitute(&zero, &zero)?.mul(&edge_fixed_class(inputs)?)?;
    push_forward(&z, &inputs.ev_sink, ring, &inputs.sink_ring)
}

/// `ev_*(z)` for `ev` given by the images of the target's basis.
fn push_forward(
    z: &RingClass,
    ev: &[RingClass],
    ring: &Arc<GradedRing>,
    target: &Arc<GradedRing>,
) -> Result<RingClass> {
    let mut out = RingClass::zero(target);
    for (e, dual) in RingClass::diagonal_decomposition(target)? {
        let c = z.mul(&pull(&e, ev, ring)?)?.integrate();
        if !c.is_zero() {
            out = out.add(&dual.scale(&c))?;
        }
    }
    Ok(out)
}

/// An edge with its fixed class divided by the Euler class (at `ψ = 0`),
/// ready to carry classes between its two ends.
#[derive(Clone, Debug)]
pub struct PreparedEdge {
    pub inputs: EdgeInputs,
    pub euler: LocalClass,
    weight: RingClass,
}

impl PreparedEdge {
    pub fn new(inputs: EdgeInputs) -> Result<PreparedEdge> {
        let euler = edge_euler(&inputs)?;
        let zero = RingClass::zero(&inputs.ring);
        let weight = euler
            .substitute(&zero, &zero)?
            .invert_unit()?
            .mul(&edge_fixed_class(&inputs)?)?;
        Ok(PreparedEdge { inputs, euler, weight })
    }

    /// `ev_{sink*}(ev_source^*(α) [M]/e)` when `forward`, otherwise the
    /// same with the ends exchanged.
    pub fn transfer(&self, forward: bool, alpha: &RingClass) -> Result<RingClass> {
        let i = &self.inputs;
        let (ev_in, ev_out, target) = if forward {
            (&i.ev_source, &i.ev_sink, &i.sink_ring)
        } else {
            (&i.ev_sink, &i.ev_source, &i.source_ring)
        };
        let z = pull(alpha, ev_in, &i.ring)?.mul(&self.weight)?;
        push_forward(&z, ev_out, &i.ring, target)
    }
}

/// JSON report for the `edge` command.
pub fn edge_report(inputs: &EdgeInputs) -> Result<Value> {
    let k = edge_kclass(inputs);
    let e = edge_euler(inputs)?;
    let mut terms = Vec::new();
    for ((i, j), c) in e.terms() {
        terms.push(json!({"psi1": i, "psi2": j, "class": format_class(c)?}));
    }
    let mut diagnostics = Vec::new();
    if inputs.is_fractional() && !inputs.isolated {
        diagnostics.push("fractional cover: unvalidated against an independent oracle".to_string());
    }
    Ok(json!({
        "edge": inputs.label,
        "cover": format!("{}/{}", inputs.n, inputs.m),
        "kclass": k.to_json(),
        "kclass_rank": k.rank(),
        "euler": terms,
        "diagnostics": diagnostics,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::projective_space_spec;
    use crate::algebra::rat;

    fn euler_const(inputs: &EdgeInputs) -> RationalFunctionT {
        edge_euler(inputs).unwrap().coefficient(0, 0).coeff(0).clone()
    }

    fn edge(s: &ActionSpec, a: i64, b: i64, k: u64) -> EdgeInputs {
        let i = s
            .edges
            .iter()
            .position(|e| s.components[e.from].mu[0] == rat(a, 1) && s.components[e.to].mu[0] == rat(b, 1))
            .unwrap();
        EdgeInputs::from_spec(s, i, k).unwrap()
    }

    #[test]
    fn p1_covers() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        assert_eq!(euler_const(&edge(&s, 0, 1, 1)), RationalFunctionT::monomial(rat(-1, 1), 2));
        assert_eq!(euler_const(&edge(&s, 0, 1, 2)), RationalFunctionT::monomial(rat(1, 4), 4));
        assert_eq!(euler_const(&edge(&s, 0, 1, 3)), RationalFunctionT::monomial(rat(-4, 81), 6));
        assert_eq!(edge_kclass(&edge(&s, 0, 1, 1)).summands.len(), 2);
        assert_eq!(edge_kclass(&edge(&s, 0, 1, 2)).summands.len(), 4);
    }

    #[test]
    fn p2_coordinate_lines() {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        assert_eq!(euler_const(&edge(&s, 0, 5, 1)), RationalFunctionT::monomial(rat(100, 1), 4));
        assert_eq!(euler_const(&edge(&s, 0, 1, 1)), RationalFunctionT::monomial(rat(-20, 1), 4));
        assert_eq!(euler_const(&edge(&s, 1, 5, 1)), RationalFunctionT::monomial(rat(-80, 1), 4));
        assert_eq!(euler_const(&edge(&s, 0, 1, 2)), RationalFunctionT::monomial(rat(45, 2), 7));
        assert_eq!(edge_kclass(&edge(&s, 0, 5, 1)).summands.len(), 4);
    }

    #[test]
    fn summandwise_matches_closed_form() {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        for (a, b) in [(0, 1), (0, 5), (1, 5)] {
            for k in 1..=4 {
                let e = edge(&s, a, b, k);
                assert_eq!(edge_kclass(&e).euler(&e).unwrap(), edge_euler(&e).unwrap());
            }
        }
    }

    #[test]
    fn c_operator_examples() {
        let s = projective_space_spec(1, &[0, 1]).unwrap();
        let e = edge(&s, 0, 1, 1);
        let pt = GradedRing::point();
        let got = c_operator(&e, 0, 0, &RingClass::one(&pt)).unwrap();
        assert_eq!(got, RingClass::scalar(&pt, RationalFunctionT::monomial(rat(-1, 1), -2)));
        assert!(c_operator(&e, 5, 0, &RingClass::one(&pt)).unwrap().is_zero());
        assert!(c_operator(&e, 0, 0, &RingClass::zero(&pt)).unwrap().is_zero());
    }

    #[test]
    fn empty_inputs_give_one() {
        let pt = GradedRing::point();
        let e = EdgeInputs {
            label: "x".into(),
            k: 1,
            stab: 1,
            n: 1,
            m: 1,
            ring: pt.clone(),
            source: vec![],
            sink: vec![],
            walls: vec![],
            ev_source: vec![RingClass::one(&pt)],
            ev_sink: vec![RingClass::one(&pt)],
            source_ring: pt.clone(),
            sink_ring: pt.clone(),
            fixed_class: None,
            isolated: true,
            psi_bound: 2,
        };
        assert_eq!(edge_euler(&e).unwrap(), LocalClass::one(&pt, 2));
        assert_eq!(edge_fixed_class(&e).unwrap(), RingClass::one(&pt));
        let e2 = EdgeInputs { isolated: false, ..e };
        assert!(matches!(edge_fixed_class(&e2), Err(Error::MissingFixedClass(_))));
    }
}
