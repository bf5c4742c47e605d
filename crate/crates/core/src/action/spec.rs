use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::algebra::{GradedRing, Rational, RingClass};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    /// `+1` or `−1`.
    pub fn factor(&self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Weight-`w` eigenbundle of the positive or negative part of a normal bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPiece {
    pub sign: Sign,
    pub weight: u64,
    pub rank: usize,
    /// `c_1, …, c_rank` in the owning component's ring.
    pub chern: Vec<RingClass>,
}

impl WeightPiece {
    pub fn trivial(sign: Sign, weight: u64, rank: usize, ring: &Arc<GradedRing>) -> Self {
        WeightPiece {
            sign,
            weight,
            rank,
            chern: vec![RingClass::zero(ring); rank],
        }
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        if self.weight == 0 {
            return Err(Error::Config(format!("{what}: weight must be >= 1")));
        }
        if self.chern.len() != self.rank {
            return Err(Error::Config(format!(
                "{what}: {} Chern classes for rank {}",
                self.chern.len(),
                self.rank
            )));
        }
        for (i, c) in self.chern.iter().enumerate() {
            if !c.is_pure_degree(i as u32 + 1) {
                return Err(Error::Config(format!("{what}: c_{} is not of pure degree {}", i + 1, i + 1)));
            }
        }
        Ok(())
    }
}

/// A connected component of the fixed locus.
#[derive(Clone, Debug)]
pub struct FixedComponent {
    pub id: String,
    pub dim: u32,
    pub mu: Vec<Rational>,
    pub ring: Arc<GradedRing>,
    pub normal: Vec<WeightPiece>,
    /// Equivariant restrictions of the named insertion classes.
    pub restrictions: BTreeMap<String, RingClass>,
    /// Generators of the admissible vertex classes `j_* H_2(X_c)`.
    pub vertex_lattice: Vec<Vec<Rational>>,
}

impl FixedComponent {
    pub fn is_point(&self) -> bool {
        self.dim == 0
    }

    /// Equivariant Euler class of the normal bundle: `Π_pieces p_Q(±w t)`.
    pub fn normal_euler(&self) -> Result<RingClass> {
        use crate::algebra::{p_eval, LocalClass, RationalFunctionT};
        let mut acc = RingClass::one(&self.ring);
        for piece in &self.normal {
            let x = LocalClass::scalar(
                &self.ring,
                RationalFunctionT::monomial(Rational::from_integer((piece.sign.factor() * piece.weight as i64).into()), 1),
                0,
            );
            let e = p_eval(&piece.chern, &x)?.coefficient(0, 0);
            acc = acc.mul(&e)?;
        }
        Ok(acc)
    }

    /// `Σ ± w · rank`: the equivariant weight of `c1(TX)` at this component.
    pub fn c1_weight(&self) -> i64 {
        self.normal
            .iter()
            .map(|p| p.sign.factor() * p.weight as i64 * p.rank as i64)
            .sum()
    }
}

/// Ring and evaluation data of an edge space `M_{ω,2}` when it is not a point.
#[derive(Clone, Debug)]
pub struct EdgeCarrier {
    pub ring: Arc<GradedRing>,
    /// Pullback along the evaluation at the source: image of each basis
    /// element of the source component's ring.
    pub ev_source: Vec<RingClass>,
    pub ev_sink: Vec<RingClass>,
    pub fixed_class: Option<RingClass>,
}

/// Interior-wall data for the wall terms of an edge Euler class.
#[derive(Clone, Debug)]
pub struct WallSpec {
    pub position: Rational,
    pub k_plus: Vec<WeightPiece>,
    pub k_minus: Vec<WeightPiece>,
    pub xi_plus: RingClass,
    pub xi_minus: RingClass,
}

#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub from: usize,
    pub to: usize,
    pub stab: u64,
    pub orbit_class: Vec<Rational>,
    pub carrier: Option<EdgeCarrier>,
    pub walls: Vec<WallSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InsertionClass {
    pub name: String,
    pub codim: u32,
}

/// User-supplied genus-0 invariant of a positive-dimensional fixed component,
/// `⟨Π_i e_{m_i} ψ^{a_i}⟩_{β}` with `e_m` basis monomials of its ring.
#[derive(Clone, Debug)]
pub struct CorrelatorEntry {
    pub component: usize,
    pub beta: Vec<Rational>,
    pub vdim: u32,
    /// Unordered special points: (basis monomial, ψ-power).
    pub points: Vec<(Vec<u32>, u32)>,
    pub value: Rational,
    /// Moving factor slot for this vertex type; 1 when absent.
    pub moving_factor: Option<crate::algebra::RationalFunctionT>,
}

/// Complete description of `X` with its C*-action.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    pub dim_x: u32,
    pub h2_rank: usize,
    pub c1_pairing: Vec<Rational>,
    /// Linear map `p` with `μ = p ∘ μ^m`.
    pub projection: Vec<Rational>,
    pub components: Vec<FixedComponent>,
    pub edges: Vec<EdgeSpec>,
    pub insertions: Vec<InsertionClass>,
    pub correlators: Vec<CorrelatorEntry>,
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn leq(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl ActionSpec {
    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn insertion(&self, name: &str) -> Option<&InsertionClass> {
        self.insertions.iter().find(|i| i.name == name)
    }

    /// Moment projection `p(μ^m)` of a component.
    pub fn wall_position(&self, component: usize) -> Rational {
        dot(&self.projection, &self.components[component].mu)
    }

    /// `∫_β c1(TX)`.
    pub fn c1(&self, beta: &[Rational]) -> Rational {
        dot(&self.c1_pairing, beta)
    }

    /// Checks every invariant of the data model; errors name the offender.
    pub fn validate(&self) -> Result<()> {
        let m = self.h2_rank;
        let vec_ok = |v: &[Rational], what: &str| {
            if v.len() == m {
                Ok(())
            } else {
                Err(Error::Config(format!("{what}: expected {m} entries, got {}", v.len())))
            }
        };
        vec_ok(&self.c1_pairing, "c1_pairing")?;
        vec_ok(&self.projection, "projection")?;
        if self.components.is_empty() {
            return Err(Error::Config("no fixed components".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            let what = format!("component {}", c.id);
            vec_ok(&c.mu, &what)?;
            if self.components[..i].iter().any(|d| d.id == c.id) {
                return Err(Error::Config(format!("{what}: duplicate id")));
            }
            if self.components[..i].iter().any(|d| d.mu == c.mu) {
                return Err(Error::Config(format!("{what}: duplicate moment vector")));
            }
            if c.ring.top_degree() != c.dim {
                return Err(Error::Config(format!(
                    "{what}: ring top degree {} differs from dimension {}",
                    c.ring.top_degree(),
                    c.dim
                )));
            }
            for p in &c.normal {
                p.validate(&what)?;
                if p.chern.iter().any(|x| x.ring() != &c.ring && **x.ring() != *c.ring) {
                    return Err(Error::Config(format!("{what}: Chern class over a foreign ring")));
                }
            }
            let rank: usize = c.normal.iter().map(|p| p.rank).sum();
            if rank as u32 + c.dim != self.dim_x {
                return Err(Error::Config(format!(
                    "{what}: normal rank {rank} + dim {} != dim X {}",
                    c.dim, self.dim_x
                )));
            }
            for ins in &self.insertions {
                let r = c.restrictions.get(&ins.name).ok_or_else(|| {
                    Error::Config(format!("{what}: missing restriction of {}", ins.name))
                })?;
                check_homogeneous(r, ins.codim)
                    .map_err(|e| Error::Config(format!("{what}: restriction of {}: {e}", ins.name)))?;
            }
            for g in &c.vertex_lattice {
                vec_ok(g, &what)?;
                if g.iter().any(|x| x.is_negative()) || g.iter().all(|x| x.is_zero()) {
                    return Err(Error::Config(format!("{what}: vertex lattice generators must be nonzero and effective")));
                }
            }
        }
        for (k, e) in self.edges.iter().enumerate() {
            let what = format!("edge #{k}");
            if e.from >= self.components.len() || e.to >= self.components.len() {
                return Err(Error::Config(format!("{what}: unknown endpoint")));
            }
            let (u, v) = (&self.components[e.from], &self.components[e.to]);
            let what = format!("edge ({},{})", u.id, v.id);
            vec_ok(&e.orbit_class, &what)?;
            if !leq(&u.mu, &v.mu) || u.mu == v.mu {
                return Err(Error::Config(format!("{what}: edge violates partial order")));
            }
            if e.stab == 0 {
                return Err(Error::Config(format!("{what}: stabilizer order must be >= 1")));
            }
            let s = Rational::from_integer(e.stab.into());
            for ((a, b), o) in u.mu.iter().zip(&v.mu).zip(&e.orbit_class) {
                if b - a != &s * o {
                    return Err(Error::Config(format!(
                        "{what}: class/stabilizer inconsistency: v - u != stab * orbit_class"
                    )));
                }
            }
            let lhs = self.c1(&e.orbit_class);
            let rhs = Rational::new((u.c1_weight() - v.c1_weight()).into(), (e.stab as i64).into());
            if lhs != rhs {
                return Err(Error::Config(format!(
                    "{what}: c1 pairing {lhs} on the orbit class disagrees with endpoint weights {rhs}"
                )));
            }
            if u.is_point() && v.is_point() {
                if e.carrier.is_some() {
                    return Err(Error::Config(format!("{what}: isolated edge cannot carry a ring")));
                }
            } else {
                let c = e.carrier.as_ref().ok_or_else(|| {
                    Error::Config(format!("{what}: non-isolated edge needs carrier data"))
                })?;
                if c.ev_source.len() != u.ring.len() || c.ev_sink.len() != v.ring.len() {
                    return Err(Error::Config(format!("{what}: evaluation maps have wrong size")));
                }
            }
            for w in &e.walls {
                for p in w.k_plus.iter().chain(&w.k_minus) {
                    p.validate(&format!("{what} wall {}", w.position))?;
                }
            }
        }
        Ok(())
    }
}

/// A restriction of a codimension-`d` class must be homogeneous of total
/// degree `d` (ring degree plus `t`-degree).
fn check_homogeneous(c: &RingClass, d: u32) -> std::result::Result<(), String> {
    for (i, f) in c.coeffs().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let deg = c.ring().degree(i) as i64;
        let ok = f.numerator().is_monomial()
            && f.denominator().is_monomial()
            && f.t_degree() == Some(d as i64 - deg);
        if !ok {
            return Err(format!("coefficient {f} is not homogeneous of degree {}", d as i64 - deg));
        }
    }
    Ok(())
}

pub(crate) fn one_vec(m: usize) -> Vec<Rational> {
    vec![Rational::one(); m]
}
