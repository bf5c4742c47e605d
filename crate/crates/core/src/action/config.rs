//! JSON config format for [`ActionSpec`].

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::{format_class, parse_class};
use super::spec::*;
use crate::algebra::{format_rational, parse_rational, GradedRing, Rational, RingClass, TableEntry};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dim_x: u32,
    pub h2_rank: usize,
    pub c1_pairing: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<Vec<String>>,
    pub components: Vec<ComponentConfig>,
    #[serde(default)]
    pub edges: Vec<EdgeConfig>,
    #[serde(default)]
    pub insertions: Vec<InsertionConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correlators: Vec<CorrelatorConfig>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub id: String,
    pub dim: u32,
    pub mu: Vec<String>,
    pub ring: RingConfig,
    #[serde(default)]
    pub normal: Vec<PieceConfig>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertex_lattice: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub generators: Vec<GeneratorConfig>,
    pub basis: Vec<Vec<u32>>,
    #[serde(default)]
    pub table: Vec<TableEntryConfig>,
    pub integration: Option<Vec<TermConfig>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub name: String,
    pub degree: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct TableEntryConfig {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
    pub value: Vec<TermConfig>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub monomial: Vec<u32>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct PieceConfig {
    pub sign: String,
    pub weight: u64,
    pub rank: usize,
    #[serde(default)]
    pub chern: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub from: String,
    pub to: String,
    pub stab: u64,
    pub orbit_class: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<CarrierConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub walls: Vec<WallConfig>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct CarrierConfig {
    pub ring: RingConfig,
    pub ev_source: Vec<String>,
    pub ev_sink: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_class: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct WallConfig {
    pub position: String,
    #[serde(default)]
    pub k_plus: Vec<PieceConfig>,
    #[serde(default)]
    pub k_minus: Vec<PieceConfig>,
    pub xi_plus: String,
    pub xi_minus: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct InsertionConfig {
    pub name: String,
    pub codim: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorConfig {
    pub component: String,
    pub beta: Vec<String>,
    pub vdim: u32,
    pub points: Vec<CorrelatorPoint>,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moving_factor: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorPoint {
    pub monomial: Vec<u32>,
    #[serde(default)]
    pub psi: u32,
}

fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn build_ring(r: &RingConfig, what: &str) -> Result<Arc<GradedRing>> {
    let integration = r
        .integration
        .as_ref()
        .ok_or_else(|| Error::Config(format!("{what}: component ring incomplete (no integration functional)")))?;
    let terms = |ts: &[TermConfig]| -> Result<Vec<(Vec<u32>, Rational)>> {
        ts.iter().map(|t| Ok((t.monomial.clone(), parse_rational(&t.coeff)?))).collect()
    };
    let generators: Vec<(String, u32)> = r.generators.iter().map(|g| (g.name.clone(), g.degree)).collect();
    let degree = |m: &[u32]| -> u32 { m.iter().zip(&generators).map(|(e, (_, d))| e * d).sum() };
    let top = r.basis.iter().map(|m| degree(m)).max().unwrap_or(0);
    let table = r
        .table
        .iter()
        .map(|e| {
            Ok(TableEntry {
                lhs: e.lhs.clone(),
                rhs: e.rhs.clone(),
                value: terms(&e.value)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GradedRing::from_presentation(generators, r.basis.clone(), table, top, terms(integration)?)
        .map_err(|e| Error::Config(format!("{what}: {e}")))
}

fn ring_config(r: &GradedRing) -> RingConfig {
    let term = |(m, c): (Vec<u32>, Rational)| TermConfig {
        monomial: m,
        coeff: format_rational(&c),
    };
    RingConfig {
        generators: r
            .generators()
            .iter()
            .map(|(n, d)| GeneratorConfig {
                name: n.clone(),
                degree: *d,
            })
            .collect(),
        basis: r.basis().to_vec(),
        table: r
            .table_entries()
            .into_iter()
            .map(|e| TableEntryConfig {
                lhs: e.lhs,
                rhs: e.rhs,
                value: e.value.into_iter().map(term).collect(),
            })
            .collect(),
        integration: Some(r.integration_entries().into_iter().map(term).collect()),
    }
}

fn build_piece(p: &PieceConfig, ring: &Arc<GradedRing>, what: &str) -> Result<WeightPiece> {
    let sign = match p.sign.as_str() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        s => return Err(Error::Config(format!("{what}: bad sign {s:?}"))),
    };
    let chern = p.chern.iter().map(|c| parse_class(c, ring)).collect::<Result<Vec<_>>>()?;
    let piece = WeightPiece {
        sign,
        weight: p.weight,
        rank: p.rank,
        chern,
    };
    piece.validate(what)?;
    Ok(piece)
}

fn piece_config(p: &WeightPiece) -> Result<PieceConfig> {
    Ok(PieceConfig {
        sign: p.sign.as_str().into(),
        weight: p.weight,
        rank: p.rank,
        chern: p.chern.iter().map(format_class).collect::<Result<_>>()?,
    })
}

/// Parses and validates a config document.
pub fn parse_action_spec(text: &str) -> Result<ActionSpec> {
    let cfg: ConfigFile =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
    spec_from_config(&cfg)
}

pub fn spec_from_config(cfg: &ConfigFile) -> Result<ActionSpec> {
    let mut components = Vec::new();
    for c in &cfg.components {
        let what = format!("component {}", c.id);
        let ring = build_ring(&c.ring, &what)?;
        let normal = c
            .normal
            .iter()
            .map(|p| build_piece(p, &ring, &what))
            .collect::<Result<Vec<_>>>()?;
        let restrictions = c
            .restrictions
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_class(v, &ring)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        components.push(FixedComponent {
            id: c.id.clone(),
            dim: c.dim,
            mu: rationals(&c.mu)?,
            ring,
            normal,
            restrictions,
            vertex_lattice: c.vertex_lattice.iter().map(|g| rationals(g)).collect::<Result<_>>()?,
        });
    }
    let find = |id: &str| {
        components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::Config(format!("unknown component {id:?}")))
    };
    let mut edges = Vec::new();
    for e in &cfg.edges {
        let (from, to) = (find(&e.from)?, find(&e.to)?);
        let what = format!("edge ({},{})", e.from, e.to);
        let carrier = match &e.carrier {
            None => None,
            Some(c) => {
                let ring = build_ring(&c.ring, &what)?;
                let parse_all = |v: &[String]| v.iter().map(|s| parse_class(s, &ring)).collect::<Result<Vec<_>>>();
                Some(EdgeCarrier {
                    ev_source: parse_all(&c.ev_source)?,
                    ev_sink: parse_all(&c.ev_sink)?,
                    fixed_class: c.fixed_class.as_ref().map(|s| parse_class(s, &ring)).transpose()?,
                    ring,
                })
            }
        };
        let wall_ring = carrier.as_ref().map(|c| c.ring.clone()).unwrap_or_else(GradedRing::point);
        let walls = e
            .walls
            .iter()
            .map(|w| {
                Ok(WallSpec {
                    position: parse_rational(&w.position)?,
                    k_plus: w.k_plus.iter().map(|p| build_piece(p, &wall_ring, &what)).collect::<Result<_>>()?,
                    k_minus: w.k_minus.iter().map(|p| build_piece(p, &wall_ring, &what)).collect::<Result<_>>()?,
                    xi_plus: parse_class(&w.xi_plus, &wall_ring)?,
                    xi_minus: parse_class(&w.xi_minus, &wall_ring)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(EdgeSpec {
            from,
            to,
            stab: e.stab,
            orbit_class: rationals(&e.orbit_class)?,
            carrier,
            walls,
        });
    }
    let mut correlators = Vec::new();
    for c in &cfg.correlators {
        let component = find(&c.component)?;
        let moving_factor = match &c.moving_factor {
            None => None,
            Some(s) => Some(parse_class(s, &GradedRing::point())?.coeff(0).clone()),
        };
        correlators.push(CorrelatorEntry {
            component,
            beta: rationals(&c.beta)?,
            vdim: c.vdim,
            points: c.points.iter().map(|p| (p.monomial.clone(), p.psi)).collect(),
            value: parse_rational(&c.value)?,
            moving_factor,
        });
    }
    let spec = ActionSpec {
        dim_x: cfg.dim_x,
        h2_rank: cfg.h2_rank,
        c1_pairing: rationals(&cfg.c1_pairing)?,
        projection: match &cfg.projection {
            Some(p) => rationals(p)?,
            None => one_vec(cfg.h2_rank),
        },
        components,
        edges,
        insertions: cfg
            .insertions
            .iter()
            .map(|i| InsertionClass {
                name: i.name.clone(),
                codim: i.codim,
            })
            .collect(),
        correlators,
    };
    spec.validate()?;
    Ok(spec)
}

/// Inverse of [`spec_from_config`].
pub fn spec_to_config(spec: &ActionSpec) -> Result<ConfigFile> {
    let mut components = Vec::new();
    for c in &spec.components {
        components.push(ComponentConfig {
            id: c.id.clone(),
            dim: c.dim,
            mu: strings(&c.mu),
            ring: ring_config(&c.ring),
            normal: c.normal.iter().map(piece_config).collect::<Result<_>>()?,
            restrictions: c
                .restrictions
                .iter()
                .map(|(k, v)| Ok((k.clone(), format_class(v)?)))
                .collect::<Result<_>>()?,
            vertex_lattice: c.vertex_lattice.iter().map(|g| strings(g)).collect(),
        });
    }
    let mut edges = Vec::new();
    for e in &spec.edges {
        let carrier = match &e.carrier {
            None => None,
            Some(c) => Some(CarrierConfig {
                ring: ring_config(&c.ring),
                ev_source: c.ev_source.iter().map(format_class).collect::<Result<_>>()?,
                ev_sink: c.ev_sink.iter().map(format_class).collect::<Result<_>>()?,
                fixed_class: c.fixed_class.as_ref().map(format_class).transpose()?,
            }),
        };
        let walls = e
            .walls
            .iter()
            .map(|w| {
                Ok(WallConfig {
                    position: format_rational(&w.position),
                    k_plus: w.k_plus.iter().map(piece_config).collect::<Result<_>>()?,
                    k_minus: w.k_minus.iter().map(piece_config).collect::<Result<_>>()?,
                    xi_plus: format_class(&w.xi_plus)?,
                    xi_minus: format_class(&w.xi_minus)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(EdgeConfig {
            from: spec.components[e.from].id.clone(),
            to: spec.components[e.to].id.clone(),
            stab: e.stab,
            orbit_class: strings(&e.orbit_class),
            carrier,
            walls,
        });
    }
    let correlators = spec
        .correlators
        .iter()
        .map(|c| {
            Ok(CorrelatorConfig {
                component: spec.components[c.component].id.clone(),
                beta: strings(&c.beta),
                vdim: c.vdim,
                points: c
                    .points
                    .iter()
                    .map(|(m, a)| CorrelatorPoint {
                        monomial: m.clone(),
                        psi: *a,
                    })
                    .collect(),
                value: format_rational(&c.value),
                moving_factor: c
                    .moving_factor
                    .as_ref()
                    .map(|f| format_class(&RingClass::scalar(&GradedRing::point(), f.clone())))
                    .transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfigFile {
        dim_x: spec.dim_x,
        h2_rank: spec.h2_rank,
        c1_pairing: strings(&spec.c1_pairing),
        projection: Some(strings(&spec.projection)),
        components,
        edges,
        insertions: spec
            .insertions
            .iter()
            .map(|i| InsertionConfig {
                name: i.name.clone(),
                codim: i.codim,
            })
            .collect(),
        correlators,
    })
}

pub fn spec_to_json(spec: &ActionSpec) -> Result<String> {
    let cfg = spec_to_config(spec)?;
    serde_json::to_string_pretty(&cfg).map_err(|e| Error::Invalid(e.to_string()))
}
