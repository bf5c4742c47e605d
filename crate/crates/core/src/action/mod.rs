//! Description of a target `X` with a C*-action: fixed components, moment
//! data, invariant curves, and the derived moment graph.

mod config;
mod expr;
mod generators;
mod graph;
mod spec;

pub use config::{parse_action_spec, spec_from_config, spec_to_config, spec_to_json, ConfigFile};
pub use expr::{format_class, parse_class};
pub use generators::{product_spec, projective_space_spec, trivial_projective_spec};
pub use graph::{
    build_moment_graph, invariant_curve_classes, max_edge_multiple, orbit_class, orbit_degree, vertex_classes,
    EdgeDatum, MomentEdge, MomentGraph, MomentVertex, OrbitCarrier,
};
pub use spec::*;
