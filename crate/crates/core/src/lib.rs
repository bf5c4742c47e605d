//! Exact genus-0 equivariant Gromov–Witten invariants by C*-localization.
//!
//! The engine takes a description of a smooth projective variety with a
//! C*-action (fixed components, their cohomology rings, normal-bundle weight
//! pieces and the moment graph), enumerates the decorated trees indexing the
//! fixed loci of the stable-map space, evaluates every edge through the closed
//! product formula for the Euler class of its virtual normal bundle, and sums
//! the graph contributions in exact rational arithmetic.

pub mod action;
pub mod algebra;
pub mod assembly;
pub mod cli;
pub mod edge;
pub mod error;
pub mod graphs;
pub mod oracles;

pub use error::{Error, Result};
