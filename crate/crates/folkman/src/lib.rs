//! Constructive certification of generalized Folkman number upper bounds.
//!
//! A graph `G` *vertex-arrows* a tuple of target graphs `(H1, ..., Hr)`,
//! written `G -> (H1, ..., Hr)^v`, when every r-coloring of `V(G)` yields a
//! monochromatic copy of `Hi` in some color class `i`; *edge-arrowing* is the
//! analogous statement for r-colorings of `E(G)`.  The generalized Folkman
//! number `F_v(H1, ..., Hr; s)` (resp. `F_e`) is the smallest order of a
//! `K_s`-free graph that arrows the tuple.
//!
//! This crate builds explicit witness graphs for a family of upper bounds on
//! such numbers, decides arrowing either by pruned exhaustive search over all
//! colorings or by reduction to SAT, checks clique-freeness exactly, and keeps
//! a symbolic ledger that rebuilds each numeric bound from base facts and
//! composition rules.
//!
//! Modules:
//! - [`graph`]: dense bitset graphs, product/join constructors, exact clique
//!   and automorphism computations, graph6 I/O.
//! - [`arrowing`]: arrowing problems, copy enumeration, the exhaustive
//!   coloring search, and certificate verification.
//! - [`sat`]: CNF encodings of non-arrowing, an embedded CDCL solver, DIMACS
//!   export and external-solver integration.
//! - [`constructions`]: the named witness-graph recipes (figure graphs,
//!   blow-ups, block joins, vertex-dropped products, cones).
//! - [`ledger`]: symbolic bound records, derivation rules, and best-bound
//!   derivation.
//! - [`certificate`]: the JSON certificate format shared by library and CLI.

pub mod arrowing;
pub mod certificate;
pub mod constructions;
mod error;
pub mod graph;
pub mod ledger;
pub mod sat;

pub use error::Error;
pub use graph::Graph;

/// Crate result alias; every fallible public operation reports [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
