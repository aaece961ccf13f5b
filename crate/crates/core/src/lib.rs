//! Cluster vertex deletion: a local-ratio 2-approximation with explicit
//! goodness certificates, exact reference solvers, and a small
//! Sherali-Adams lab for the basic and one-round LP relaxations.
//!
//! Module map:
//! - [`graph`]: bit-row graphs, parsing, P3 search, true twins.
//! - [`chordal`]: chordality with hole certificates, clique trees, hitting cliques.
//! - [`goodness`]: local cost functions certifying strong or central 2-goodness.
//! - [`localratio`]: the approximation driver, exact oracles and validators.
//! - [`sa`]: SA_0 / SA_1 construction and an exact rational simplex.
//! - [`generate`], [`sweep`]: instance generators and exhaustive/batch drivers.

pub mod chordal;
pub mod cost;
pub mod error;
pub mod generate;
pub mod goodness;
pub mod graph;
pub mod localratio;
pub mod sa;
pub mod sweep;

pub use cost::{CostFn, Rational};
pub use error::{Error, Result};
pub use graph::{parse_graph, Graph, P3};
