//! Numerical verification toolkit for two-party theories whose local state
//! spaces are Euclidean balls.
//!
//! Every group acting transitively on a sphere is represented by an explicit
//! Lie algebra basis ([`catalog`]). The joint dynamics built from a pair of
//! such groups are tested against the positivity constraints of the bipartite
//! formalism ([`gpt`]), and interacting generators are refuted family by
//! family ([`nogo`]). [`suite::run_all`] sweeps everything with a fixed seed.

pub mod catalog;
pub mod error;
pub mod gpt;
pub mod irreps;
pub mod linalg;
pub mod nogo;
pub mod par;
pub mod realify;
pub mod sampling;
pub mod suite;
pub mod transitivity;

pub use error::{Error, Result};
