//! Clustering games on networks.
//!
//! Players are graph nodes choosing colors; coordination edges pay when their
//! endpoints agree and anti-coordination edges when they differ, with each
//! edge's weight split between the endpoints by a distribution rule. The crate
//! computes exact equilibria and prices of anarchy, the topological graph
//! parameters that bound them, Shapley-rule classifications with the matching
//! counterexample constructions, and Monte Carlo experiments on random graphs.

pub mod equilibria;
pub mod experiments;
pub mod generators;
pub mod io;
pub mod model;
pub mod rational;
pub mod shapley;
pub mod topology;
