//! Lower bounds for the commuting quantum chromatic number of a graph.
//!
//! The crate computes the chain of tractable graph parameters
//! `theta'+ <= xi_SDP <= chi_f <= chi`, finite levels of a moment hierarchy
//! whose positive optimum certifies `chi_qc(G) > c`, and verifies explicit
//! finite-dimensional coloring strategies.
//!
//! ```
//! use chromabound::graph::Graph;
//! use chromabound::params::{xi_sdp, CliqueFamily, ParamOptions};
//!
//! let c5 = Graph::cycle(5).unwrap();
//! let xi = xi_sdp(&c5, CliqueFamily::MaximalOnly, &ParamOptions::default()).unwrap();
//! assert!((xi.value - 2.5).abs() < 1e-5);
//! ```

pub mod error;
pub mod graph;
pub mod npa;
pub mod params;
pub mod solver;
pub mod strategy;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
