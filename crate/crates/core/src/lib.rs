//! Exact-arithmetic toolkit for Sidorenko-type homomorphism inequalities.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: the graph model, constructions (subdivision, `K_{2,t}`
//!   replacement, Cartesian product, `ψ_K(G)`), the edge-list format and
//!   small-graph catalogs.
//! * [`hom`]: exact homomorphism counts and the Sidorenko comparison.
//! * [`decomp`]: tree decompositions and strong tree decompositions.
//! * [`brw`]: branching random walks, their exact laws, partial-embedding
//!   walks and the composite embedding of strongly tree-decomposable graphs.
//! * [`entropy`]: entropy of exact laws and the two entropy chains.
//! * [`density`]: local density, minimum-degree extraction, codegree bounds
//!   and the subdivision / replacement / Hölder / Cartesian audits.
//!
//! All probabilities and counts are exact (`BigRational` / `BigUint`).
//! Floating point appears only in entropy values.

pub mod brw;
pub mod decomp;
pub mod density;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod hom;
pub mod rational;
pub mod report;
pub mod rng;

pub use error::{LabError, Result};
pub use graph::{Graph, Homomorphism, WeightedGraph};
