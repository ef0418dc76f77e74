//! Resistance sparsification of dense regular expanders.
//!
//! The host graph's bipartite double cover is split into disjoint perfect
//! matchings; a random handful of them, folded back onto the original vertex
//! set and reweighted to the host degree, approximately preserves every
//! pairwise effective resistance. Expansion of such unions is certified with
//! the Cut-Weave game, and accuracy is checked against exact Laplacian and
//! hitting-time computations.

pub mod cutweave;
pub mod decompose;
pub mod error;
pub mod generators;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod par;
pub mod report;
pub mod sparsify;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Bisection, Edge, VertexId, WeightedMultigraph};
pub use par::Parallelism;
