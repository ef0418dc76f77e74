//! Splitting regular graphs into regular building blocks (perfect matchings
//! or Hamiltonian cycles) and sampling covers from them.

mod cover;
mod matching;
mod walecki;

pub use cover::{
    cover_side, cover_vertices, crossing_membership, dense_set_cover, measured_density,
    set_cover_sample_size, ElementFamily, Side, COVER_RETRY_CAP,
};
pub use matching::{matching_decomposition, perfect_matching, DecompositionAudit, MatchingDecomposition};
pub use walecki::{walecki_decomposition, CycleDecomposition};
