//! The cut-weave game and the embedded-weave construction.
//!
//! The game keeps the composed lazy-walk matrix `P` explicitly and checks
//! every step against the potential `Ψ = Σ (P_ij − 1/n)²`. The embedded
//! weave builds, for a bisection of a dense regular graph, a regular weave
//! that routes through the graph with bounded congestion.

mod embed;
mod game;
mod weave;

pub use embed::{
    build_kstar, build_level_covers, embedded_weave, embedding_expansion_transfer,
    level_partition, EmbeddedWeave, Embedding, GuestEdge, KStar, LevelCovers, LevelPartition,
    WeaveParams,
};
pub use game::{
    bisection_from_vector, cut_player_bisection, lazy_walk_apply, potential_threshold,
    round_cap, Certificate, GameOutcome, GameState, LazyWalk, RoundRecord,
};
pub use weave::{play_game, play_game_with, play_routed_game, CoverWeavePlayer, RoutedMatchingPlayer, RoutedOutcome};
