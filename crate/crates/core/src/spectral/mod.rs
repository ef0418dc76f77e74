//! Laplacians, spectral expansion, effective resistances, brute-force edge
//! expansion, hitting times and the degree-based resistance bounds.

mod bounds;
mod cheeger;
mod hitting;
mod laplacian;
mod resistance;

pub use bounds::{resistance_interval, vlrh_bound, vlrh_bound_regular, Interval};
pub use cheeger::{cheeger_bruteforce, cheeger_bruteforce_with, Cheeger, CHEEGER_MAX_N};
pub use hitting::{bipartite_square, hitting_times, hitting_times_with, HittingTimes};
pub use laplacian::{lambda2, laplacian, normalized_laplacian, pseudo_inverse_eigen, LaplacianView};
pub use resistance::{all_resistances, effective_resistance, laplacian_pinv, ResistanceTable};
