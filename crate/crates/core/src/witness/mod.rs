//! Concrete searches and checkable witnesses.
//!
//! Everything here returns objects a skeptical reader can re-verify with
//! the elementary digit tools: additive triples carry their digit
//! expansions, coprimality members are re-tested against the carry
//! criterion, block certificates inline the inequalities they passed,
//! and cover reports expose the interval model they were computed from.
//! Searches are deterministic and ascending, so two runs (or a run and
//! an independent reimplementation) can be compared literally.

mod blocks;
mod density;
mod graham;
mod triples;
mod waring;

pub use blocks::{
    egrs4_block_check, egrs4_block_check_at_depth, BlockReport, DEFAULT_BLOCK_DEPTH,
};
pub use density::{
    egrs_density, egrs_density_with, simultaneous_nonzero_search, DensityReport,
};
pub use graham::{graham_membership, graham_search};
pub use triples::{sum_gap_scan, triple_search, triple_search_with, TripleWitness};
pub use waring::{waring_cover_check, CoverReport};
