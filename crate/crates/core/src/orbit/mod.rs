//! Orbits of `({k·α_1}, ..., {k·α_m})` for log-ratio frequencies, with
//! every reported fact backed by integer arithmetic.
//!
//! The pieces fit together as a pipeline:
//!
//! * [`logr`] turns base pairs into certified rational enclosures of
//!   `log(n) / log(d)`, exact whenever the bases share a multiplicative
//!   kernel.
//! * [`indep`] decides whether a base list admits a multiplicative
//!   relation, which controls whether the orbit is confined to lines.
//! * [`search`] scans orbits: generic near-return searches for small
//!   fractional parts, and a specialized exact engine for the
//!   `(3^k, 4^k, 5^k)` leading-digit region.
//! * [`lines`] probes the line families a rational relation would force,
//!   certifying interior hits of the target region via integer root
//!   enclosures.

mod indep;
mod lines;
mod logr;
mod search;

pub use indep::{multiplicative_independence_check, IndependenceOutcome, DEFAULT_RELATION_BOUND};
pub use lines::{
    dependent_orbit_closure, line_meets_region, linear_form, nth_root_enclosure,
    region_interior_certified, ClosureReport, LinearFormReport,
};
pub use logr::{ln_enclosure, log_ratio, multiplicative_kernel, LogRatio, MAX_PRECISION_BITS};
pub use search::{
    near_return_search, orbit_search, region_hits, OrbitHit, OrbitPredicate, OrbitReport,
    PowerOrbit, HIT_DETAIL_CAP, MAPPED_DETAIL_CAP, REGION_ROWS,
};
