//! Finite-depth interval models of missing-digit Cantor sets and the
//! Newhouse thickness machinery computed exactly over rationals.
//!
//! A missing-digit set in base `b` with allowed digit set `B` is the
//! attractor of the maps `x ↦ (x + z)/b` for `z ∈ B`. Its depth-`d`
//! approximation here is the union of the convex hulls of the depth-`d`
//! cylinders, so the approximation's hull equals the attractor's hull at
//! every depth and its gap list is exactly the attractor's gaps of
//! generation at most `d`. That property is what makes finite-depth
//! thickness values meaningful: for contiguous digit sets they stabilize
//! from depth 2 onward.

mod interval;
mod missing;
mod thickness;

pub use interval::{ClosedInterval, IntervalUnion};
pub use missing::MissingDigitSet;
pub use thickness::{kpower_bounds, thickness, Exactness, KPowerBounds, ThicknessReport};
