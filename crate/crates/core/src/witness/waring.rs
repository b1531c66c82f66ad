//! Interval coverage by sums of powers of a zero-one digit model.
//!
//! The base set is the reals in [0, 1] whose base-3 expansion avoids the
//! digit 1. Its k-th power image sits in [0, 1], and the question is how
//! many power terms it takes for the iterated sumset to fill an interval.
//! The finite-depth model is a superset of the true set, so a computed
//! sumset always contains the true one; when the model's hull already
//! equals the target and the model is gap-free, the cover claim is exact
//! at every depth, because the true sumset squeezes between the two.

use crate::fractal::{ClosedInterval, IntervalUnion, MissingDigitSet};
use crate::rational::int;
use crate::{Error, Rational, Result};

const MAX_DEPTH: u32 = 10;
const MAX_TERMS: u32 = 12;
const MAX_PAIR_PRODUCT: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub power: u32,
    pub terms: u32,
    pub depth: u32,
    pub target: ClosedInterval,
    /// Finite-depth model of the sumset; a superset of the true sumset.
    pub sumset: IntervalUnion,
    pub is_interval: bool,
    /// True when the model is a single interval containing the target.
    pub covers_target: bool,
    /// Longest bounded gap in the model, zero when gap-free.
    pub max_gap: Rational,
    pub part_count: usize,
}

/// Builds the `terms`-fold sumset of the k-th powers of the depth-`depth`
/// zero-one digit model and tests whether it covers `target` as a single
/// interval.
pub fn waring_cover_check(
    power: u32,
    terms: u32,
    depth: u32,
    target: &ClosedInterval,
) -> Result<CoverReport> {
    if power < 2 {
        return Err(Error::Domain("power must be at least 2".into()));
    }
    if terms == 0 {
        return Err(Error::Domain("at least one term is required".into()));
    }
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Domain(format!(
            "depth must lie in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    if terms > MAX_TERMS {
        return Err(Error::Capacity(format!(
            "term count capped at {MAX_TERMS}, got {terms}"
        )));
    }
    let base = MissingDigitSet::new(3, &[0, 2])?;
    let powered = base.approx(depth)?.power_image(power)?;
    let mut sumset = powered.clone();
    for _ in 1..terms {
        let pairs = sumset.part_count() * powered.part_count();
        if pairs > MAX_PAIR_PRODUCT {
            return Err(Error::Capacity(format!(
                "sumset fold would enumerate {pairs} interval pairs"
            )));
        }
        sumset = sumset.minkowski_sum(&powered);
    }
    let hull = sumset.hull()?;
    let is_interval = sumset.is_interval();
    let covers_target = is_interval && hull.lo <= target.lo && hull.hi >= target.hi;
    let max_gap = sumset
        .gaps()
        .into_iter()
        .map(|(lo, hi)| hi - lo)
        .max()
        .unwrap_or_else(|| int(0));
    let part_count = sumset.part_count();
    Ok(CoverReport {
        power,
        terms,
        depth,
        target: target.clone(),
        sumset,
        is_interval,
        covers_target,
        max_gap,
        part_count,
    })
}
