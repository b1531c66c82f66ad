//! Integers whose central binomial coefficient is coprime to 105.
//!
//! An odd prime p divides the central binomial coefficient of n exactly
//! when some base-p digit of n exceeds (p - 1) / 2. Coprimality to
//! 105 = 3 * 5 * 7 is therefore a simultaneous digit restriction in
//! bases 3, 5, and 7, which turns a divisibility question into a set
//! membership question the enumerator answers directly.

use crate::digits::{kummer_divides, uses_only, DigitSetSpec};
use crate::restricted::{enumerate, MultiBaseSpec};
use crate::{Error, Result};

const PRIMES: [u32; 3] = [3, 5, 7];

fn half_digit_spec(p: u32) -> DigitSetSpec {
    DigitSetSpec::new(p, 0..=(p - 1) / 2).expect("static digit set")
}

/// True when the central binomial coefficient of `n` is coprime to 105,
/// decided by the base-3/5/7 digit criterion.
pub fn graham_membership(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("membership is defined for n >= 1".into()));
    }
    Ok(PRIMES.iter().all(|&p| uses_only(n, &half_digit_spec(p))))
}

/// All `n` in `[1, limit]` whose central binomial coefficient is coprime
/// to 105, ascending. Every returned member is cross-checked against the
/// carry-counting divisibility test for each prime.
pub fn graham_search(limit: u64) -> Result<Vec<u64>> {
    if limit == 0 {
        return Err(Error::Domain("limit must be at least 1".into()));
    }
    let spec = MultiBaseSpec::new(PRIMES.iter().map(|&p| half_digit_spec(p)).collect())?;
    let members = enumerate(&spec, limit)?;
    for &n in &members {
        for &p in &PRIMES {
            if kummer_divides(u64::from(p), n)? {
                return Err(Error::Refusal(format!(
                    "digit enumeration admitted {n} but {p} divides its central binomial coefficient"
                )));
            }
        }
    }
    Ok(members)
}
