//! Exponent-window densities for doubly digit-restricted integers.
//!
//! For distinct bases p and q, count which windows `[p^k, p^(k+1))` with
//! `k < n` contain an integer satisfying digit restrictions in both bases
//! at once. The hit ratio measures how evenly the doubly restricted set
//! spreads across scales; a ratio of 1 means no window is skipped.

use crate::digits::{is_prime_u64, DigitSetSpec};
use crate::rational::ratio;
use crate::restricted::{enumerate_with, MultiBaseSpec};
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub base_p: u32,
    pub base_q: u32,
    pub exponent_count: u32,
    /// Exponents k < exponent_count whose window [p^k, p^(k+1)) is hit,
    /// strictly increasing.
    pub hit_exponents: Vec<u32>,
    /// Hits divided by windows inspected.
    pub ratio: Rational,
}

/// Window-hit density for digits `{0, ..., (p-1)/2}` in base p and
/// `{0, ..., (q-1)/2}` in base q, over the first `n` windows of p.
/// Both bases must be distinct odd primes.
pub fn egrs_density(p: u32, q: u32, n: u32) -> Result<DensityReport> {
    for b in [p, q] {
        if b < 3 || !is_prime_u64(u64::from(b)) {
            return Err(Error::Domain(format!("{b} is not an odd prime")));
        }
    }
    let half = |b: u32| DigitSetSpec::new(b, 0..=(b - 1) / 2).expect("static digit set");
    egrs_density_with(&half(p), &half(q), n)
}

/// [`egrs_density`] over caller-supplied digit sets; the window base is
/// the first spec's base.
pub fn egrs_density_with(
    spec_p: &DigitSetSpec,
    spec_q: &DigitSetSpec,
    n: u32,
) -> Result<DensityReport> {
    if n == 0 {
        return Err(Error::Domain("at least one window is required".into()));
    }
    let p = spec_p.base();
    let horizon = u64::from(p).checked_pow(n).ok_or_else(|| {
        Error::Capacity(format!("window horizon {p}^{n} exceeds the 64-bit range"))
    })?;
    let spec = MultiBaseSpec::new(vec![spec_p.clone(), spec_q.clone()])?;
    let mut hit = vec![false; n as usize];
    enumerate_with(&spec, horizon - 1, |m| {
        let mut k = 0usize;
        let mut v = m;
        while v >= u64::from(p) {
            v /= u64::from(p);
            k += 1;
        }
        hit[k] = true;
    })?;
    let hit_exponents: Vec<u32> = (0..n).filter(|&k| hit[k as usize]).collect();
    let ratio = ratio(hit_exponents.len() as i64, i64::from(n));
    Ok(DensityReport {
        base_p: p,
        base_q: spec_q.base(),
        exponent_count: n,
        hit_exponents,
        ratio,
    })
}

/// Integers in `[1, limit]` with no zero digit in any of the given bases,
/// ascending. Base 2 is accepted but degenerate: its zero-free integers
/// are exactly those one below a power of two, so including it thins the
/// result to a logarithmic family.
pub fn simultaneous_nonzero_search(bases: &[u32], limit: u64) -> Result<Vec<u64>> {
    if bases.is_empty() {
        return Err(Error::Domain("at least one base is required".into()));
    }
    if limit == 0 {
        return Err(Error::Domain("limit must be at least 1".into()));
    }
    let specs = bases
        .iter()
        .map(|&b| DigitSetSpec::nonzero(b))
        .collect::<Result<Vec<_>>>()?;
    crate::restricted::enumerate(&MultiBaseSpec::new(specs)?, limit)
}
