//! Additive triples across three digit-restricted integer sets, and the
//! complementary scan for integers no two-set sum reaches.

use crate::digits::{digits_of, uses_only, DigitExpansion, DigitSetSpec};
use crate::restricted::{enumerate, MultiBaseSpec};
use crate::{Error, Result};

/// A verified equation `x + y = z` whose coordinates satisfy their digit
/// restrictions. Construction re-checks everything, so a stored witness
/// is trustworthy independently of how the search found it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleWitness {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub bases: (u32, u32, u32),
    pub digit_proofs: (DigitExpansion, DigitExpansion, DigitExpansion),
}

impl TripleWitness {
    pub fn verify(x: u64, y: u64, z: u64, specs: &[DigitSetSpec; 3]) -> Result<Self> {
        if x == 0 || y == 0 {
            return Err(Error::Domain("triple coordinates must be positive".into()));
        }
        if x.checked_add(y) != Some(z) {
            return Err(Error::Domain(format!("{x} + {y} != {z}")));
        }
        for (value, spec) in [x, y, z].into_iter().zip(specs) {
            if !uses_only(value, spec) {
                return Err(Error::Domain(format!(
                    "{value} uses digits outside its allowed set in base {}",
                    spec.base()
                )));
            }
        }
        Ok(TripleWitness {
            x,
            y,
            z,
            bases: (specs[0].base(), specs[1].base(), specs[2].base()),
            digit_proofs: (
                digits_of(x, specs[0].base())?,
                digits_of(y, specs[1].base())?,
                digits_of(z, specs[2].base())?,
            ),
        })
    }
}

fn default_specs() -> [DigitSetSpec; 3] {
    [
        DigitSetSpec::new(3, [0, 1]).expect("static digit set"),
        DigitSetSpec::new(4, [0, 1]).expect("static digit set"),
        DigitSetSpec::new(5, [0, 1]).expect("static digit set"),
    ]
}

/// All triples `x + y = z` with `z <= limit`, `x` in the first restricted
/// set, `y` in the second, `z` in the third. Defaults to digits `{0, 1}`
/// in bases 3, 4, 5.
pub fn triple_search(limit: u64) -> Result<Vec<TripleWitness>> {
    triple_search_with(&default_specs(), limit)
}

/// [`triple_search`] over caller-supplied digit sets.
///
/// Meets in the middle: the two sparsest of the three sets are enumerated
/// and the remaining coordinate is membership-tested, so the work is
/// linear in the product of the two smallest enumerations rather than in
/// `limit`. Output is ascending in `z`, then `x`, with no duplicates.
pub fn triple_search_with(specs: &[DigitSetSpec; 3], limit: u64) -> Result<Vec<TripleWitness>> {
    if limit == 0 {
        return Err(Error::Domain("limit must be at least 1".into()));
    }
    let lists: Vec<Vec<u64>> = specs
        .iter()
        .map(|s| enumerate(&MultiBaseSpec::new(vec![s.clone()])?, limit))
        .collect::<Result<_>>()?;
    let tested = (0..3).max_by_key(|&i| lists[i].len()).unwrap();
    let mut out = Vec::new();
    match tested {
        0 => {
            // x = z - y; walking y downward keeps x ascending per z.
            for &z in &lists[2] {
                let cut = lists[1].partition_point(|&y| y < z);
                for &y in lists[1][..cut].iter().rev() {
                    let x = z - y;
                    if uses_only(x, &specs[0]) {
                        out.push(TripleWitness::verify(x, y, z, specs)?);
                    }
                }
            }
        }
        1 => {
            for &z in &lists[2] {
                for &x in lists[0].iter().take_while(|&&x| x < z) {
                    if uses_only(z - x, &specs[1]) {
                        out.push(TripleWitness::verify(x, z - x, z, specs)?);
                    }
                }
            }
        }
        _ => {
            let mut found = Vec::new();
            for &x in &lists[0] {
                for &y in &lists[1] {
                    match x.checked_add(y) {
                        Some(z) if z <= limit => {
                            if uses_only(z, &specs[2]) {
                                found.push((x, y, z));
                            }
                        }
                        _ => break,
                    }
                }
            }
            found.sort_unstable_by_key(|&(x, _, z)| (z, x));
            for (x, y, z) in found {
                out.push(TripleWitness::verify(x, y, z, specs)?);
            }
        }
    }
    Ok(out)
}

/// Integers in `[1, limit]` that are not a sum `a + b` with `a` in the
/// first restricted set and `b` in the second. A scan, not a theorem:
/// an empty result says nothing beyond `limit`.
pub fn sum_gap_scan(a: &DigitSetSpec, b: &DigitSetSpec, limit: u64) -> Result<Vec<u64>> {
    if limit == 0 {
        return Err(Error::Domain("limit must be at least 1".into()));
    }
    if limit > 50_000_000 {
        return Err(Error::Capacity(format!(
            "sum scan sieve capped at limit 50000000, got {limit}"
        )));
    }
    let xs = enumerate(&MultiBaseSpec::new(vec![a.clone()])?, limit)?;
    let ys = enumerate(&MultiBaseSpec::new(vec![b.clone()])?, limit)?;
    let mut reachable = vec![false; limit as usize + 1];
    for &x in &xs {
        for &y in &ys {
            match x.checked_add(y) {
                Some(s) if s <= limit => reachable[s as usize] = true,
                _ => break,
            }
        }
    }
    Ok((1..=limit).filter(|&n| !reachable[n as usize]).collect())
}
