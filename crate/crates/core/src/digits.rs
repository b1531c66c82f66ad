//! Base-`b` digit expansions, digit-set membership, and Kummer's carry
//! criterion for central binomial coefficients.
//!
//! The divisibility test is deliberately implemented twice: once through
//! digits ([`kummer_divides`]) and once through the full big-integer
//! binomial coefficient ([`binom_gcd_oracle`]). The second route has no
//! shortcuts so it can serve as an independent oracle for the first.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Largest `n` accepted by [`binom_gcd_oracle`]; beyond this the binomial
/// is no longer a desk-scale object.
pub const BINOM_ORACLE_CAP: u64 = 100_000;

/// A base-`b` digit string, most significant digit first. Zero expands to
/// the empty string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    pub base: u32,
    pub digits: Vec<u32>,
}

impl DigitExpansion {
    /// Reconstructs the integer value of the expansion.
    pub fn value(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for &d in &self.digits {
            acc = acc * self.base + d;
        }
        acc
    }
}

/// A base together with the set of digits a number is allowed to use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSetSpec {
    base: u32,
    allowed: Vec<u32>,
    // Bitmask over digits for bases up to 128; larger bases fall back to
    // binary search on `allowed`.
    mask: Option<u128>,
}

impl DigitSetSpec {
    pub fn new(base: u32, digits: impl IntoIterator<Item = u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::Domain(format!("base {base} < 2")));
        }
        let mut allowed: Vec<u32> = digits.into_iter().collect();
        allowed.sort_unstable();
        allowed.dedup();
        if allowed.is_empty() {
            return Err(Error::Domain("empty digit set".into()));
        }
        if let Some(&d) = allowed.last() {
            if d >= base {
                return Err(Error::Domain(format!("digit {d} not below base {base}")));
            }
        }
        let mask = if base <= 128 {
            Some(allowed.iter().fold(0u128, |m, &d| m | (1u128 << d)))
        } else {
            None
        };
        Ok(DigitSetSpec { base, allowed, mask })
    }

    /// The full digit set `{0, …, base-1}`.
    pub fn full(base: u32) -> Result<Self> {
        Self::new(base, 0..base)
    }

    /// The zero-free digit set `{1, …, base-1}`.
    pub fn nonzero(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::Domain(format!("base {base} < 2")));
        }
        Self::new(base, 1..base)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn allowed(&self) -> &[u32] {
        &self.allowed
    }

    pub fn contains(&self, digit: u32) -> bool {
        match self.mask {
            Some(m) => digit < 128 && m & (1u128 << digit) != 0,
            None => self.allowed.binary_search(&digit).is_ok(),
        }
    }

    /// True when the allowed digits form a contiguous run `a, a+1, …, a+l`.
    pub fn is_contiguous(&self) -> bool {
        let span = (self.allowed[self.allowed.len() - 1] - self.allowed[0]) as usize;
        span + 1 == self.allowed.len()
    }
}

/// Digit expansion of `n` in base `base`, most significant digit first.
pub fn digits_of(n: u64, base: u32) -> Result<DigitExpansion> {
    if base < 2 {
        return Err(Error::Domain(format!("base {base} < 2")));
    }
    let mut digits = Vec::new();
    let mut n = n;
    let b = base as u64;
    while n > 0 {
        digits.push((n % b) as u32);
        n /= b;
    }
    digits.reverse();
    Ok(DigitExpansion { base, digits })
}

/// Digit expansion of an unbounded integer, most significant digit first.
pub fn digits_of_big(n: &BigUint, base: u32) -> Result<DigitExpansion> {
    if base < 2 {
        return Err(Error::Domain(format!("base {base} < 2")));
    }
    let digits = n
        .to_radix_be(base)
        .into_iter()
        .map(|d| d as u32)
        .collect();
    if n.is_zero() {
        return Ok(DigitExpansion { base, digits: vec![] });
    }
    Ok(DigitExpansion { base, digits })
}

/// True when every base digit of `n` lies in the allowed set. Zero counts
/// as using only the digit 0.
pub fn uses_only(n: u64, spec: &DigitSetSpec) -> bool {
    if n == 0 {
        return spec.contains(0);
    }
    let b = spec.base as u64;
    let mut n = n;
    while n > 0 {
        if !spec.contains((n % b) as u32) {
            return false;
        }
        n /= b;
    }
    true
}

/// [`uses_only`] for unbounded integers.
pub fn uses_only_big(n: &BigUint, spec: &DigitSetSpec) -> bool {
    if n.is_zero() {
        return spec.contains(0);
    }
    n.to_radix_le(spec.base).iter().all(|&d| spec.contains(d as u32))
}

pub(crate) fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Kummer's criterion for the central binomial coefficient: an odd prime
/// `p` divides `binom(2n, n)` exactly when adding `n + n` in base `p`
/// carries, i.e. when some base-`p` digit of `n` exceeds `(p-1)/2`.
///
/// `p` must be an odd prime; composites and 2 are rejected.
pub fn kummer_divides(p: u64, n: u64) -> Result<bool> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let half = (p - 1) / 2;
    let mut n = n;
    while n > 0 {
        if n % p > half {
            return Ok(true);
        }
        n /= p;
    }
    Ok(false)
}

/// Exact `binom(2n, n)` via the multiplicative formula; no factorization
/// or digit shortcuts, so the result is an independent oracle.
pub fn binom_central(n: u64) -> Result<BigUint> {
    if n > BINOM_ORACLE_CAP {
        return Err(Error::Capacity(format!(
            "binomial oracle capped at n = {BINOM_ORACLE_CAP}, got {n}"
        )));
    }
    // Partial products binom(n+i, i) stay integral at every step.
    let mut acc = BigUint::one();
    for i in 1..=n {
        acc = acc * BigUint::from(n + i) / BigUint::from(i);
    }
    Ok(acc)
}

/// `gcd(binom(2n, n), m)` computed from the full big-integer binomial.
pub fn binom_gcd_oracle(n: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("gcd modulus must be positive".into()));
    }
    let binom = BigInt::from(binom_central(n)?);
    let g = binom.gcd(&BigInt::from(m));
    Ok(g.to_u64().expect("gcd of a u64 fits in u64"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_of_650_base_5() {
        let e = digits_of(650, 5).unwrap();
        assert_eq!(e.digits, vec![1, 0, 1, 0, 0]);
        assert_eq!(e.value(), BigUint::from(650u32));
    }

    #[test]
    fn digits_of_zero_is_empty() {
        assert!(digits_of(0, 7).unwrap().digits.is_empty());
        assert!(digits_of_big(&BigUint::zero(), 7).unwrap().digits.is_empty());
    }

    #[test]
    fn digits_of_rejects_base_below_two() {
        assert!(digits_of(5, 1).is_err());
        assert!(digits_of(5, 0).is_err());
    }

    #[test]
    fn digit_round_trip() {
        for n in (0..2000u64).chain([650, 184756, u64::MAX]) {
            for base in [2u32, 3, 5, 7, 10, 16, 60] {
                let e = digits_of(n, base).unwrap();
                assert_eq!(e.value(), BigUint::from(n), "n={n} base={base}");
                let big = digits_of_big(&BigUint::from(n), base).unwrap();
                assert_eq!(big.digits, e.digits);
            }
        }
    }

    #[test]
    fn uses_only_examples() {
        let spec = DigitSetSpec::new(3, [0, 1]).unwrap();
        assert!(uses_only(10, &spec)); // 101 in base 3
        assert!(!uses_only(5, &spec)); // 12 in base 3
        assert!(uses_only(0, &spec));
        let nonzero = DigitSetSpec::nonzero(3).unwrap();
        assert!(!uses_only(0, &nonzero));
        assert!(uses_only(5, &nonzero));
    }

    #[test]
    fn uses_only_full_set_is_universal() {
        let spec = DigitSetSpec::full(7).unwrap();
        for n in 0..500u64 {
            assert!(uses_only(n, &spec));
        }
    }

    #[test]
    fn digit_set_spec_validation() {
        assert!(DigitSetSpec::new(3, [0, 3]).is_err());
        assert!(DigitSetSpec::new(1, [0]).is_err());
        assert!(DigitSetSpec::new(3, []).is_err());
        assert!(DigitSetSpec::new(3, [1, 0, 1]).is_ok());
    }

    #[test]
    fn contiguity() {
        assert!(DigitSetSpec::new(5, [1, 2, 3]).unwrap().is_contiguous());
        assert!(!DigitSetSpec::new(5, [0, 2]).unwrap().is_contiguous());
    }

    #[test]
    fn kummer_examples() {
        // binom(20, 10) = 184756 = 2^2 * 11 * 13 * 17 * 19: no factor 3.
        assert!(!kummer_divides(3, 10).unwrap());
        // binom(6, 3) = 20: divisible by 5, and 3 = [3] in base 5 with 3 > 2.
        assert!(kummer_divides(5, 3).unwrap());
        assert!(kummer_divides(3, 2).unwrap()); // binom(4, 2) = 6
        assert!(!kummer_divides(7, 10).unwrap()); // 10 = [1,3] base 7, both <= 3
    }

    #[test]
    fn kummer_rejects_non_odd_primes() {
        assert!(kummer_divides(4, 10).is_err());
        assert!(kummer_divides(2, 10).is_err());
        assert!(kummer_divides(9, 10).is_err());
        assert!(kummer_divides(1, 10).is_err());
    }

    #[test]
    fn binom_oracle_examples() {
        assert_eq!(binom_central(10).unwrap(), BigUint::from(184756u32));
        assert_eq!(binom_gcd_oracle(3, 15).unwrap(), 5); // gcd(20, 15)
        assert_eq!(binom_gcd_oracle(10, 105).unwrap(), 1);
        assert_eq!(binom_gcd_oracle(1, 2).unwrap(), 2); // binom(2,1) = 2
    }

    #[test]
    fn binom_oracle_capacity_error() {
        match binom_central(BINOM_ORACLE_CAP + 1) {
            Err(Error::Capacity(_)) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn kummer_matches_oracle_on_small_range() {
        for p in [3u64, 5, 7, 11, 13] {
            for n in 0..400u64 {
                let digit = kummer_divides(p, n).unwrap();
                let oracle = binom_gcd_oracle(n, p).unwrap() == p;
                assert_eq!(digit, oracle, "p={p} n={n}");
            }
        }
    }
}
