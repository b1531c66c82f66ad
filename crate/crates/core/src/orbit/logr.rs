//! Certified dyadic enclosures of natural logarithms and log ratios.
//!
//! Everything is computed with floor-truncated integer series so each
//! enclosure `[lo, hi]` is a proved bound, not a float estimate. The only
//! rounding direction used is downward, and the accumulated slack is
//! accounted for explicitly and added to the upper endpoint.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::rational::int;
use crate::{Error, Rational, Result};

pub const MAX_PRECISION_BITS: u32 = 16_384;

/// Floor-truncated `atanh(a/b) · 2^w` for `0 <= a/b <= 1/3`.
///
/// Returns `(sum, terms)` with `sum <= atanh(a/b)·2^w < sum + 3·terms + 4`:
/// each stored power `p_j` underestimates `x^(2j+1)·2^w` by less than 9/8
/// (the floor errors contract by `x^2 <= 1/9` per step), each term division
/// adds less than one more unit, and once `p` reaches zero the true tail is
/// below 2 units.
fn atanh_scaled(a: &BigUint, b: &BigUint, w: u32) -> (BigUint, u32) {
    debug_assert!(a * 3u32 <= *b);
    let a2 = a * a;
    let b2 = b * b;
    let mut p = (a << w) / b;
    let mut sum = BigUint::zero();
    let mut terms = 0u32;
    while !p.is_zero() {
        sum += &p / (2 * terms + 1);
        p = &p * &a2 / &b2;
        terms += 1;
    }
    (sum, terms)
}

/// Certified enclosure of `ln n` with width at most `2^-bits`.
pub fn ln_enclosure(n: u64, bits: u32) -> Result<(Rational, Rational)> {
    if n == 0 {
        return Err(Error::Domain("ln of zero".into()));
    }
    if bits == 0 || bits > MAX_PRECISION_BITS {
        return Err(Error::Domain(format!(
            "precision must be in 1..={MAX_PRECISION_BITS} bits, got {bits}"
        )));
    }
    if n == 1 {
        return Ok((int(0), int(0)));
    }
    let w = bits + 24;
    let s = n.ilog2();
    // n = 2^s · (1 + t) with t in [0, 1), so ln n = s·ln 2 + 2·atanh(x)
    // where x = (n - 2^s)/(n + 2^s) lies in [0, 1/3).
    let a = BigUint::from(n) - (BigUint::one() << s);
    let b = BigUint::from(n) + (BigUint::one() << s);
    let (sum_x, terms_x) = atanh_scaled(&a, &b, w);
    let (sum_l2, terms_l2) = atanh_scaled(&BigUint::one(), &BigUint::from(3u32), w);
    let lo_num = (&sum_x + &sum_l2 * s) << 1u32;
    let slack = (BigUint::from(3 * terms_x + 4) + BigUint::from(3 * terms_l2 + 4) * s) << 1u32;
    let hi_num = &lo_num + slack;
    let den = BigInt::one() << w;
    let lo = Rational::new(BigInt::from(lo_num), den.clone());
    let hi = Rational::new(BigInt::from(hi_num), den);
    debug_assert!(&hi - &lo <= Rational::new(BigInt::one(), BigInt::one() << bits));
    Ok((lo, hi))
}

/// Smallest integer `r >= 2` with `r^e = n`, as `(r, e)` with `e` maximal.
/// Returns `(n, 1)` when `n` is not a proper power.
pub fn multiplicative_kernel(n: u64) -> (u64, u32) {
    debug_assert!(n >= 2);
    for e in (2..=n.ilog2()).rev() {
        let r = n.nth_root(e);
        if r.checked_pow(e).map_or(false, |p| p == n) {
            return (r, e);
        }
    }
    (n, 1)
}

/// A certified value of `log(num_base) / log(den_base)`.
///
/// When the two bases are powers of a common integer the ratio is an exact
/// rational and the enclosure collapses to a point. Otherwise `lo < hi`
/// bracket the true value with `hi - lo <= 2^-precision_bits`.
#[derive(Clone, Debug)]
pub struct LogRatio {
    num_base: u64,
    den_base: u64,
    precision_bits: u32,
    lo: Rational,
    hi: Rational,
    exact: bool,
}

/// Builds the certified ratio `log(num_base) / log(den_base)`.
pub fn log_ratio(num_base: u64, den_base: u64, precision_bits: u32) -> Result<LogRatio> {
    if num_base < 2 || den_base < 2 {
        return Err(Error::Domain(format!(
            "log ratio needs bases >= 2, got {num_base} and {den_base}"
        )));
    }
    if precision_bits == 0 || precision_bits > MAX_PRECISION_BITS {
        return Err(Error::Domain(format!(
            "precision must be in 1..={MAX_PRECISION_BITS} bits, got {precision_bits}"
        )));
    }
    let (rn, en) = multiplicative_kernel(num_base);
    let (rd, ed) = multiplicative_kernel(den_base);
    if rn == rd {
        let value = Rational::new(BigInt::from(en), BigInt::from(ed));
        return Ok(LogRatio {
            num_base,
            den_base,
            precision_bits,
            lo: value.clone(),
            hi: value,
            exact: true,
        });
    }
    let target = Rational::new(BigInt::one(), BigInt::one() << precision_bits);
    let mut component_bits = precision_bits + 10;
    for _ in 0..4 {
        let (num_lo, num_hi) = ln_enclosure(num_base, component_bits)?;
        let (den_lo, den_hi) = ln_enclosure(den_base, component_bits)?;
        // Both logs are positive (bases >= 2), so outward division is
        // monotone in each operand.
        let lo = num_lo / &den_hi;
        let hi = num_hi / &den_lo;
        if &hi - &lo <= target {
            return Ok(LogRatio {
                num_base,
                den_base,
                precision_bits,
                lo,
                hi,
                exact: false,
            });
        }
        component_bits += 32;
    }
    Err(Error::Capacity(format!(
        "log ratio enclosure for {num_base}/{den_base} did not reach 2^-{precision_bits}"
    )))
}

impl LogRatio {
    pub fn num_base(&self) -> u64 {
        self.num_base
    }

    pub fn den_base(&self) -> u64 {
        self.den_base
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Same ratio re-certified at a different precision.
    pub fn refine(&self, precision_bits: u32) -> Result<LogRatio> {
        log_ratio(self.num_base, self.den_base, precision_bits)
    }

    /// `floor(n · value)` when the enclosure pins it down, else `None`
    /// (the caller should refine and retry).
    pub fn try_floor_multiple(&self, n: u64) -> Option<u64> {
        let scale = Rational::from_integer(BigInt::from(n));
        let f_lo = (&self.lo * &scale).floor();
        let f_hi = (&self.hi * &scale).floor();
        if f_lo == f_hi {
            f_lo.to_integer().to_u64()
        } else {
            None
        }
    }

    /// Dyadic bounds `(floor(lo·2^shift), ceil(hi·2^shift))` as unsigned
    /// integers; the value must be positive (it always is for bases >= 2).
    pub fn dyadic_bounds(&self, shift: u32) -> (BigUint, BigUint) {
        let two = Rational::from_integer(BigInt::one() << shift);
        let lo = (&self.lo * &two).floor().to_integer();
        let hi = (&self.hi * &two).ceil().to_integer();
        (
            lo.to_biguint().expect("positive log ratio"),
            hi.to_biguint().expect("positive log ratio"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn ln_enclosure_of_two_is_tight() {
        let (lo, hi) = ln_enclosure(2, 96).unwrap();
        // ln 2 = 0.693147180559945309...
        assert!(lo <= ratio(6931471805599454, 10_000_000_000_000_000));
        assert!(hi >= ratio(6931471805599453, 10_000_000_000_000_000));
        assert!(&hi - &lo <= Rational::new(BigInt::one(), BigInt::one() << 96));
        assert!(lo > int(0));
    }

    #[test]
    fn ln_edge_cases() {
        assert!(ln_enclosure(0, 64).is_err());
        let (lo, hi) = ln_enclosure(1, 64).unwrap();
        assert_eq!(lo, int(0));
        assert_eq!(hi, int(0));
        // Powers of two take the pure ln2 path (x = 0).
        let (lo8, hi8) = ln_enclosure(8, 80).unwrap();
        assert!(lo8 <= ratio(2079441542, 1_000_000_000)); // 3 ln 2 = 2.0794415416...
        assert!(hi8 >= ratio(2079441541, 1_000_000_000));
    }

    #[test]
    fn ln_is_monotone_across_enclosures() {
        let mut prev = ln_enclosure(2, 64).unwrap();
        for n in 3..=40u64 {
            let cur = ln_enclosure(n, 64).unwrap();
            assert!(prev.1 < cur.0, "ln({}) should separate from ln({n})", n - 1);
            prev = cur;
        }
    }

    #[test]
    fn ln_respects_products() {
        for (a, b) in [(2u64, 3u64), (5, 7), (10, 13), (60, 61), (12, 144)] {
            let (la_lo, la_hi) = ln_enclosure(a, 80).unwrap();
            let (lb_lo, lb_hi) = ln_enclosure(b, 80).unwrap();
            let (lab_lo, lab_hi) = ln_enclosure(a * b, 80).unwrap();
            assert!(lab_hi >= &la_lo + &lb_lo);
            assert!(lab_lo <= &la_hi + &lb_hi);
        }
    }

    #[test]
    fn exact_ratios_from_common_kernels() {
        for (n, d, num, den) in [
            (4u64, 2u64, 2i64, 1i64),
            (2, 4, 1, 2),
            (8, 4, 3, 2),
            (9, 3, 2, 1),
            (27, 9, 3, 2),
            (36, 6, 2, 1),
            (6, 6, 1, 1),
        ] {
            let r = log_ratio(n, d, 64).unwrap();
            assert!(r.is_exact(), "{n}/{d}");
            assert_eq!(*r.lo(), ratio(num, den));
            assert_eq!(*r.hi(), ratio(num, den));
            assert_eq!(r.width(), int(0));
        }
        assert!(!log_ratio(10, 11, 32).unwrap().is_exact());
    }

    #[test]
    fn log_three_over_log_four_digits() {
        let r = log_ratio(3, 4, 128).unwrap();
        // log 3 / log 4 = 0.7924812503605780907...
        assert!(*r.lo() > ratio(7924812503605780, 10_000_000_000_000_000));
        assert!(*r.hi() < ratio(7924812503605781, 10_000_000_000_000_000));
        assert!(r.width() <= Rational::new(BigInt::one(), BigInt::one() << 128));
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(log_ratio(1, 3, 64).is_err());
        assert!(log_ratio(3, 1, 64).is_err());
        assert!(log_ratio(3, 4, 0).is_err());
        assert!(log_ratio(3, 4, MAX_PRECISION_BITS + 1).is_err());
    }

    #[test]
    fn floor_multiples_match_float_intuition() {
        let r = log_ratio(10, 11, 96).unwrap();
        // 25 · log10/log11 = 24.006..., 478 · log10/log11 = 459.0007...
        assert_eq!(r.try_floor_multiple(25), Some(24));
        assert_eq!(r.try_floor_multiple(478), Some(459));
        assert_eq!(r.try_floor_multiple(0), Some(0));
    }

    #[test]
    fn dyadic_bounds_bracket_the_value() {
        let r = log_ratio(3, 4, 96).unwrap();
        let (lo, hi) = r.dyadic_bounds(64);
        assert!(lo < hi);
        let den = Rational::new(BigInt::one() << 64, BigInt::one());
        let lo_r = Rational::from_integer(BigInt::from(lo)) / &den;
        let hi_r = Rational::from_integer(BigInt::from(hi)) / &den;
        assert!(lo_r <= *r.lo());
        assert!(hi_r >= *r.hi());
    }

    #[test]
    fn kernel_detection() {
        assert_eq!(multiplicative_kernel(64), (2, 6));
        assert_eq!(multiplicative_kernel(36), (6, 2));
        assert_eq!(multiplicative_kernel(7), (7, 1));
        assert_eq!(multiplicative_kernel(1_000_000), (10, 6));
    }
}
