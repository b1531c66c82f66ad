//! Exact rational scalars used for every interval endpoint.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number; the endpoint type for all interval
/// work in this crate.
pub type Rational = num_rational::BigRational;

/// Rational from an integer pair, reducing to lowest terms.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form `num/den`, denominator always written.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Domain(format!("invalid rational numerator {num:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Domain(format!("invalid rational denominator {den:?}")))?;
    if den.is_zero() {
        return Err(Error::Domain("rational with zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

/// Decimal rendering with `digits` fractional digits, for human-facing
/// output only; rounds toward zero.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{frac:0>width$}",
        frac = frac_part,
        width = digits as usize
    )
}

/// Best-effort `f64` for diagnostics; exact code paths never consume this.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading parts when the raw conversion
        // overflows; good to ~15 significant digits which is all diagnostics
        // need.
        let digits_n = r.numer().to_string().len() as i32;
        let digits_d = r.denom().to_string().len() as i32;
        let shift = (digits_n.max(digits_d) - 18).max(0) as u32;
        let scale = BigInt::from(10u32).pow(shift);
        let n = (r.numer() / &scale).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() / &scale).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Floor of a rational as a big integer.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// True if `r` is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Exact `num/den` with the common factor removed in machine arithmetic
/// before any heap integer is built. Useful when millions of endpoints
/// share one denominator.
pub fn reduced_ratio_u128(num: u128, den: u128) -> Rational {
    debug_assert_ne!(den, 0);
    let g = num.gcd(&den);
    Rational::new_raw(BigInt::from(num / g), BigInt::from(den / g))
}
