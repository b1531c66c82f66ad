//! Rational-relation geometry: certified distances of integer combinations
//! of log ratios from the integers, and the line families a rational
//! relation would confine an orbit to.
//!
//! If `l1·α + l2·β = c` held with rational `c = p/q`, every orbit point
//! `({kα}, {kβ})` would satisfy `l1·x + l2·y ≡ k·c (mod 1)`, and the
//! residues `k·c mod 1` cycle through `{j/q}`. The closure is then covered
//! by `q` line families; probing those lines for certified interior points
//! of the target region tells which relations the region geometry alone
//! cannot rule out. A `None` from the probe is a failed search, never a
//! proof of avoidance.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::orbit::logr::LogRatio;
use crate::rational::{int, ratio};
use crate::{Error, Rational, Result};

/// Certified evaluation of `l1·a + l2·b` and its distance to the nearest
/// integer.
#[derive(Clone, Debug)]
pub struct LinearFormReport {
    pub l1: i64,
    pub l2: i64,
    pub value_lo: Rational,
    pub value_hi: Rational,
    pub nearest_integer: BigInt,
    pub distance_lo: Rational,
    pub distance_hi: Rational,
    /// True when the enclosure provably excludes every integer.
    pub certified_nonintegral: bool,
}

fn scale_enclosure(l: i64, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let f = int(l);
    if l >= 0 {
        (lo * &f, hi * &f)
    } else {
        (hi * &f, lo * &f)
    }
}

pub fn linear_form(l1: i64, l2: i64, a: &LogRatio, b: &LogRatio) -> LinearFormReport {
    let (a_lo, a_hi) = scale_enclosure(l1, a.lo(), a.hi());
    let (b_lo, b_hi) = scale_enclosure(l2, b.lo(), b.hi());
    let value_lo = a_lo + b_lo;
    let value_hi = a_hi + b_hi;
    let mid = (&value_lo + &value_hi) / int(2);
    let nearest_integer = (mid + ratio(1, 2)).floor().to_integer();
    let floor_lo = value_lo.floor();
    let floor_hi = value_hi.floor();
    let half = ratio(1, 2);
    let (distance_lo, distance_hi, certified) = if floor_lo == floor_hi {
        // Entire enclosure inside [m, m+1]: distance to Z is the tent map,
        // concave there, so the minimum sits at an endpoint and the maximum
        // at an endpoint or the apex.
        let m = floor_lo;
        let d = |x: &Rational| -> Rational {
            let down = x - &m;
            let up = &m + int(1) - x;
            if down <= up {
                down
            } else {
                up
            }
        };
        let d_lo = d(&value_lo);
        let d_hi = d(&value_hi);
        let apex = &m + &half;
        let max = if value_lo <= apex && apex <= value_hi {
            half.clone()
        } else if d_lo >= d_hi {
            d_lo.clone()
        } else {
            d_hi.clone()
        };
        let min = if d_lo <= d_hi { d_lo } else { d_hi };
        let certified = min.is_positive();
        (min, max, certified)
    } else {
        // Enclosure crosses an integer: the distance may vanish.
        (int(0), half, false)
    };
    LinearFormReport {
        l1,
        l2,
        value_lo,
        value_hi,
        nearest_integer,
        distance_lo,
        distance_hi,
        certified_nonintegral: certified,
    }
}

/// The line families `l1·x + l2·y ≡ j/q (mod 1)` a rational relation with
/// value `c = p/q` would confine the orbit to.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub l1: i64,
    pub l2: i64,
    pub c: Rational,
    /// The distinct residues `j/q`, ascending.
    pub offsets: Vec<Rational>,
}

pub fn dependent_orbit_closure(l1: i64, l2: i64, c: &Rational) -> Result<ClosureReport> {
    if l1 == 0 && l2 == 0 {
        return Err(Error::Domain("coefficients must not both vanish".into()));
    }
    let g = l1.unsigned_abs().gcd(&l2.unsigned_abs());
    if g != 1 {
        return Err(Error::Domain(format!(
            "coefficients must be coprime, gcd is {g}"
        )));
    }
    let q = c.denom().clone();
    let q_u64 = q.to_u64().ok_or_else(|| {
        Error::Capacity("relation denominator too large to enumerate lines".into())
    })?;
    if q_u64 > 10_000 {
        return Err(Error::Capacity(format!(
            "relation denominator {q_u64} exceeds the 10000-line enumeration cap"
        )));
    }
    let offsets = (0..q_u64)
        .map(|j| Rational::new(BigInt::from(j), q.clone()))
        .collect();
    Ok(ClosureReport {
        l1,
        l2,
        c: c.clone(),
        offsets,
    })
}

/// Certified enclosure of `n^(1/q)` with width `2^-bits`.
pub fn nth_root_enclosure(n: &BigUint, q: u32, bits: u32) -> Result<(Rational, Rational)> {
    if q == 0 {
        return Err(Error::Domain("zeroth roots are undefined".into()));
    }
    if n.is_zero() {
        return Ok((int(0), int(0)));
    }
    if q == 1 {
        let exact = Rational::from_integer(BigInt::from(n.clone()));
        return Ok((exact.clone(), exact));
    }
    if u64::from(q) * u64::from(bits) > (1u64 << 22) {
        return Err(Error::Capacity(format!(
            "root enclosure scale q={q} bits={bits} too large"
        )));
    }
    // floor(((n << q·bits))^(1/q)) / 2^bits brackets the root from below
    // within one unit of the last place.
    let shifted = n << (q as usize * bits as usize);
    let r = shifted.nth_root(q);
    let den = BigInt::one() << bits;
    Ok((
        Rational::new(BigInt::from(r.clone()), den.clone()),
        Rational::new(BigInt::from(r + BigUint::one()), den),
    ))
}

/// Enclosure of `base^(e)` for rational `e = p/q` in `[0, 1]`.
fn rational_power_enclosure(base: u32, e: &Rational, bits: u32) -> Result<(Rational, Rational)> {
    debug_assert!(*e >= int(0) && *e <= int(1));
    let p = e.numer().to_u32().ok_or_else(|| {
        Error::Capacity("power numerator too large".into())
    })?;
    let q = e.denom().to_u32().ok_or_else(|| {
        Error::Capacity("power denominator too large".into())
    })?;
    if q > 4_096 {
        return Err(Error::Capacity(format!(
            "power denominator {q} exceeds the 4096 cap"
        )));
    }
    let n = BigUint::from(base).pow(p);
    nth_root_enclosure(&n, q, bits)
}

const REGION_PROBE_GRIDS: [u64; 4] = [8, 16, 32, 64];
const REGION_PROBE_BITS: [u32; 3] = [64, 128, 256];

/// Certifies that the mapped point of `(u, v)` (that is,
/// `k1 = 4^(1-u)`, `k2 = 5^(1-v)`) lies strictly inside the region every
/// constraint of [`crate::orbit::REGION_ROWS`] bounds. `false` means "not
/// certified", which covers boundary and exterior points alike.
pub fn region_interior_certified(u: &Rational, v: &Rational) -> Result<bool> {
    if !(*u >= int(0) && *u <= int(1) && *v >= int(0) && *v <= int(1)) {
        return Err(Error::Domain("torus coordinates must lie in [0, 1]".into()));
    }
    let eu = int(1) - u;
    let ev = int(1) - v;
    for &bits in &REGION_PROBE_BITS {
        let (k1_lo, k1_hi) = rational_power_enclosure(4, &eu, bits)?;
        let (k2_lo, k2_hi) = rational_power_enclosure(5, &ev, bits)?;
        // Strict interior tests, each at its worst corner.
        let checks = [
            ratio(1, 2) + &k1_lo / int(3) - &k2_hi / int(5) > int(0),
            int(0) - ratio(1, 3) - &k1_hi / int(4) + &k2_lo / int(4) > int(0),
            k1_lo.clone() > ratio(2, 3),
            k1_hi.clone() < int(4),
            k2_lo.clone() > ratio(10, 9),
            k2_hi.clone() < ratio(50, 9),
            &k1_lo / &k2_hi > ratio(9, 25),
            &k1_hi / &k2_lo < ratio(6, 5),
            k1_lo.clone() > int(1),
            k2_lo.clone() > int(1),
            k2_hi.clone() < int(5),
        ];
        if checks.iter().all(|&ok| ok) {
            return Ok(true);
        }
        // Distinguish "certainly fails" from "too blurry": when a check
        // fails even at the friendliest corner, more precision cannot help.
        let refutes = [
            ratio(1, 2) + &k1_hi / int(3) - &k2_lo / int(5) <= int(0),
            int(0) - ratio(1, 3) - &k1_lo / int(4) + &k2_hi / int(4) <= int(0),
            k1_hi.clone() <= ratio(2, 3),
            k1_lo.clone() >= int(4),
            k2_hi.clone() <= ratio(10, 9),
            k2_lo.clone() >= ratio(50, 9),
            &k1_hi / &k2_lo <= ratio(9, 25),
            &k1_lo / &k2_hi >= ratio(6, 5),
            k1_hi.clone() <= int(1),
            k2_hi.clone() <= int(1),
            k2_lo.clone() >= int(5),
        ];
        if refutes.iter().any(|&bad| bad) {
            return Ok(false);
        }
    }
    Ok(false)
}

/// Searches one closure line `l1·x + l2·y ≡ t (mod 1)` for a rational
/// point whose mapped image is certified interior to the region. Scans
/// coarse-to-fine grids in the free coordinate; `None` is exhaustion of the
/// probe budget, not a proof the line avoids the region.
pub fn line_meets_region(l1: i64, l2: i64, t: &Rational) -> Result<Option<(Rational, Rational)>> {
    if l1 == 0 && l2 == 0 {
        return Err(Error::Domain("coefficients must not both vanish".into()));
    }
    // Parametrize by the coordinate whose coefficient is nonzero; prefer u.
    let by_u = l2 != 0;
    let (steer, other) = if by_u { (l1, l2) } else { (l2, l1) };
    for &grid in &REGION_PROBE_GRIDS {
        for i in 0..grid {
            let free = Rational::new(BigInt::from(i), BigInt::from(grid));
            // Solve other·w ≡ t - steer·free (mod 1) for w in [0, 1).
            let rhs = t - int(steer) * &free;
            // w = (rhs + n) / other for the integers n that land w in [0,1).
            let o = int(other);
            let n_lo = (&o * int(0) - &rhs).ceil();
            let n_hi = (&o * int(1) - &rhs).floor();
            let (n_lo, n_hi) = if other > 0 {
                (n_lo, n_hi)
            } else {
                ((&o * int(1) - &rhs).ceil(), (&o * int(0) - &rhs).floor())
            };
            let mut n = n_lo.to_integer();
            let n_end = n_hi.to_integer();
            while n <= n_end {
                let w = (&rhs + Rational::from_integer(n.clone())) / &o;
                if w >= int(0) && w < int(1) {
                    let (u, v) = if by_u {
                        (free.clone(), w)
                    } else {
                        (w, free.clone())
                    };
                    if region_interior_certified(&u, &v)? {
                        return Ok(Some((u, v)));
                    }
                }
                n += 1;
            }
        }
    }
    Ok(None)
}
