//! Certified common prefix blocks across several bases.
//!
//! For bases b_1 < ... < b_k, an integer whose base-b_i expansion avoids
//! the digit zero in every base simultaneously is hard to exhibit
//! directly. This module works at the level of leading blocks instead:
//! the set of reals in [1, b) whose first digits are all nonzero in base
//! b is modeled by a finite-depth union C_b, and a near-return exponent n
//! with b_i^(m_i) close to b_1^n aligns the scaled copies v_i * C_(b_i)
//! on one axis. When every scale v_i stays inside the window
//! (1 - delta', 1], a thickness argument certifies that the scaled copies
//! intersect, and any point of the intersection yields a digit prefix
//! that is simultaneously nonzero in every base.
//!
//! The window loss is charged explicitly: each copy's normalized
//! thickness s is discounted to s * (1 - delta') before the sum test, so
//! the certificate that comes back is valid for every alignment inside
//! the window, not just the sampled one. The first pairwise certificate
//! is exact; later steps reuse the measured thickness of the running
//! intersection and are therefore conditional.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::certify::{newhouse_intersect, Certificate, SetSummary};
use crate::digits::{uses_only_big, DigitExpansion, DigitSetSpec};
use crate::fractal::{thickness, Exactness, IntervalUnion, MissingDigitSet};
use crate::orbit::{log_ratio, MAX_PRECISION_BITS};
use crate::rational::{format_rational, int};
use crate::{Error, Rational, Result};

/// Expansion depth of the per-base block models. Depth d keeps the first
/// d fractional digits, so certified prefixes carry d + 1 digits.
pub const DEFAULT_BLOCK_DEPTH: u32 = 3;

const MAX_BLOCK_EXPONENT: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct BlockReport {
    pub bases: Vec<u32>,
    /// Near-return exponent for the first base.
    pub exponent: u64,
    pub delta_prime: Rational,
    pub depth: u32,
    /// Matched exponents m_i per base; the first entry is `exponent`.
    pub floor_exponents: Vec<u64>,
    /// Alignment scales v_i = b_i^(m_i) / b_1^n, exact; the first is 1.
    pub scales: Vec<Rational>,
    /// One intersection certificate per fold step.
    pub certificates: Vec<Certificate>,
    /// Finite model of the aligned intersection; nonempty.
    pub witness: IntervalUnion,
    /// Re-verified nonzero digit prefixes, one per base.
    pub prefix_words: Vec<DigitExpansion>,
}

/// Matches `n` steps of the first base against the closest power of
/// `bi` from below, escalating precision until the floor is certain.
fn floor_scale(b1: u64, n: u64, bi: u64) -> Result<(u64, Rational)> {
    let mut bits = 64u32;
    let m = loop {
        let alpha = log_ratio(b1, bi, bits)?;
        if let Some(m) = alpha.try_floor_multiple(n) {
            break m;
        }
        if bits >= MAX_PRECISION_BITS {
            return Err(Error::Capacity(format!(
                "floor of {n} log {b1} / log {bi} undecided at {bits} bits"
            )));
        }
        bits *= 2;
    };
    let m32 = u32::try_from(m)
        .map_err(|_| Error::Capacity(format!("matched exponent {m} too large")))?;
    let n32 = u32::try_from(n)
        .map_err(|_| Error::Capacity(format!("exponent {n} too large")))?;
    let v = Rational::new(BigInt::from(bi).pow(m32), BigInt::from(b1).pow(n32));
    Ok((m, v))
}

/// Depth-`depth` model of the reals in [1, b) whose leading digits are
/// all nonzero, together with its normalized thickness. The model is the
/// Minkowski sum of the nonzero integer digits with the zero-avoiding
/// fractional set, so its hull is [b/(b-1), b].
fn block_union(b: u32, depth: u32) -> Result<(Rational, IntervalUnion)> {
    let digits: Vec<u32> = (1..b).collect();
    let mds = MissingDigitSet::new(b, &digits)?;
    let s = mds
        .closed_form_s()
        .ok_or_else(|| Error::Domain(format!("no closed-form thickness for base {b}")))?;
    let fractional = mds.approx(depth)?;
    let points = IntervalUnion::from_intervals(
        (1..b).map(|d| (int(i64::from(d)), int(i64::from(d)))).collect(),
    )?;
    Ok((s, points.minkowski_sum(&fractional)))
}

/// Certifies that the aligned block models of all `bases` at near-return
/// exponent `n` intersect, with the window loss `delta_prime` charged
/// against every thickness. Returns the certificates, the intersection
/// model, and re-verified digit prefixes; refuses (with the violated
/// inequality named) when the window or a thickness test fails.
pub fn egrs4_block_check(bases: &[u32], n: u64, delta_prime: &Rational) -> Result<BlockReport> {
    egrs4_block_check_at_depth(bases, n, delta_prime, DEFAULT_BLOCK_DEPTH)
}

/// [`egrs4_block_check`] with an explicit model depth.
pub fn egrs4_block_check_at_depth(
    bases: &[u32],
    n: u64,
    delta_prime: &Rational,
    depth: u32,
) -> Result<BlockReport> {
    if bases.len() < 2 {
        return Err(Error::Domain("at least two bases are required".into()));
    }
    for (i, &b) in bases.iter().enumerate() {
        if b < 3 {
            return Err(Error::Domain(format!("base {b} is too small, need >= 3")));
        }
        if bases[..i].contains(&b) {
            return Err(Error::Domain(format!("base {b} appears twice")));
        }
    }
    if n == 0 {
        return Err(Error::Domain("exponent must be at least 1".into()));
    }
    if n > MAX_BLOCK_EXPONENT {
        return Err(Error::Capacity(format!(
            "exponent {n} above the supported {MAX_BLOCK_EXPONENT}"
        )));
    }
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let one = int(1);
    if delta_prime <= &int(0) || delta_prime >= &one {
        return Err(Error::Domain(
            "window loss delta' must lie strictly between 0 and 1".into(),
        ));
    }
    let window_floor = &one - delta_prime;

    let b1 = u64::from(bases[0]);
    let mut floor_exponents = vec![n];
    let mut scales = vec![one.clone()];
    for (i, &bi) in bases.iter().enumerate().skip(1) {
        let (m, v) = floor_scale(b1, n, u64::from(bi))?;
        if v <= window_floor {
            return Err(Error::Refusal(format!(
                "window: scale v_{} = {} is not above 1 - delta' = {}",
                i + 1,
                format_rational(&v),
                format_rational(&window_floor)
            )));
        }
        floor_exponents.push(m);
        scales.push(v);
    }

    let mut aligned = Vec::with_capacity(bases.len());
    let mut s_values = Vec::with_capacity(bases.len());
    for (i, &b) in bases.iter().enumerate() {
        let (s, union) = block_union(b, depth)?;
        aligned.push(union.affine_image(&scales[i], &int(0))?);
        s_values.push(s);
    }

    let discount = &one - delta_prime;
    let mut certificates = Vec::new();
    let mut acc = aligned[0].clone();
    let mut acc_s = s_values[0].clone();
    let mut acc_exactness = Exactness::Exact;
    for j in 1..bases.len() {
        let left = SetSummary::from_union(&acc_s * &discount, &acc, acc_exactness)?;
        let right = SetSummary::from_union(
            &s_values[j] * &discount,
            &aligned[j],
            Exactness::Exact,
        )?;
        let cert = newhouse_intersect(&left, &right)?;
        if !cert.verdict {
            return Err(Error::Refusal(format!(
                "{} fails at intersection step {} with margin {}",
                cert.binding,
                j + 1,
                format_rational(&cert.margin)
            )));
        }
        certificates.push(cert);
        acc = acc.intersect(&aligned[j]);
        if acc.is_empty() {
            return Err(Error::Refusal(
                "certified intersection produced an empty finite model".into(),
            ));
        }
        if j + 1 < bases.len() {
            // Later folds lean on the measured structure of the running
            // intersection, which only bounds the true set.
            acc_s = if acc.is_interval() {
                int(0)
            } else {
                thickness(&acc)?.s
            };
            acc_exactness = Exactness::Estimate;
        }
    }

    let prefix_words = extract_prefix_words(&acc, bases, &scales, depth)?;

    Ok(BlockReport {
        bases: bases.to_vec(),
        exponent: n,
        delta_prime: delta_prime.clone(),
        depth,
        floor_exponents,
        scales,
        certificates,
        witness: acc,
        prefix_words,
    })
}

/// Reads `depth + 1` digits of the witness midpoint in every base and
/// re-verifies each resulting word with the plain digit checker.
fn extract_prefix_words(
    witness: &IntervalUnion,
    bases: &[u32],
    scales: &[Rational],
    depth: u32,
) -> Result<Vec<DigitExpansion>> {
    let parts = witness.parts();
    let part = parts
        .iter()
        .find(|p| p.lo < p.hi)
        .unwrap_or(&parts[0]);
    let x = (&part.lo + &part.hi) / int(2);

    let mut words = Vec::with_capacity(bases.len());
    for (i, &b) in bases.iter().enumerate() {
        let y = &x / &scales[i];
        let mut digits = Vec::with_capacity(depth as usize + 1);
        let d0 = (&y).floor().to_integer();
        digits.push(d0.to_u32().unwrap_or(u32::MAX));
        let mut frac = &y - Rational::from(d0);
        for _ in 0..depth {
            let scaled = frac * int(i64::from(b));
            let d = scaled.floor().to_integer();
            digits.push(d.to_u32().unwrap_or(u32::MAX));
            frac = scaled - Rational::from(d);
        }
        if digits.iter().any(|&d| d == 0 || d >= b) {
            return Err(Error::Refusal(format!(
                "prefix extraction in base {b} left the nonzero digit range"
            )));
        }
        let word = DigitExpansion { base: b, digits };
        if !uses_only_big(&word.value(), &DigitSetSpec::nonzero(b)?) {
            return Err(Error::Refusal(format!(
                "prefix word in base {b} failed re-verification"
            )));
        }
        words.push(word);
    }
    Ok(words)
}
