//! Multiplicative-relation search over a list of integer bases.
//!
//! Bases `b_1, ..., b_m` admit a multiplicative relation when some
//! nonzero integer vector `(e_1, ..., e_m)` makes `prod b_i^(e_i) = 1`.
//! Factoring each base over the primes turns this into a kernel
//! computation on the exponent matrix, which is exact over the
//! rationals. A found relation is re-verified by multiplying out both
//! sides as big integers, so `Dependent` outcomes are unconditional.
//!
//! The converse is weaker by design: a trivial kernel proves there is no
//! relation at all, but the outcome is still reported as
//! [`IndependenceOutcome::NoSmallRelation`] with an explicit exponent
//! bound, because callers combine it with floating prescreens whose own
//! guarantees are bounded. Claiming exactly what was checked keeps the
//! composed statements honest.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::rational::{int, Rational};
use crate::{Error, Result};

/// Exponent bound attached to `NoSmallRelation` outcomes. The kernel
/// argument is unconditional, so any bound is sound; this one is large
/// enough to cover every relation a caller could plausibly probe.
pub const DEFAULT_RELATION_BOUND: u64 = 1_000_000;

const FACTOR_CAP: u64 = 1_000_000_000_000;

/// Outcome of the relation search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependenceOutcome {
    /// A verified relation: `prod bases[i]^(exponents[i]) = 1` with not
    /// all exponents zero.
    Dependent { exponents: Vec<i64> },
    /// No relation with exponents bounded by `bound` exists. (The
    /// underlying argument rules out all relations; see the module
    /// docs for why the claim is stated this way.)
    NoSmallRelation { bound: u64 },
}

fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n > FACTOR_CAP {
        return Err(Error::Capacity(format!(
            "base {n} exceeds the trial-division factoring cap"
        )));
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Clears denominators and divides by the gcd, making the signs
/// canonical: first nonzero entry positive.
fn normalize_kernel_vector(v: &[Rational]) -> Vec<i64> {
    let mut lcm = BigUint::one();
    for x in v {
        let d = x.denom().magnitude();
        lcm = num_integer::lcm(lcm, d.clone());
    }
    let lcm = Rational::from_integer(lcm.into());
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigUint::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.magnitude().clone());
    }
    let g = Rational::from_integer(g.into());
    let mut out: Vec<i64> = ints
        .iter()
        .map(|x| {
            (Rational::from_integer(x.clone()) / &g)
                .to_integer()
                .try_into()
                .expect("kernel entries stay within i64 for capped bases")
        })
        .collect();
    if let Some(first) = out.iter().find(|&&x| x != 0) {
        if *first < 0 {
            for x in &mut out {
                *x = -*x;
            }
        }
    }
    out
}

/// Searches the bases for a multiplicative relation.
pub fn multiplicative_independence_check(bases: &[u64]) -> Result<IndependenceOutcome> {
    if bases.is_empty() {
        return Err(Error::Domain("need at least one base".into()));
    }
    for &b in bases {
        if b < 2 {
            return Err(Error::Domain(format!(
                "base {b} has no logarithm of fixed sign"
            )));
        }
    }
    let factored: Vec<Vec<(u64, u32)>> = bases
        .iter()
        .map(|&b| factorize(b))
        .collect::<Result<_>>()?;
    let mut primes: Vec<u64> = factored
        .iter()
        .flat_map(|f| f.iter().map(|&(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    // Rows indexed by prime, columns by base; kernel vectors of this
    // matrix are exactly the exponent vectors of relations.
    let rows = primes.len();
    let cols = bases.len();
    let mut m: Vec<Vec<Rational>> = vec![vec![int(0); cols]; rows];
    for (j, f) in factored.iter().enumerate() {
        for &(p, e) in f {
            let i = primes.binary_search(&p).expect("prime was collected above");
            m[i][j] = int(e as i64);
        }
    }
    // Gaussian elimination tracking pivot columns; free columns span the
    // kernel.
    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for x in &mut m[r] {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..cols {
                    let sub = &m[r][cc] * &f;
                    m[i][cc] -= sub;
                }
            }
        }
        pivot_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols = pivot_of_row;
    let free_col = (0..cols).find(|c| !pivot_cols.contains(c));
    let Some(fc) = free_col else {
        return Ok(IndependenceOutcome::NoSmallRelation {
            bound: DEFAULT_RELATION_BOUND,
        });
    };
    // Kernel vector: free column = 1, pivot columns read off the reduced
    // rows (negated).
    let mut v = vec![int(0); cols];
    v[fc] = int(1);
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -m[row][fc].clone();
    }
    let exponents = normalize_kernel_vector(&v);
    // Unconditional re-verification over the integers.
    let mut lhs = BigUint::one();
    let mut rhs = BigUint::one();
    for (&b, &e) in bases.iter().zip(&exponents) {
        if e > 0 {
            lhs *= BigUint::from(b).pow(e as u32);
        } else if e < 0 {
            rhs *= BigUint::from(b).pow((-e) as u32);
        }
    }
    if lhs != rhs {
        return Err(Error::Refusal(
            "kernel vector failed integer re-verification".into(),
        ));
    }
    debug_assert!(exponents.iter().any(|&e| e != 0));
    Ok(IndependenceOutcome::Dependent { exponents })
}
