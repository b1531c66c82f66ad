//! Acceptance checklist: one numbered check per release gate, each
//! printing a single PASS/FAIL line (visible with `--nocapture`) with its
//! runtime. Checks pin exact values where the mathematics is exact and
//! stated tolerances elsewhere.

use std::sync::{Mutex, PoisonError};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use gapset::certify::{astels_sum, region_d, SumRow};
use gapset::digits::{binom_central, binom_gcd_oracle, kummer_divides, uses_only, DigitSetSpec};
use gapset::fractal::{thickness, ClosedInterval, Exactness, MissingDigitSet};
use gapset::orbit::{log_ratio, orbit_search, OrbitPredicate, PowerOrbit};
use gapset::rational::{int, ratio, Rational};
use gapset::witness::{egrs_density, graham_search, triple_search, waring_cover_check};

/// Runtime budgets are per check, so the timed bodies take turns: the
/// harness may schedule the test functions concurrently, and a wall-clock
/// bound measured while three other checks saturate the cores would test
/// the scheduler, not the code.
static GATE: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(PoisonError::into_inner)
}

fn report(number: u32, pass: bool, note: &str, elapsed: Duration) {
    println!(
        "criterion {number:02}: {} ({note}; {elapsed:?})",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_contiguous_thickness_closed_forms() {
    let _turn = serial();
    let start = Instant::now();
    let cases: Vec<(u32, u32)> = (3u32..=12)
        .flat_map(|b| (1..=b - 2).map(move |l| (b, l)))
        .collect();
    let low_ok = cases.par_iter().all(|&(b, l)| {
        let digits: Vec<u32> = (0..=l).collect();
        let set = MissingDigitSet::new(b, &digits).unwrap();
        (2..=6).all(|depth| {
            let rep = set.thickness_report(depth).unwrap();
            rep.s == ratio(i64::from(l), i64::from(b - 1)) && rep.exactness == Exactness::Exact
        })
    });
    let nonzero_ok = (3u32..=12).into_par_iter().all(|b| {
        let digits: Vec<u32> = (1..b).collect();
        let set = MissingDigitSet::new(b, &digits).unwrap();
        (2..=6).all(|depth| {
            let rep = set.thickness_report(depth).unwrap();
            rep.s == ratio(i64::from(b - 2), i64::from(b - 1)) && rep.exactness == Exactness::Exact
        })
    });
    let elapsed = start.elapsed();
    let pass = low_ok && nonzero_ok && elapsed < Duration::from_secs(1);
    report(
        1,
        pass,
        &format!(
            "{} zero-led and {} zero-free digit families, depths 2..=6, exact",
            cases.len(),
            10
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_02_power_image_thickness_window() {
    let _turn = serial();
    let start = Instant::now();
    let c3 = MissingDigitSet::new(3, &[0, 2]).unwrap();
    let base = c3.approx(12).unwrap();
    let mut pass = true;
    let mut notes = Vec::new();
    for k in [2u32, 3] {
        let rep = thickness(&base.power_image(k).unwrap()).unwrap();
        let lo = ratio(1, 1 << k);
        let hi = &lo + ratio(2, 100);
        pass &= rep.s >= lo && rep.s <= hi;
        notes.push(format!("k={k}: s={}", rep.s));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    report(2, pass, &notes.join(", "), elapsed);
    assert!(pass);
}

#[test]
fn criterion_03_three_set_sum_certificate() {
    let _turn = serial();
    let start = Instant::now();
    let rows = [
        SumRow {
            s: ratio(1, 2),
            hull_len: ratio(1, 6),
            max_gap: ratio(1, 18),
            exactness: Exactness::Exact,
        },
        SumRow {
            s: ratio(1, 3),
            hull_len: ratio(1, 12),
            max_gap: ratio(1, 24),
            exactness: Exactness::Exact,
        },
        SumRow {
            s: ratio(1, 4),
            hull_len: ratio(1, 20),
            max_gap: ratio(3, 100),
            exactness: Exactness::Exact,
        },
    ];
    let cert = astels_sum(&rows).unwrap();
    // Target for this row: verdict true with margin exactly 1/36. On
    // these numbers the rule itself says otherwise: the shortest hull,
    // 1/20, is below the longest gap, 1/18, so the verdict is false with
    // margin 1/20 - 1/18 = -1/180. A margin of 1/36 would need the third
    // hull to be 1/12, at which point 1/12 - 1/18 = 1/36 binds. The line
    // below therefore reports FAIL, and the assertions pin the faithful
    // values so any behavior change here is caught.
    let pass = cert.verdict && cert.margin == ratio(1, 36);
    let elapsed = start.elapsed();
    report(
        3,
        pass,
        &format!(
            "target true/1-36 vs computed {}/{} binding {}",
            cert.verdict, cert.margin, cert.binding
        ),
        elapsed,
    );
    assert!(!cert.verdict);
    assert_eq!(cert.margin, ratio(-1, 180));
    assert_eq!(cert.binding, "hull-gap");
}

#[test]
fn criterion_04_triples_complete_and_abundant() {
    let _turn = serial();
    let start = Instant::now();
    let found = triple_search(650).unwrap();
    let tuples: Vec<(u64, u64, u64)> = found.iter().map(|w| (w.x, w.y, w.z)).collect();
    let spec3 = DigitSetSpec::new(3, [0, 1]).unwrap();
    let spec4 = DigitSetSpec::new(4, [0, 1]).unwrap();
    let spec5 = DigitSetSpec::new(5, [0, 1]).unwrap();
    let mut brute = Vec::new();
    for z in 1..=650u64 {
        if !uses_only(z, &spec5) {
            continue;
        }
        for x in 1..z {
            if uses_only(x, &spec3) && uses_only(z - x, &spec4) {
                brute.push((x, z - x, z));
            }
        }
    }
    brute.sort_unstable_by_key(|&(x, _, z)| (z, x));
    let mut pass = tuples == brute;
    for classic in [(1, 4, 5), (9, 16, 25), (81, 69, 150), (325, 325, 650)] {
        pass &= tuples.contains(&classic);
    }

    let large = triple_search(1_000_000_000).unwrap();
    pass &= large.len() >= 14;
    // Digit-wise re-verification, independent of the search path.
    for w in &large {
        pass &= w.digit_proofs.0.value() == BigUint::from(w.x)
            && w.digit_proofs.1.value() == BigUint::from(w.y)
            && w.digit_proofs.2.value() == BigUint::from(w.z)
            && uses_only(w.x, &spec3)
            && uses_only(w.y, &spec4)
            && uses_only(w.z, &spec5)
            && w.x + w.y == w.z;
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    report(
        4,
        pass,
        &format!(
            "{} triples at 650 match brute force, {} at 1e9",
            tuples.len(),
            large.len()
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_05_carry_test_against_big_divisibility() {
    let _turn = serial();
    let start = Instant::now();
    let mut pass = true;
    // Running value of the central binomial coefficient, advanced by the
    // exact recurrence b(n) = b(n-1) * 2(2n-1)/n.
    let mut big = BigUint::from(1u32);
    for n in 1..=5000u64 {
        big = big * BigUint::from(2 * (2 * n - 1)) / BigUint::from(n);
        for p in [3u64, 5, 7, 11, 13] {
            let digit_test = kummer_divides(p, n).unwrap();
            let divides = (&big % BigUint::from(p)).is_zero();
            pass &= digit_test == divides;
        }
        if n == 1 || n == 50 || n == 5000 {
            pass &= big == binom_central(n).unwrap();
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    report(5, pass, "n <= 5000, p in {3,5,7,11,13}", elapsed);
    assert!(pass);
}

#[test]
fn criterion_06_coprime_census() {
    let _turn = serial();
    let start = Instant::now();
    let members = graham_search(10_000_000).unwrap();
    let spec3 = DigitSetSpec::new(3, [0, 1]).unwrap();
    let spec5 = DigitSetSpec::new(5, [0, 1, 2]).unwrap();
    let spec7 = DigitSetSpec::new(7, [0, 1, 2, 3]).unwrap();
    let mut pass = true;
    // Naive triple-filter scan over the first 10^5 integers.
    let naive: Vec<u64> = (1..=100_000u64)
        .filter(|&n| uses_only(n, &spec3) && uses_only(n, &spec5) && uses_only(n, &spec7))
        .collect();
    let prefix: Vec<u64> = members.iter().copied().take_while(|&n| n <= 100_000).collect();
    pass &= prefix == naive;
    for &n in members.iter().take_while(|&&n| n <= 10_000) {
        pass &= binom_gcd_oracle(n, 105).unwrap() == 1;
    }
    let elapsed = start.elapsed();
    report(
        6,
        pass,
        &format!("{} members up to 1e7, empirical census only", members.len()),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_07_log_linear_form_anchors() {
    let _turn = serial();
    let start = Instant::now();
    let a = log_ratio(3, 4, 128).unwrap();
    let b = log_ratio(3, 5, 128).unwrap();
    let mut pass = true;
    for (l1, l2, target_micro) in [(1i64, -1i64, 109_875i64), (1, -2, -572_731)] {
        let rep = gapset::orbit::linear_form(l1, l2, &a, &b);
        let lo = ratio(target_micro - 1_000, 1_000_000);
        let hi = ratio(target_micro + 1_000, 1_000_000);
        pass &= rep.value_lo >= lo && rep.value_hi <= hi && rep.certified_nonintegral;
    }
    let elapsed = start.elapsed();
    report(7, pass, "both anchors enclosed and nonintegral", elapsed);
    assert!(pass);
}

/// The eleven region inequalities for k1 = p/q, k2 = r/q with all
/// denominators cleared, evaluated in plain big-integer arithmetic.
/// Written out independently of both the scanner and the certifier.
fn region_rows_hold(p: &BigInt, r: &BigInt, q: &BigInt) -> bool {
    let m = |x: &BigInt, f: i64| x * BigInt::from(f);
    let zero = BigInt::from(0);
    m(q, 15) + m(p, 10) - m(r, 6) >= zero
        && m(q, 4) + m(p, 3) - m(r, 3) <= zero
        && m(p, 3) >= m(q, 2)
        && *p <= m(q, 4)
        && m(r, 9) >= m(q, 10)
        && m(r, 9) <= m(q, 50)
        && m(p, 25) >= m(r, 9)
        && m(p, 5) <= m(r, 6)
        && p >= q
        && r >= q
        && *r <= m(q, 5)
}

#[test]
fn criterion_08_orbit_hits_recheck_exactly() {
    let _turn = serial();
    let start = Instant::now();
    let alphas = [log_ratio(3, 4, 128).unwrap(), log_ratio(3, 5, 128).unwrap()];
    let found = orbit_search(&alphas, &OrbitPredicate::LeadingDigitRegion, 100_000).unwrap();
    let mut pass = !found.hit_ks.is_empty();

    // Every detailed hit record carries (or reproduces) exact coordinate
    // enclosures; each must earn a true certificate from the standalone
    // inequality certifier.
    let mut orbit = PowerOrbit::new();
    let mut certified = 0usize;
    for hit in &found.hits {
        let (k1, k2) = match &hit.mapped {
            Some(point) => point.clone(),
            None => {
                while orbit.k() < hit.k {
                    orbit.advance();
                }
                orbit.exact_point()
            }
        };
        let cert = region_d(&k1, &k2).unwrap();
        pass &= cert.verdict;
        certified += 1;
    }

    // Every hit index, including those past the detail cap, is re-checked
    // against the cleared-denominator inequalities with an independently
    // maintained power triple (q, p, r) = (3^k, 4^(f4+1), 5^(f5+1)).
    let mut q = BigInt::from(3);
    let mut p = BigInt::from(4);
    let mut r = BigInt::from(5);
    let mut idx = 0usize;
    for k in 1..=100_000u64 {
        if idx < found.hit_ks.len() && found.hit_ks[idx] == k {
            pass &= region_rows_hold(&p, &r, &q);
            idx += 1;
        }
        q *= 3;
        while p <= q {
            p *= 4;
        }
        while r <= q {
            r *= 5;
        }
    }
    pass &= idx == found.hit_ks.len();
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    report(
        8,
        pass,
        &format!(
            "{} hits, {} certified in detail, all row-checked",
            found.hit_ks.len(),
            certified
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_09_four_squares_cover() {
    let _turn = serial();
    let start = Instant::now();
    let target = ClosedInterval::new(int(0), int(4)).unwrap();
    let four = waring_cover_check(2, 4, 5, &target).unwrap();
    let mut pass = four.covers_target
        && four.is_interval
        && four.sumset.hull().unwrap().lo == int(0)
        && four.sumset.hull().unwrap().hi == int(4)
        && four.max_gap == int(0);
    let one = waring_cover_check(2, 1, 5, &ClosedInterval::new(int(0), int(1)).unwrap()).unwrap();
    let two = waring_cover_check(2, 2, 5, &ClosedInterval::new(int(0), int(2)).unwrap()).unwrap();
    pass &= !one.is_interval && !two.is_interval;
    let elapsed = start.elapsed();
    report(
        9,
        pass,
        "4 squares fill [0,4]; 1 and 2 squares leave gaps",
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_10_half_digit_difference_interval() {
    let _turn = serial();
    let start = Instant::now();
    let a3 = MissingDigitSet::new(3, &[0, 1]).unwrap().approx(4).unwrap();
    let a5 = MissingDigitSet::new(5, &[0, 1, 2]).unwrap().approx(4).unwrap();
    let diff = a3.minkowski_sum(&a5.affine_image(&int(-1), &int(0)).unwrap());
    let hull = diff.hull().unwrap();
    let pass = diff.is_interval() && hull.lo == ratio(-1, 2) && hull.hi == ratio(1, 2);
    let elapsed = start.elapsed();
    report(
        10,
        pass,
        "difference set is exactly [-1/2, 1/2] at depth 4",
        elapsed,
    );
    assert!(pass);
}

#[test]
fn criterion_11_window_density_brute_force() {
    let _turn = serial();
    let start = Instant::now();
    let rep = egrs_density(3, 5, 12).unwrap();
    let spec3 = DigitSetSpec::new(3, [0, 1]).unwrap();
    let spec5 = DigitSetSpec::new(5, [0, 1, 2]).unwrap();
    let mut expected = Vec::new();
    for k in 0..12u32 {
        let lo = 3u64.pow(k);
        let hi = 3u64.pow(k + 1);
        if (lo..hi).any(|m| uses_only(m, &spec3) && uses_only(m, &spec5)) {
            expected.push(k);
        }
    }
    let pass = rep.ratio > Rational::zero() && rep.hit_exponents == expected;
    let elapsed = start.elapsed();
    report(
        11,
        pass,
        &format!("{} of 12 windows hit", rep.hit_exponents.len()),
        elapsed,
    );
    assert!(pass);
}
