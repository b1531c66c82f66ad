//! Checkable certificates for interval-union intersection rules.
//!
//! Each constructor evaluates one rule in exact rational arithmetic and
//! returns a [`Certificate`] that echoes its inputs, so the verdict can be
//! recomputed later from the certificate text alone ([`Certificate::revalidate`]).
//! The margin is the minimum slack over the rule's inequalities and
//! `binding` names the inequality attaining it; a certificate fed
//! finite-depth estimates instead of exact summaries is downgraded to
//! [`CertExactness::Conditional`].
//!
//! Rule conventions mirror the underlying intersection theory: thickness
//! sums pass at equality (closed), while the min-hull versus max-gap
//! comparison is strict. So a margin of exactly zero can accompany either
//! verdict; the rule decides, the margin only quantifies.
//!
//! A further known rule family (pairwise-thick sets intersect in a thick
//! set, with the output thickness depending on a delta-to-epsilon
//! trade-off) is deliberately not constructible here: no quantitative form
//! of that dependence is available to check, and an uncheckable
//! certificate would be worse than none.

use num_traits::{Signed, Zero};

use crate::fractal::{ClosedInterval, Exactness, IntervalUnion};
use crate::rational::{format_rational, int, parse_rational, ratio};
use crate::{Error, Rational, Result};

/// Which rule a certificate instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    NewhouseIntersect,
    AstelsSumInterval,
    SliceNonempty,
    RegionD,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::NewhouseIntersect => "newhouse-intersect",
            Rule::AstelsSumInterval => "astels-sum-interval",
            Rule::SliceNonempty => "slice-nonempty",
            Rule::RegionD => "region-d",
        }
    }

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newhouse-intersect" => Ok(Rule::NewhouseIntersect),
            "astels-sum-interval" => Ok(Rule::AstelsSumInterval),
            "slice-nonempty" => Ok(Rule::SliceNonempty),
            "region-d" => Ok(Rule::RegionD),
            other => Err(Error::Domain(format!("unknown certificate rule {other:?}"))),
        }
    }
}

/// Whether the certificate's inputs were exact set data or finite-depth
/// estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertExactness {
    Exact,
    Conditional,
}

impl CertExactness {
    pub fn as_str(self) -> &'static str {
        match self {
            CertExactness::Exact => "exact",
            CertExactness::Conditional => "conditional",
        }
    }

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CertExactness::Exact),
            "conditional" => Ok(CertExactness::Conditional),
            other => Err(Error::Domain(format!("unknown exactness {other:?}"))),
        }
    }

    fn and(self, other: CertExactness) -> CertExactness {
        if self == CertExactness::Exact && other == CertExactness::Exact {
            CertExactness::Exact
        } else {
            CertExactness::Conditional
        }
    }
}

fn cert_exactness_of(e: Exactness) -> CertExactness {
    match e {
        Exactness::Exact => CertExactness::Exact,
        Exactness::Estimate => CertExactness::Conditional,
    }
}

/// What an intersection rule needs to know about one set: normalized
/// thickness, convex hull, and the bounded gaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSummary {
    pub s: Rational,
    pub hull: ClosedInterval,
    pub gaps: Vec<ClosedInterval>,
    pub exactness: Exactness,
}

impl SetSummary {
    pub fn new(
        s: Rational,
        hull: ClosedInterval,
        gaps: Vec<ClosedInterval>,
        exactness: Exactness,
    ) -> Result<Self> {
        if s < int(0) || s >= int(1) {
            return Err(Error::Domain(format!(
                "normalized thickness must lie in [0, 1), got {}",
                format_rational(&s)
            )));
        }
        if hull.len() <= int(0) {
            return Err(Error::Domain("hull must have positive length".into()));
        }
        Ok(SetSummary {
            s,
            hull,
            gaps,
            exactness,
        })
    }

    /// Reads hull and gaps off an interval union; `s` and `exactness`
    /// come from the caller's thickness analysis.
    pub fn from_union(s: Rational, u: &IntervalUnion, exactness: Exactness) -> Result<Self> {
        let hull = u.hull()?;
        let gaps = u
            .gaps()
            .into_iter()
            .map(|(lo, hi)| ClosedInterval { lo, hi })
            .collect();
        SetSummary::new(s, hull, gaps, exactness)
    }
}

/// One summand for the sumset rule: normalized thickness, hull length,
/// longest gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumRow {
    pub s: Rational,
    pub hull_len: Rational,
    pub max_gap: Rational,
    pub exactness: Exactness,
}

/// One factor of the product set the slice rule cuts: like [`SumRow`]
/// but with the full hull interval, which the plane test needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSet {
    pub s: Rational,
    pub hull: ClosedInterval,
    pub max_gap: Rational,
    pub exactness: Exactness,
}

/// A self-contained record of one rule evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub rule: Rule,
    /// Echoed parameters, enough to recompute the verdict.
    pub inputs: Vec<(String, String)>,
    pub verdict: bool,
    /// Minimum slack over the rule's inequalities (negative when one
    /// fails).
    pub margin: Rational,
    /// Name of the inequality attaining the margin.
    pub binding: String,
    pub exactness: CertExactness,
}

/// Running minimum that remembers which named slack attained it.
struct MarginTracker {
    margin: Option<(Rational, String)>,
}

impl MarginTracker {
    fn new() -> Self {
        MarginTracker { margin: None }
    }

    fn offer(&mut self, name: &str, slack: Rational) {
        match &self.margin {
            Some((best, _)) if *best <= slack => {}
            _ => self.margin = Some((slack, name.to_string())),
        }
    }

    fn finish(self) -> (Rational, String) {
        self.margin.expect("every rule offers at least one slack")
    }
}

fn interval_text(iv: &ClosedInterval) -> String {
    format!("{}..{}", format_rational(&iv.lo), format_rational(&iv.hi))
}

fn parse_interval(s: &str) -> Result<ClosedInterval> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Domain(format!("expected lo..hi interval, got {s:?}")))?;
    ClosedInterval::new(parse_rational(lo.trim())?, parse_rational(hi.trim())?)
}

fn gaps_text(gaps: &[ClosedInterval]) -> String {
    if gaps.is_empty() {
        "-".to_string()
    } else {
        gaps.iter()
            .map(interval_text)
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn parse_gaps(s: &str) -> Result<Vec<ClosedInterval>> {
    if s.trim() == "-" {
        return Ok(Vec::new());
    }
    s.split(';').map(|part| parse_interval(part.trim())).collect()
}

/// Gaps long enough that the opposing hull could sit strictly inside
/// them. Shorter gaps cannot break linking and are dropped from both the
/// slack scan and the echoed inputs, keeping certificates compact without
/// changing the verdict.
fn linking_relevant_gaps(hull: &ClosedInterval, gaps: &[ClosedInterval]) -> Vec<ClosedInterval> {
    let h = hull.len();
    gaps.iter().filter(|g| g.len() > h).cloned().collect()
}

/// Offers the linking slacks of `hull` against the opposing set's hull
/// and (relevant) gaps. Touching counts as linked, so every slack is
/// closed: negative only on strict separation or strict containment.
fn offer_linking_slacks(
    tracker: &mut MarginTracker,
    label: &str,
    hull: &ClosedInterval,
    other_hull: &ClosedInterval,
    other_relevant_gaps: &[ClosedInterval],
) {
    // Overlap length of the two hulls; negative is the separation width.
    let overlap = hull.hi.clone().min(other_hull.hi.clone())
        - hull.lo.clone().max(other_hull.lo.clone());
    tracker.offer(&format!("hull-overlap-{label}"), overlap);
    for g in other_relevant_gaps {
        // How far the hull pokes out of this gap; negative depth means
        // strict containment inside the open gap.
        let poke = (&g.lo - &hull.lo).max(&hull.hi - &g.hi);
        tracker.offer(&format!("hull-inside-gap-{label}"), poke);
    }
}

/// Two-set intersection rule: the normalized thicknesses must sum to at
/// least 1 (equality passes) and each hull must be linked with the other
/// set, meaning it neither sits strictly inside one of the other's gaps
/// nor strictly misses the other's hull.
pub fn newhouse_intersect(a: &SetSummary, b: &SetSummary) -> Result<Certificate> {
    for (label, s) in [("a", &a.s), ("b", &b.s)] {
        if *s < int(0) || *s >= int(1) {
            return Err(Error::Domain(format!(
                "thickness s-{label} must lie in [0, 1), got {}",
                format_rational(s)
            )));
        }
    }
    let gaps_a = linking_relevant_gaps(&b.hull, &a.gaps);
    let gaps_b = linking_relevant_gaps(&a.hull, &b.gaps);
    let mut tracker = MarginTracker::new();
    tracker.offer("thickness-sum", &a.s + &b.s - int(1));
    offer_linking_slacks(&mut tracker, "a-in-b", &a.hull, &b.hull, &gaps_b);
    offer_linking_slacks(&mut tracker, "b-in-a", &b.hull, &a.hull, &gaps_a);
    let (margin, binding) = tracker.finish();
    let verdict = margin >= int(0);
    let inputs = vec![
        ("s-a".to_string(), format_rational(&a.s)),
        ("s-b".to_string(), format_rational(&b.s)),
        ("hull-a".to_string(), interval_text(&a.hull)),
        ("hull-b".to_string(), interval_text(&b.hull)),
        ("gaps-a".to_string(), gaps_text(&gaps_a)),
        ("gaps-b".to_string(), gaps_text(&gaps_b)),
        ("exact-a".to_string(), a.exactness.as_str().to_string()),
        ("exact-b".to_string(), b.exactness.as_str().to_string()),
    ];
    Ok(Certificate {
        rule: Rule::NewhouseIntersect,
        inputs,
        verdict,
        margin,
        binding,
        exactness: cert_exactness_of(a.exactness).and(cert_exactness_of(b.exactness)),
    })
}

/// Sumset-is-an-interval rule: thicknesses sum to at least 1 (closed) and
/// the shortest hull is strictly longer than the longest gap.
pub fn astels_sum(rows: &[SumRow]) -> Result<Certificate> {
    if rows.len() < 2 {
        return Err(Error::Domain(format!(
            "sum rule needs at least 2 sets, got {}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.s < int(0) || row.s >= int(1) {
            return Err(Error::Domain(format!(
                "set {}: normalized thickness must lie in [0, 1)",
                i + 1
            )));
        }
        if row.hull_len <= int(0) {
            return Err(Error::Domain(format!(
                "set {}: hull length must be positive",
                i + 1
            )));
        }
        if row.max_gap < int(0) {
            return Err(Error::Domain(format!(
                "set {}: max gap must be nonnegative",
                i + 1
            )));
        }
    }
    let sum: Rational = rows.iter().map(|r| r.s.clone()).sum();
    let min_hull = rows
        .iter()
        .map(|r| r.hull_len.clone())
        .min()
        .expect("nonempty");
    let max_gap = rows
        .iter()
        .map(|r| r.max_gap.clone())
        .max()
        .expect("nonempty");
    let mut tracker = MarginTracker::new();
    tracker.offer("thickness-sum", &sum - int(1));
    tracker.offer("hull-gap", &min_hull - &max_gap);
    let (margin, binding) = tracker.finish();
    // The hull/gap comparison is strict, so zero slack there fails.
    let verdict = &sum - int(1) >= int(0) && min_hull > max_gap;
    let mut inputs = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        inputs.push((
            format!("set-{}", i + 1),
            format!(
                "{} {} {} {}",
                format_rational(&row.s),
                format_rational(&row.hull_len),
                format_rational(&row.max_gap),
                row.exactness.as_str()
            ),
        ));
    }
    let exactness = rows.iter().fold(CertExactness::Exact, |acc, r| {
        acc.and(cert_exactness_of(r.exactness))
    });
    Ok(Certificate {
        rule: Rule::AstelsSumInterval,
        inputs,
        verdict,
        margin,
        binding,
        exactness,
    })
}

/// The named slacks of the scaled-power region, all closed.
fn region_slacks(k1: &Rational, k2: &Rational) -> Vec<(&'static str, Rational)> {
    vec![
        ("balance-lower", ratio(1, 2) + k1 / int(3) - k2 / int(5)),
        ("balance-upper", k2 / int(4) - k1 / int(4) - ratio(1, 3)),
        ("k1-broad-lower", k1 - ratio(2, 3)),
        ("k1-upper", int(4) - k1),
        ("k2-broad-lower", k2 - ratio(10, 9)),
        ("k2-broad-upper", ratio(50, 9) - k2),
        ("ratio-lower", k1 / k2 - ratio(9, 25)),
        ("ratio-upper", ratio(6, 5) - k1 / k2),
        ("k1-lower", k1 - int(1)),
        ("k2-lower", k2 - int(1)),
        ("k2-upper", int(5) - k2),
    ]
}

/// Membership test for the region of scale pairs `(k1, k2)` the orbit
/// search targets: two balance inequalities plus box and ratio bounds.
/// All constraints are closed; the margin is the smallest slack.
pub fn region_d(k1: &Rational, k2: &Rational) -> Result<Certificate> {
    if *k1 <= int(0) || *k2 <= int(0) {
        return Err(Error::Domain("scale factors must be positive".into()));
    }
    let mut tracker = MarginTracker::new();
    for (name, slack) in region_slacks(k1, k2) {
        tracker.offer(name, slack);
    }
    let (margin, binding) = tracker.finish();
    let verdict = margin >= int(0);
    Ok(Certificate {
        rule: Rule::RegionD,
        inputs: vec![
            ("k1".to_string(), format_rational(k1)),
            ("k2".to_string(), format_rational(k2)),
        ],
        verdict,
        margin,
        binding,
        exactness: CertExactness::Exact,
    })
}

/// Worst-corner membership test over a box of scale pairs: true only if
/// every point of `[k1_lo, k1_hi] x [k2_lo, k2_hi]` satisfies the region
/// constraints. The returned margin is the worst-corner minimum slack.
pub fn region_d_box(
    k1_lo: &Rational,
    k1_hi: &Rational,
    k2_lo: &Rational,
    k2_hi: &Rational,
) -> Result<(bool, Rational)> {
    if *k1_lo <= int(0) || *k2_lo <= int(0) {
        return Err(Error::Domain("scale factors must be positive".into()));
    }
    if k1_lo > k1_hi || k2_lo > k2_hi {
        return Err(Error::Domain("box bounds out of order".into()));
    }
    // Each slack is monotone in k1 and k2 separately, so its minimum over
    // the box is attained at one corner; evaluating all four corners and
    // keeping the worst covers every slack at once.
    let mut margin: Option<Rational> = None;
    for k1 in [k1_lo, k1_hi] {
        for k2 in [k2_lo, k2_hi] {
            for (_, slack) in region_slacks(k1, k2) {
                let better = match &margin {
                    None => true,
                    Some(m) => slack < *m,
                };
                if better {
                    margin = Some(slack);
                }
            }
        }
    }
    let margin = margin.expect("slack list is never empty");
    Ok((margin >= int(0), margin))
}

/// Plane-slices-a-product rule: the three sets, scaled by the direction
/// coordinates, must satisfy the sumset rule, and the plane
/// `v . x = a` must meet the hull box.
pub fn slice_nonempty(
    sets: &[SliceSet; 3],
    v: &[Rational; 3],
    a: &Rational,
) -> Result<Certificate> {
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            return Err(Error::Domain(format!(
                "direction coordinate {} vanishes; the rule needs all three sets",
                i + 1
            )));
        }
    }
    let scaled: Vec<SumRow> = sets
        .iter()
        .zip(v)
        .map(|(set, vi)| {
            let m = vi.abs();
            SumRow {
                s: set.s.clone(),
                hull_len: set.hull.len() * &m,
                max_gap: &set.max_gap * &m,
                exactness: set.exactness,
            }
        })
        .collect();
    let sum_cert = astels_sum(&scaled)?;
    // Range of v . x over the hull box; each coordinate contributes the
    // endpoint products in the order its sign dictates.
    let mut proj_lo = int(0);
    let mut proj_hi = int(0);
    for (set, vi) in sets.iter().zip(v) {
        let e1 = vi * &set.hull.lo;
        let e2 = vi * &set.hull.hi;
        proj_lo = proj_lo + e1.clone().min(e2.clone());
        proj_hi = proj_hi + e1.max(e2);
    }
    let mut tracker = MarginTracker::new();
    tracker.offer(&sum_cert.binding, sum_cert.margin.clone());
    tracker.offer("plane-box", (a - &proj_lo).min(&proj_hi - a));
    let (margin, binding) = tracker.finish();
    let verdict = sum_cert.verdict && *a >= proj_lo && *a <= proj_hi;
    let mut inputs = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        inputs.push((format!("s-{}", i + 1), format_rational(&set.s)));
        inputs.push((format!("hull-{}", i + 1), interval_text(&set.hull)));
        inputs.push((format!("gap-{}", i + 1), format_rational(&set.max_gap)));
        inputs.push((
            format!("exact-{}", i + 1),
            set.exactness.as_str().to_string(),
        ));
    }
    inputs.push((
        "v".to_string(),
        v.iter().map(format_rational).collect::<Vec<_>>().join(" "),
    ));
    inputs.push(("a".to_string(), format_rational(a)));
    Ok(Certificate {
        rule: Rule::SliceNonempty,
        inputs,
        verdict,
        margin,
        binding,
        exactness: sum_cert.exactness,
    })
}

impl Certificate {
    /// Canonical key-value text block, stable across runs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("rule: {}\n", self.rule.as_str()));
        for (k, v) in &self.inputs {
            out.push_str(&format!("input {k}: {v}\n"));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out.push_str(&format!("margin: {}\n", format_rational(&self.margin)));
        out.push_str(&format!("binding: {}\n", self.binding));
        out.push_str(&format!("exactness: {}\n", self.exactness.as_str()));
        out
    }

    pub fn from_text(text: &str) -> Result<Certificate> {
        let mut rule = None;
        let mut inputs = Vec::new();
        let mut verdict = None;
        let mut margin = None;
        let mut binding = None;
        let mut exactness = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::Domain(format!("malformed certificate line {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(input_key) = key.strip_prefix("input ") {
                inputs.push((input_key.trim().to_string(), value.to_string()));
            } else {
                match key {
                    "rule" => rule = Some(Rule::from_str(value)?),
                    "verdict" => {
                        verdict = Some(match value {
                            "true" => true,
                            "false" => false,
                            other => {
                                return Err(Error::Domain(format!(
                                    "verdict must be true or false, got {other:?}"
                                )))
                            }
                        })
                    }
                    "margin" => margin = Some(parse_rational(value)?),
                    "binding" => binding = Some(value.to_string()),
                    "exactness" => exactness = Some(CertExactness::from_str(value)?),
                    other => {
                        return Err(Error::Domain(format!(
                            "unknown certificate key {other:?}"
                        )))
                    }
                }
            }
        }
        Ok(Certificate {
            rule: rule.ok_or_else(|| Error::Domain("certificate lacks a rule".into()))?,
            inputs,
            verdict: verdict.ok_or_else(|| Error::Domain("certificate lacks a verdict".into()))?,
            margin: margin.ok_or_else(|| Error::Domain("certificate lacks a margin".into()))?,
            binding: binding.ok_or_else(|| Error::Domain("certificate lacks a binding".into()))?,
            exactness: exactness
                .ok_or_else(|| Error::Domain("certificate lacks an exactness".into()))?,
        })
    }

    fn input(&self, key: &str) -> Result<&str> {
        self.inputs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Domain(format!("certificate lacks input {key:?}")))
    }

    /// Recomputes the rule from the echoed inputs and checks that verdict,
    /// margin, and binding all reproduce.
    pub fn revalidate(&self) -> Result<bool> {
        let rebuilt = match self.rule {
            Rule::RegionD => {
                let k1 = parse_rational(self.input("k1")?)?;
                let k2 = parse_rational(self.input("k2")?)?;
                region_d(&k1, &k2)?
            }
            Rule::AstelsSumInterval => {
                let mut rows = Vec::new();
                for i in 1.. {
                    let Ok(value) = self.input(&format!("set-{i}")) else {
                        break;
                    };
                    rows.push(parse_sum_row(value)?);
                }
                astels_sum(&rows)?
            }
            Rule::NewhouseIntersect => {
                let parse_side = |side: &str| -> Result<SetSummary> {
                    SetSummary::new(
                        parse_rational(self.input(&format!("s-{side}"))?)?,
                        parse_interval(self.input(&format!("hull-{side}"))?)?,
                        parse_gaps(self.input(&format!("gaps-{side}"))?)?,
                        parse_exactness(self.input(&format!("exact-{side}"))?)?,
                    )
                };
                newhouse_intersect(&parse_side("a")?, &parse_side("b")?)?
            }
            Rule::SliceNonempty => {
                let mut sets = Vec::new();
                for i in 1..=3 {
                    sets.push(SliceSet {
                        s: parse_rational(self.input(&format!("s-{i}"))?)?,
                        hull: parse_interval(self.input(&format!("hull-{i}"))?)?,
                        max_gap: parse_rational(self.input(&format!("gap-{i}"))?)?,
                        exactness: parse_exactness(self.input(&format!("exact-{i}"))?)?,
                    });
                }
                let sets: [SliceSet; 3] = sets.try_into().expect("exactly three sets");
                let v_parts: Vec<Rational> = self
                    .input("v")?
                    .split_whitespace()
                    .map(parse_rational)
                    .collect::<Result<_>>()?;
                let v: [Rational; 3] = v_parts
                    .try_into()
                    .map_err(|_| Error::Domain("direction must have three coordinates".into()))?;
                let a = parse_rational(self.input("a")?)?;
                slice_nonempty(&sets, &v, &a)?
            }
        };
        Ok(rebuilt.verdict == self.verdict
            && rebuilt.margin == self.margin
            && rebuilt.binding == self.binding
            && rebuilt.exactness == self.exactness)
    }
}

fn parse_exactness(s: &str) -> Result<Exactness> {
    match s {
        "exact" => Ok(Exactness::Exact),
        "estimate" => Ok(Exactness::Estimate),
        other => Err(Error::Domain(format!("unknown exactness {other:?}"))),
    }
}

fn parse_sum_row(value: &str) -> Result<SumRow> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(Error::Domain(format!(
            "sum row needs 's hull gap exactness', got {value:?}"
        )));
    }
    Ok(SumRow {
        s: parse_rational(parts[0])?,
        hull_len: parse_rational(parts[1])?,
        max_gap: parse_rational(parts[2])?,
        exactness: parse_exactness(parts[3])?,
    })
}
