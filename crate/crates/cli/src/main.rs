//! Command-line front end: one subcommand per library operation, with
//! text, CSV, and JSON output plus an SVG renderer for the scale-pair
//! region figure.
//!
//! Defaults are fixed and printed in the help text (128 precision bits,
//! depth 8); nothing adapts between invocations, so identical arguments
//! produce identical bytes. Exit codes: 0 success, 1 domain error or
//! refused certificate, 2 capacity limit.

use std::fmt::Write as _;
use std::io::Read as _;
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::pow::Pow;

use gapset::certify::{region_d, Certificate};
use gapset::digits::DigitSetSpec;
use gapset::fractal::{ClosedInterval, IntervalUnion, MissingDigitSet};
use gapset::orbit::{
    log_ratio, multiplicative_independence_check, orbit_search, IndependenceOutcome, LogRatio,
    OrbitPredicate, REGION_ROWS,
};
use gapset::rational::{
    decimal_string, format_rational, int, parse_rational, ratio, to_f64, Rational,
};
use gapset::restricted::{enumerate, growth_report, MultiBaseSpec};
use gapset::witness::{
    egrs_density, graham_search, simultaneous_nonzero_search, triple_search, triple_search_with,
    waring_cover_check,
};
use gapset::{Error, Result};

#[derive(Parser)]
#[command(
    name = "gapset",
    version,
    about = "Digit-restricted integer sets, missing-digit Cantor sets, and their certificates"
)]
struct Cli {
    /// Output format; svg applies to the region figure only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Digit expansion of an integer, most significant digit first.
    Digits {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        base: u32,
    },
    /// Carry test: does the odd prime p divide binom(2n, n)?
    Kummer {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
    /// Integers up to a limit whose digits stay inside every allowed set.
    Enumerate {
        /// Comma-separated bases, e.g. 3,4.
        #[arg(long)]
        bases: String,
        /// Semicolon-separated digit lists, one per base, e.g. 0,1;0,1.
        #[arg(long)]
        digit_sets: String,
        #[arg(long)]
        limit: u64,
    },
    /// Certified counting exponent vs the observed count for a
    /// simultaneous digit restriction.
    Growth {
        #[arg(long)]
        bases: String,
        #[arg(long)]
        digit_sets: String,
        #[arg(long)]
        limit: u64,
    },
    /// Thickness of a missing-digit set at a finite depth.
    Thickness {
        #[arg(long)]
        base: u32,
        /// Comma-separated allowed digits, e.g. 0,1.
        #[arg(long)]
        digits: String,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Minkowski sum (or difference) of two missing-digit approximations.
    Sumset {
        /// Exactly two comma-separated bases.
        #[arg(long)]
        bases: String,
        /// Two semicolon-separated digit lists.
        #[arg(long)]
        digit_sets: String,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Subtract the second set instead of adding it.
        #[arg(long)]
        difference: bool,
    },
    /// Re-derive the verdict of a certificate saved with `region`.
    Certify {
        /// Path to the certificate text, or - for stdin.
        #[arg(long)]
        file: String,
    },
    /// Membership certificate for a scale pair (k1, k2); svg renders the
    /// region figure with the queried point marked.
    Region {
        /// First scale, as a fraction or decimal, e.g. 1 or 5/2 or 2.5.
        #[arg(long)]
        k1: String,
        #[arg(long)]
        k2: String,
        /// Grid cells per axis for svg output (16..=256).
        #[arg(long, default_value_t = 64)]
        resolution: u32,
    },
    /// Scan the rotation orbit of logarithm ratios and list hit steps.
    Orbit {
        /// Comma-separated base pairs n/d, each meaning log(n)/log(d).
        #[arg(long, default_value = "3/4,3/5")]
        ratios: String,
        #[arg(long, default_value_t = 1000)]
        k_max: u64,
        /// Near-return threshold in (0,1); omitted means the scale-pair
        /// region predicate (which needs the default ratios).
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 128)]
        precision_bits: u32,
    },
    /// Solutions of x + y = z with each coordinate digit-pure in its base.
    Triples {
        #[arg(long)]
        limit: u64,
        /// Exactly three comma-separated bases (default 3,4,5).
        #[arg(long)]
        bases: Option<String>,
        /// Three semicolon-separated digit lists (default 0,1 each).
        #[arg(long)]
        digit_sets: Option<String>,
    },
    /// Integers n with gcd(binom(2n,n), 105) = 1, located by digit rules.
    Graham {
        #[arg(long)]
        limit: u64,
    },
    /// Exponent windows [p^k, p^(k+1)) hit by integers digit-pure in two
    /// bases at once.
    Density {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Number of windows to inspect.
        #[arg(long)]
        n: u32,
    },
    /// Integers avoiding digit zero in every listed base.
    Nonzero {
        #[arg(long)]
        bases: String,
        #[arg(long)]
        limit: u64,
    },
    /// Interval coverage of a sum of powered set approximations.
    Waring {
        #[arg(long)]
        power: u32,
        #[arg(long)]
        terms: u32,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        /// Target interval lower end (default 0).
        #[arg(long)]
        target_lo: Option<String>,
        /// Target interval upper end (default the term count).
        #[arg(long)]
        target_hi: Option<String>,
    },
    /// Multiplicative relation search over integer bases.
    Independence {
        #[arg(long)]
        bases: String,
    },
}

/// Everything a subcommand reports: named scalar fields plus an optional
/// row table. Each renderer consumes the same structure, so the three
/// formats cannot drift apart.
struct Output {
    fields: Vec<(&'static str, String)>,
    table: Option<Table>,
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Output {
    fn fields(fields: Vec<(&'static str, String)>) -> Self {
        Output { fields, table: None }
    }

    fn with_table(fields: Vec<(&'static str, String)>, table: Table) -> Self {
        Output {
            fields,
            table: Some(table),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            exit(code);
        }
    };
    match run(cli) {
        Ok(rendered) => print!("{rendered}"),
        Err(e) => {
            eprintln!("{e}");
            exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    let format = cli.format;
    let out = match cli.command {
        Cmd::Digits { n, base } => cmd_digits(n, base)?,
        Cmd::Kummer { p, n } => cmd_kummer(p, n)?,
        Cmd::Enumerate {
            bases,
            digit_sets,
            limit,
        } => cmd_enumerate(&bases, &digit_sets, limit)?,
        Cmd::Growth {
            bases,
            digit_sets,
            limit,
        } => cmd_growth(&bases, &digit_sets, limit)?,
        Cmd::Thickness { base, digits, depth } => cmd_thickness(base, &digits, depth)?,
        Cmd::Sumset {
            bases,
            digit_sets,
            depth,
            difference,
        } => cmd_sumset(&bases, &digit_sets, depth, difference)?,
        Cmd::Certify { file } => cmd_certify(&file)?,
        Cmd::Region { k1, k2, resolution } => {
            let k1 = parse_number(&k1)?;
            let k2 = parse_number(&k2)?;
            if format == Format::Svg {
                return region_svg(resolution, &k1, &k2);
            }
            let cert = region_d(&k1, &k2)?;
            if format == Format::Text {
                // The text form is the certificate's canonical
                // serialization, so it can be fed back to `certify`.
                return Ok(cert.to_text());
            }
            certificate_output(&cert)?
        }
        Cmd::Orbit {
            ratios,
            k_max,
            eps,
            precision_bits,
        } => cmd_orbit(&ratios, k_max, eps.as_deref(), precision_bits)?,
        Cmd::Triples {
            limit,
            bases,
            digit_sets,
        } => cmd_triples(limit, bases.as_deref(), digit_sets.as_deref())?,
        Cmd::Graham { limit } => cmd_graham(limit)?,
        Cmd::Density { p, q, n } => cmd_density(p, q, n)?,
        Cmd::Nonzero { bases, limit } => cmd_nonzero(&bases, limit)?,
        Cmd::Waring {
            power,
            terms,
            depth,
            target_lo,
            target_hi,
        } => cmd_waring(power, terms, depth, target_lo.as_deref(), target_hi.as_deref())?,
        Cmd::Independence { bases } => cmd_independence(&bases)?,
    };
    render(&out, format)
}

// ---- argument parsing -------------------------------------------------

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| Error::Domain(format!("cannot parse {what} entry {part:?}")))
        })
        .collect()
}

fn parse_digit_sets(s: &str) -> Result<Vec<Vec<u32>>> {
    s.split(';').map(|set| parse_list(set, "digit")).collect()
}

/// Accepts p/q fractions, plain integers, and decimal literals; every
/// form becomes an exact rational.
fn parse_number(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some(point) = t.find('.') {
        let (whole, frac) = (&t[..point], &t[point + 1..]);
        let (sign, whole) = match whole.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, whole),
        };
        let digits_ok =
            |part: &str| part.chars().all(|c| c.is_ascii_digit());
        if !digits_ok(whole) || !digits_ok(frac) || frac.is_empty() {
            return Err(Error::Domain(format!("cannot parse number {s:?}")));
        }
        let joined = format!("{}{frac}", if whole.is_empty() { "0" } else { whole });
        let numer: BigInt = joined
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse number {s:?}")))?;
        let denom = BigInt::from(10).pow(frac.len() as u32);
        return Ok(Rational::new(numer * BigInt::from(sign), denom));
    }
    parse_rational(t)
}

fn multibase(bases: &str, digit_sets: &str) -> Result<MultiBaseSpec> {
    let bases: Vec<u32> = parse_list(bases, "base")?;
    let sets = parse_digit_sets(digit_sets)?;
    if bases.len() != sets.len() {
        return Err(Error::Domain(format!(
            "{} bases but {} digit sets",
            bases.len(),
            sets.len()
        )));
    }
    let specs = bases
        .into_iter()
        .zip(sets)
        .map(|(b, ds)| DigitSetSpec::new(b, ds))
        .collect::<Result<Vec<_>>>()?;
    MultiBaseSpec::new(specs)
}

fn echo_digit_sets(spec: &MultiBaseSpec) -> (String, String) {
    let bases = spec
        .specs()
        .iter()
        .map(|d| d.base().to_string())
        .collect::<Vec<_>>()
        .join(",");
    let sets = spec
        .specs()
        .iter()
        .map(|d| {
            d.allowed()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";");
    (bases, sets)
}

// ---- subcommands ------------------------------------------------------

fn cmd_digits(n: u64, base: u32) -> Result<Output> {
    let exp = gapset::digits::digits_of(n, base)?;
    let digits = exp
        .digits
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",");
    Ok(Output::fields(vec![
        ("n", n.to_string()),
        ("base", base.to_string()),
        ("length", exp.digits.len().to_string()),
        ("digits", digits),
    ]))
}

fn cmd_kummer(p: u64, n: u64) -> Result<Output> {
    let divides = gapset::digits::kummer_divides(p, n)?;
    let mut ds = Vec::new();
    let mut m = n;
    while m > 0 {
        ds.push((m % p).to_string());
        m /= p;
    }
    ds.reverse();
    Ok(Output::fields(vec![
        ("p", p.to_string()),
        ("n", n.to_string()),
        ("divides", divides.to_string()),
        ("digits", ds.join(",")),
        ("allowed_max", ((p - 1) / 2).to_string()),
    ]))
}

fn cmd_enumerate(bases: &str, digit_sets: &str, limit: u64) -> Result<Output> {
    let spec = multibase(bases, digit_sets)?;
    let members = enumerate(&spec, limit)?;
    let (bases, sets) = echo_digit_sets(&spec);
    let rows = members.iter().map(|n| vec![n.to_string()]).collect();
    Ok(Output::with_table(
        vec![
            ("bases", bases),
            ("digit_sets", sets),
            ("limit", limit.to_string()),
            ("count", members.len().to_string()),
        ],
        Table {
            columns: vec!["n"],
            rows,
        },
    ))
}

fn cmd_growth(bases: &str, digit_sets: &str, limit: u64) -> Result<Output> {
    let spec = multibase(bases, digit_sets)?;
    let rep = growth_report(&spec, limit)?;
    let (bases, sets) = echo_digit_sets(&spec);
    Ok(Output::fields(vec![
        ("bases", bases),
        ("digit_sets", sets),
        ("limit", rep.limit.to_string()),
        ("count", rep.count.to_string()),
        ("s_lo", format_rational(&rep.s_lo)),
        ("s_hi", format_rational(&rep.s_hi)),
        ("s_mid", format!("{:.6}", rep.s_midpoint())),
        ("predicted_lo", format_rational(&rep.predicted_lo)),
        ("predicted_hi", format_rational(&rep.predicted_hi)),
        ("empirical_exponent", format!("{:.6}", rep.empirical_exponent)),
    ]))
}

fn cmd_thickness(base: u32, digits: &str, depth: u32) -> Result<Output> {
    let digits: Vec<u32> = parse_list(digits, "digit")?;
    let set = MissingDigitSet::new(base, &digits)?;
    let rep = set.thickness_report(depth)?;
    let hull = set.hull();
    Ok(Output::fields(vec![
        ("base", base.to_string()),
        (
            "digits",
            digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("depth", depth.to_string()),
        ("c", format_rational(&rep.c)),
        ("s", format_rational(&rep.s)),
        ("s_decimal", decimal_string(&rep.s, 6)),
        ("exactness", rep.exactness.as_str().to_string()),
        ("witness_gap_lo", format_rational(&rep.witness_gap.0)),
        ("witness_gap_hi", format_rational(&rep.witness_gap.1)),
        ("hull_lo", format_rational(&hull.lo)),
        ("hull_hi", format_rational(&hull.hi)),
    ]))
}

fn union_rows(u: &IntervalUnion) -> Table {
    let rows = u
        .parts()
        .iter()
        .map(|part| vec![format_rational(&part.lo), format_rational(&part.hi)])
        .collect();
    Table {
        columns: vec!["lo", "hi"],
        rows,
    }
}

fn max_gap(u: &IntervalUnion) -> Rational {
    u.gaps()
        .into_iter()
        .map(|(lo, hi)| hi - lo)
        .max()
        .unwrap_or_else(|| int(0))
}

fn cmd_sumset(bases: &str, digit_sets: &str, depth: u32, difference: bool) -> Result<Output> {
    let bases: Vec<u32> = parse_list(bases, "base")?;
    let sets = parse_digit_sets(digit_sets)?;
    if bases.len() != 2 || sets.len() != 2 {
        return Err(Error::Domain(
            "sumset needs exactly two bases and two digit sets".into(),
        ));
    }
    let a = MissingDigitSet::new(bases[0], &sets[0])?.approx(depth)?;
    let b = MissingDigitSet::new(bases[1], &sets[1])?.approx(depth)?;
    let operand = if difference {
        b.affine_image(&int(-1), &int(0))?
    } else {
        b
    };
    let sum = a.minkowski_sum(&operand);
    let hull = sum.hull()?;
    Ok(Output::with_table(
        vec![
            (
                "bases",
                bases
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            (
                "digit_sets",
                sets.iter()
                    .map(|ds| {
                        ds.iter()
                            .map(|d| d.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect::<Vec<_>>()
                    .join(";"),
            ),
            ("depth", depth.to_string()),
            (
                "operation",
                if difference { "difference" } else { "sum" }.to_string(),
            ),
            ("part_count", sum.part_count().to_string()),
            ("is_interval", sum.is_interval().to_string()),
            ("hull_lo", format_rational(&hull.lo)),
            ("hull_hi", format_rational(&hull.hi)),
            ("max_gap", format_rational(&max_gap(&sum))),
            ("measure", format_rational(&sum.measure())),
        ],
        union_rows(&sum),
    ))
}

fn cmd_certify(file: &str) -> Result<Output> {
    let text = if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Domain(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(file)
            .map_err(|e| Error::Domain(format!("cannot read {file}: {e}")))?
    };
    let cert = Certificate::from_text(&text)?;
    if !cert.revalidate()? {
        return Err(Error::Refusal(
            "certificate does not revalidate against its echoed inputs".into(),
        ));
    }
    let mut out = certificate_output(&cert)?;
    out.fields.push(("revalidated", "true".to_string()));
    Ok(out)
}

fn certificate_output(cert: &Certificate) -> Result<Output> {
    let mut fields: Vec<(&'static str, String)> =
        vec![("rule", cert.rule.as_str().to_string())];
    for (k, v) in &cert.inputs {
        // Input names come from the rule implementation, a closed set.
        let key: &'static str = match k.as_str() {
            "k1" => "k1",
            "k2" => "k2",
            other => {
                return Err(Error::Domain(format!(
                    "certificate input {other:?} has no column mapping"
                )))
            }
        };
        fields.push((key, v.clone()));
    }
    fields.push(("verdict", cert.verdict.to_string()));
    fields.push(("margin", format_rational(&cert.margin)));
    fields.push(("binding", cert.binding.clone()));
    fields.push(("exactness", cert.exactness.as_str().to_string()));
    Ok(Output::fields(fields))
}

fn parse_ratio_pairs(ratios: &str, precision_bits: u32) -> Result<Vec<LogRatio>> {
    ratios
        .split(',')
        .map(|pair| {
            let (num, den) = pair
                .trim()
                .split_once('/')
                .ok_or_else(|| Error::Domain(format!("ratio {pair:?} is not of the form n/d")))?;
            let num: u64 = num
                .parse()
                .map_err(|_| Error::Domain(format!("cannot parse base {num:?}")))?;
            let den: u64 = den
                .parse()
                .map_err(|_| Error::Domain(format!("cannot parse base {den:?}")))?;
            log_ratio(num, den, precision_bits)
        })
        .collect()
}

fn cmd_orbit(ratios: &str, k_max: u64, eps: Option<&str>, precision_bits: u32) -> Result<Output> {
    let alphas = parse_ratio_pairs(ratios, precision_bits)?;
    let (predicate, label) = match eps {
        Some(e) => {
            let eps = parse_number(e)?;
            let label = format!("near-return eps={}", format_rational(&eps));
            (OrbitPredicate::NearReturn { eps }, label)
        }
        None => (OrbitPredicate::LeadingDigitRegion, "region".to_string()),
    };
    let report = orbit_search(&alphas, &predicate, k_max)?;
    let rows = report
        .hit_ks
        .iter()
        .map(|k| vec![k.to_string()])
        .collect();
    Ok(Output::with_table(
        vec![
            ("ratios", ratios.to_string()),
            ("predicate", label),
            ("k_max", report.k_max.to_string()),
            ("precision_bits", report.precision_bits.to_string()),
            ("hit_count", report.hit_ks.len().to_string()),
        ],
        Table {
            columns: vec!["k"],
            rows,
        },
    ))
}

fn cmd_triples(limit: u64, bases: Option<&str>, digit_sets: Option<&str>) -> Result<Output> {
    let witnesses = match (bases, digit_sets) {
        (None, None) => triple_search(limit)?,
        (Some(bases), Some(digit_sets)) => {
            let bases: Vec<u32> = parse_list(bases, "base")?;
            let sets = parse_digit_sets(digit_sets)?;
            if bases.len() != 3 || sets.len() != 3 {
                return Err(Error::Domain(
                    "triples needs exactly three bases and three digit sets".into(),
                ));
            }
            let mut specs = Vec::new();
            for (b, ds) in bases.iter().zip(&sets) {
                specs.push(DigitSetSpec::new(*b, ds.iter().copied())?);
            }
            let specs: [DigitSetSpec; 3] = specs
                .try_into()
                .expect("length checked above");
            triple_search_with(&specs, limit)?
        }
        _ => {
            return Err(Error::Domain(
                "custom triples need both --bases and --digit-sets".into(),
            ))
        }
    };
    let rows = witnesses
        .iter()
        .map(|w| {
            vec![
                w.x.to_string(),
                w.y.to_string(),
                w.z.to_string(),
                w.bases.0.to_string(),
                w.bases.1.to_string(),
                w.bases.2.to_string(),
            ]
        })
        .collect();
    Ok(Output::with_table(
        vec![
            ("limit", limit.to_string()),
            ("count", witnesses.len().to_string()),
        ],
        Table {
            columns: vec!["x", "y", "z", "base_x", "base_y", "base_z"],
            rows,
        },
    ))
}

fn cmd_graham(limit: u64) -> Result<Output> {
    let members = graham_search(limit)?;
    let rows = members.iter().map(|n| vec![n.to_string()]).collect();
    Ok(Output::with_table(
        vec![
            ("limit", limit.to_string()),
            ("count", members.len().to_string()),
        ],
        Table {
            columns: vec!["n"],
            rows,
        },
    ))
}

fn cmd_density(p: u32, q: u32, n: u32) -> Result<Output> {
    let rep = egrs_density(p, q, n)?;
    let rows = rep
        .hit_exponents
        .iter()
        .map(|k| vec![k.to_string()])
        .collect();
    Ok(Output::with_table(
        vec![
            ("base_p", rep.base_p.to_string()),
            ("base_q", rep.base_q.to_string()),
            ("exponent_count", rep.exponent_count.to_string()),
            ("hit_count", rep.hit_exponents.len().to_string()),
            ("ratio", format_rational(&rep.ratio)),
            ("ratio_decimal", decimal_string(&rep.ratio, 6)),
        ],
        Table {
            columns: vec!["exponent"],
            rows,
        },
    ))
}

fn cmd_nonzero(bases: &str, limit: u64) -> Result<Output> {
    let bases: Vec<u32> = parse_list(bases, "base")?;
    let members = simultaneous_nonzero_search(&bases, limit)?;
    let rows = members.iter().map(|n| vec![n.to_string()]).collect();
    Ok(Output::with_table(
        vec![
            (
                "bases",
                bases
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("limit", limit.to_string()),
            ("count", members.len().to_string()),
        ],
        Table {
            columns: vec!["n"],
            rows,
        },
    ))
}

fn cmd_waring(
    power: u32,
    terms: u32,
    depth: u32,
    target_lo: Option<&str>,
    target_hi: Option<&str>,
) -> Result<Output> {
    let lo = match target_lo {
        Some(s) => parse_number(s)?,
        None => int(0),
    };
    let hi = match target_hi {
        Some(s) => parse_number(s)?,
        None => int(i64::from(terms)),
    };
    let target = ClosedInterval::new(lo, hi)?;
    let rep = waring_cover_check(power, terms, depth, &target)?;
    let table = union_rows(&rep.sumset);
    Ok(Output::with_table(
        vec![
            ("power", rep.power.to_string()),
            ("terms", rep.terms.to_string()),
            ("depth", rep.depth.to_string()),
            ("target_lo", format_rational(&rep.target.lo)),
            ("target_hi", format_rational(&rep.target.hi)),
            ("part_count", rep.part_count.to_string()),
            ("is_interval", rep.is_interval.to_string()),
            ("covers_target", rep.covers_target.to_string()),
            ("max_gap", format_rational(&rep.max_gap)),
        ],
        table,
    ))
}

fn cmd_independence(bases: &str) -> Result<Output> {
    let bases: Vec<u64> = parse_list(bases, "base")?;
    let outcome = multiplicative_independence_check(&bases)?;
    let echo = bases
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let fields = match outcome {
        IndependenceOutcome::Dependent { exponents } => vec![
            ("bases", echo),
            ("outcome", "dependent".to_string()),
            (
                "exponents",
                exponents
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ],
        IndependenceOutcome::NoSmallRelation { bound } => vec![
            ("bases", echo),
            ("outcome", "no-small-relation".to_string()),
            ("bound", bound.to_string()),
        ],
    };
    Ok(Output::fields(fields))
}

// ---- rendering --------------------------------------------------------

fn render(out: &Output, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(render_text(out)),
        Format::Csv => Ok(render_csv(out)),
        Format::Json => Ok(render_json(out)),
        Format::Svg => Err(Error::Domain(
            "svg output is only available for the region subcommand".into(),
        )),
    }
}

fn render_text(out: &Output) -> String {
    let mut s = String::new();
    for (k, v) in &out.fields {
        let _ = writeln!(s, "{k}: {v}");
    }
    if let Some(table) = &out.table {
        let _ = writeln!(s);
        let _ = writeln!(s, "{}", table.columns.join("  "));
        for row in &table.rows {
            let _ = writeln!(s, "{}", row.join("  "));
        }
    }
    s
}

/// RFC-style quoting: a field is quoted when it contains a comma, quote,
/// or line break; embedded quotes are doubled.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(cells: impl IntoIterator<Item = String>) -> String {
    cells
        .into_iter()
        .map(|c| csv_field(&c))
        .collect::<Vec<_>>()
        .join(",")
}

fn render_csv(out: &Output) -> String {
    let mut s = String::new();
    match &out.table {
        Some(table) => {
            let _ = writeln!(
                s,
                "{}",
                csv_line(table.columns.iter().map(|c| c.to_string()))
            );
            for row in &table.rows {
                let _ = writeln!(s, "{}", csv_line(row.iter().cloned()));
            }
        }
        None => {
            let _ = writeln!(s, "key,value");
            for (k, v) in &out.fields {
                let _ = writeln!(s, "{}", csv_line([k.to_string(), v.clone()]));
            }
        }
    }
    s
}

fn render_json(out: &Output) -> String {
    let mut map = serde_json::Map::new();
    for (k, v) in &out.fields {
        map.insert(k.to_string(), serde_json::Value::String(v.clone()));
    }
    if let Some(table) = &out.table {
        let rows: Vec<serde_json::Value> = table
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in table.columns.iter().zip(row) {
                    obj.insert(col.to_string(), serde_json::Value::String(cell.clone()));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        map.insert("rows".to_string(), serde_json::Value::Array(rows));
    }
    let mut s = serde_json::Value::Object(map).to_string();
    s.push('\n');
    s
}

// ---- region figure ----------------------------------------------------

const SVG_MIN_RESOLUTION: u32 = 16;
const SVG_MAX_RESOLUTION: u32 = 256;

/// Two-panel figure: the region in scale coordinates (k1, k2) with sample
/// markers classified by the exact certifier, and its preimage in the
/// orbit's log coordinates. Cell shading is decided per cell center; only
/// interior cells emit rectangles, which keeps the document small.
fn region_svg(resolution: u32, user_k1: &Rational, user_k2: &Rational) -> Result<String> {
    if !(SVG_MIN_RESOLUTION..=SVG_MAX_RESOLUTION).contains(&resolution) {
        return Err(Error::Domain(format!(
            "resolution must lie in {SVG_MIN_RESOLUTION}..={SVG_MAX_RESOLUTION}, got {resolution}"
        )));
    }
    // Panel geometry in pixels.
    const MARGIN: f64 = 40.0;
    const D_W: f64 = 360.0;
    const D_H: f64 = 450.0;
    const L_W: f64 = 360.0;
    let total_w = MARGIN + D_W + MARGIN + L_W + MARGIN;
    let total_h = MARGIN + D_H + MARGIN;
    // Scale-coordinate window.
    let (k1_min, k1_max) = (ratio(1, 2), ratio(9, 2));
    let (k2_min, k2_max) = (ratio(1, 2), ratio(11, 2));
    let k1_span = &k1_max - &k1_min;
    let k2_span = &k2_max - &k2_min;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w}\" height=\"{total_h}\" viewBox=\"0 0 {total_w} {total_h}\">"
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{total_w}\" height=\"{total_h}\" fill=\"#ffffff\"/>"
    );

    // Left panel: the region in scale coordinates.
    let _ = writeln!(s, "<g transform=\"translate({MARGIN},{MARGIN})\">");
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{D_W}\" height=\"{D_H}\" fill=\"none\" stroke=\"#333333\"/>"
    );
    let cell_w = D_W / f64::from(resolution);
    let cell_h = D_H / f64::from(resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let k1 = &k1_min + &k1_span * ratio(i64::from(2 * i + 1), i64::from(2 * resolution));
            let k2 = &k2_min + &k2_span * ratio(i64::from(2 * j + 1), i64::from(2 * resolution));
            if region_d(&k1, &k2)?.verdict {
                let x = f64::from(i) * cell_w;
                // SVG y runs downward; data k2 runs upward.
                let y = D_H - f64::from(j + 1) * cell_h;
                let _ = writeln!(
                    s,
                    "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell_w:.2}\" height=\"{cell_h:.2}\" fill=\"#7aa8d4\"/>"
                );
            }
        }
    }
    // Sample markers, classified at render time.
    let samples = [
        (int(1), ratio(5, 2)),
        (int(1), int(1)),
        (user_k1.clone(), user_k2.clone()),
    ];
    for (k1, k2) in &samples {
        let cert = region_d(k1, k2)?;
        let class = if cert.verdict { "sample inside" } else { "sample outside" };
        let fx = ((to_f64(k1) - to_f64(&k1_min)) / to_f64(&k1_span)).clamp(0.0, 1.0);
        let fy = ((to_f64(k2) - to_f64(&k2_min)) / to_f64(&k2_span)).clamp(0.0, 1.0);
        let cx = fx * D_W;
        let cy = D_H - fy * D_H;
        let fill = if cert.verdict { "#1a7a1a" } else { "#b03030" };
        let _ = writeln!(
            s,
            "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"5\" class=\"{class}\" data-k1=\"{}\" data-k2=\"{}\" fill=\"{fill}\" stroke=\"#000000\"/>",
            format_rational(k1),
            format_rational(k2)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"-10\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">region D in scale coordinates</text>",
        D_W / 2.0
    );
    let _ = writeln!(s, "</g>");

    // Right panel: preimage of the region in the orbit's log coordinates.
    // Float evaluation is fine here; the panel is a picture, and every
    // claim a test relies on comes from the exact markers on the left.
    let lx0 = MARGIN + D_W + MARGIN;
    let _ = writeln!(s, "<g transform=\"translate({lx0},{MARGIN})\">");
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{L_W}\" height=\"{L_W}\" fill=\"none\" stroke=\"#333333\"/>"
    );
    let lcell = L_W / f64::from(resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let x = (f64::from(i) + 0.5) / f64::from(resolution);
            let y = (f64::from(j) + 0.5) / f64::from(resolution);
            let k1 = 4f64.powf(1.0 - x);
            let k2 = 5f64.powf(1.0 - y);
            let inside = REGION_ROWS
                .iter()
                .all(|&(a, b, c)| f64::from(a as i32) + b as f64 * k1 + c as f64 * k2 >= -1e-9);
            if inside {
                let px = f64::from(i) * lcell;
                let py = L_W - f64::from(j + 1) * lcell;
                let _ = writeln!(
                    s,
                    "<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"{lcell:.2}\" height=\"{lcell:.2}\" fill=\"#c4a26a\"/>"
                );
            }
        }
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"-10\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">log-coordinate preimage</text>",
        L_W / 2.0
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
