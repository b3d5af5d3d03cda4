//! Named verification suites reproducing the published census figures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{canonicalize, is_irreducible, IntPolynomial, PolyKey};
use crate::database::{
    build_record, invariant_class, run_census, CensusOptions, CensusSummary, Convention, PolyRecord, RecordOptions,
};
use crate::error::{Error, Result};
use crate::invariants::{quintic_invariants_from_resolvent, quintic_resolvent_with, DEFAULT_PRECISION_BITS};
use crate::par::Execution;

/// Cyclic cubics of height at most 5 with their discriminant where the
/// published table gives one.
pub const CYCLIC_CUBICS_H5: [([i64; 4], Option<i64>); 40] = [
    ([1, 3, -4, 1], Some(49)),
    ([-1, -4, -3, 1], Some(49)),
    ([1, -1, -2, 1], Some(49)),
    ([1, -2, -1, 1], Some(49)),
    ([-1, -2, 1, 1], Some(49)),
    ([-1, -1, 2, 1], Some(49)),
    ([1, -4, 3, 1], Some(49)),
    ([-1, 3, 4, 1], Some(49)),
    ([1, 0, -3, 1], Some(81)),
    ([3, 0, -3, 1], Some(81)),
    ([-1, -3, 0, 1], Some(81)),
    ([1, -3, 0, 1], Some(81)),
    ([-3, 0, 3, 1], Some(81)),
    ([-1, 0, 3, 1], Some(81)),
    ([-1, -3, 0, 3], None),
    ([1, -3, 0, 3], None),
    ([5, 4, -5, 1], None),
    ([1, 1, -4, 1], None),
    ([5, -3, -2, 1], None),
    ([-1, -4, -1, 1], None),
    ([1, -4, 1, 1], Some(169)),
    ([-5, -3, 2, 1], Some(169)),
    ([-1, 1, 4, 1], Some(169)),
    ([-5, 4, 5, 1], Some(169)),
    ([-1, -5, -4, 5], Some(169)),
    ([1, -2, -3, 5], Some(169)),
    ([-1, -2, 3, 5], Some(169)),
    ([1, -5, 4, 5], Some(169)),
    ([1, 2, -5, 1], Some(361)),
    ([-1, -5, -2, 1], Some(361)),
    ([1, -5, 2, 1], Some(361)),
    ([-1, 2, 5, 1], Some(361)),
    ([2, -1, -5, 2], Some(961)),
    ([2, -5, -1, 2], Some(961)),
    ([-2, -5, 1, 2], Some(961)),
    ([-2, -1, 5, 2], Some(961)),
    ([3, -4, -5, 3], Some(3721)),
    ([3, -5, -4, 3], Some(3721)),
    ([-3, -5, 4, 3], Some(3721)),
    ([-3, -4, 5, 3], Some(3721)),
];

/// Discriminants of cyclic cubics of height at most 5.
pub const CYCLIC_CUBIC_DISCRIMINANTS: [i64; 6] = [49, 81, 169, 361, 961, 3721];

/// The twenty cyclic quintics of height at most 10, grouped by invariant
/// class, with the class invariants and weighted height.
pub const CYCLIC_QUINTIC_CLASSES: [(&[[i64; 6]], [&str; 3], f64); 3] = [
    (
        &[
            [-1, 1, 4, -3, -3, 1],
            [-1, 3, 3, -4, -1, 1],
            [1, 3, -3, -4, 1, 1],
            [1, 1, -4, -3, 3, 1],
            [-1, -2, 5, 2, -4, 1],
            [1, 4, 2, -5, -2, 1],
            [-1, 4, -2, -5, 2, 1],
            [1, -2, -5, 2, 4, 1],
            [1, -6, 10, -1, -6, 1],
            [1, -6, -1, 10, -6, 1],
            [-1, -6, -10, -1, 6, 1],
            [-1, -6, 1, 10, 6, 1],
        ],
        ["4235", "4026275", "-16076916075"],
        8.06,
    ),
    (
        &[
            [-1, 4, 9, -5, -9, 1],
            [-1, 9, 5, -9, -4, 1],
            [1, 9, -5, -9, 4, 1],
            [1, 4, -9, -5, 9, 1],
        ],
        ["113377", "2971552001", "-47471703427379"],
        18.34,
    ),
    (
        &[
            [-1, 0, 10, 5, -10, 1],
            [-1, 10, -5, -10, 0, 1],
            [1, 10, 5, -10, 0, 1],
            [1, 0, -10, 5, 10, 1],
        ],
        ["109375", "2392578125", "-96893310546875"],
        18.18,
    ),
];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, found: T, expected: T) {
        let passed = found == expected;
        self.check(name, passed, format!("found {found:?}, expected {expected:?}"));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            writeln!(s, "{tag} {}: {} ({})", self.suite, c.name, c.detail).unwrap();
        }
        let verdict = if self.passed() { "passed" } else { "failed" };
        writeln!(s, "suite {} {verdict}", self.suite).unwrap();
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub execution: Execution,
    pub record: RecordOptions,
}

/// Suite names with a one-line description; long suites are marked.
pub const SUITES: [(&str, &str); 8] = [
    (
        "cubic-census-h20",
        "all cubics of height <= 20: point count, irreducibles and C3 count",
    ),
    (
        "cubic-c3-h5",
        "the 40 cyclic cubics of height <= 5 and their discriminants",
    ),
    (
        "quartic-slice",
        "invariants and groups of the two published quartic rows",
    ),
    (
        "quartic-census-h10",
        "monic quartics of height <= 10 with group other than S4",
    ),
    (
        "quintic-c5-table",
        "the 20 published cyclic quintics and their invariant classes",
    ),
    ("quintic-c5-h5", "monic quintics of height <= 5: the 8 cyclic ones"),
    (
        "quintic-census-h10",
        "monic quintics of height <= 10 (long: hours on one core)",
    ),
    (
        "berwick",
        "Berwick identities on 1000 random quintics with a 512-bit cap",
    ),
];

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    match name {
        "cubic-census-h20" => cubic_census(opts),
        "cubic-c3-h5" => cubic_c3_h5(opts),
        "quartic-slice" => quartic_slice(opts),
        "quartic-census-h10" => quartic_census(opts),
        "quintic-c5-table" => quintic_table(opts),
        "quintic-c5-h5" => quintic_c5(opts, 5),
        "quintic-census-h10" => quintic_c5(opts, 10),
        "berwick" => berwick_suite(1000, 20, 512, 0xB17),
        _ => Err(Error::UnknownSuite(name.to_string())),
    }
}

fn census_collect(
    n: usize,
    h: u64,
    convention: Convention,
    opts: &VerifyOptions,
    keep: impl Fn(&PolyRecord) -> bool,
) -> Result<(CensusSummary, Vec<PolyRecord>)> {
    let copts = CensusOptions {
        record: opts.record.clone(),
        convention,
        execution: opts.execution,
        batch: 0,
    };
    let mut kept = Vec::new();
    let s = run_census(n, h, &copts, |r| {
        if keep(r) {
            kept.push(r.clone());
        }
        Ok(())
    })?;
    Ok((s, kept))
}

fn key_set<const N: usize>(rows: impl IntoIterator<Item = [i64; N]>) -> BTreeSet<PolyKey> {
    rows.into_iter()
        .map(|r| canonicalize(&r).expect("table keys are valid"))
        .collect()
}

fn cubic_census(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cubic-census-h20");
    let (s, _) = census_collect(3, 20, Convention::Projective, opts, |_| false)?;
    let e = s.enumeration.clone().expect("census counts");
    let conventions = [
        ("all points", e.family),
        ("a0 a3 != 0", e.nonzero_endpoints),
        ("nonzero discriminant", e.nonzero_discriminant),
    ];
    let matching: Vec<&str> = conventions
        .iter()
        .filter(|(_, c)| *c == 1_299_200)
        .map(|(n, _)| *n)
        .collect();
    rep.check(
        "point count convention",
        matching.len() == 1,
        format!("{conventions:?}; 1299200 matches {matching:?}"),
    );
    rep.expect_eq("points", e.family, 1_299_200);
    rep.expect_eq("irreducible records", s.records, 1_178_856);
    rep.expect_eq("C3 records", s.count("C3"), 1328);
    Ok(rep)
}

fn cubic_c3_h5(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cubic-c3-h5");
    let (_, c3) = census_collect(3, 5, Convention::Projective, opts, |r| r.group_name == "C3")?;
    rep.expect_eq("C3 records", c3.len(), 40);
    let found: BTreeSet<PolyKey> = c3.iter().map(|r| r.key.clone()).collect();
    rep.expect_eq(
        "keys equal the published table",
        found,
        key_set(CYCLIC_CUBICS_H5.iter().map(|r| r.0)),
    );
    let by_key: BTreeMap<&PolyKey, &PolyRecord> = c3.iter().map(|r| (&r.key, r)).collect();
    let mut mismatched = Vec::new();
    for (row, delta) in CYCLIC_CUBICS_H5 {
        let key = canonicalize(&row).expect("valid");
        let got = by_key.get(&key).map(|r| r.delta.clone());
        if let Some(d) = delta {
            if got != Some(BigInt::from(d)) {
                mismatched.push((row, got));
            }
        }
    }
    rep.check(
        "populated discriminants",
        mismatched.is_empty(),
        format!("mismatches {mismatched:?}"),
    );
    let allowed: BTreeSet<BigInt> = CYCLIC_CUBIC_DISCRIMINANTS.iter().map(|&d| BigInt::from(d)).collect();
    let seen: BTreeSet<BigInt> = c3.iter().map(|r| r.delta.clone()).collect();
    rep.check("discriminant set", seen.is_subset(&allowed), format!("seen {seen:?}"));
    for (row, expect) in [([1, 3, -4, 1], 49), ([1, 0, -3, 1], 81)] {
        let r = build_record(&canonicalize(&row)?, &opts.record)?.ok_or(Error::Reducible)?;
        rep.expect_eq(&format!("discriminant of {row:?}"), r.delta, BigInt::from(expect));
    }
    Ok(rep)
}

fn quartic_slice(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("quartic-slice");
    let rows: [([i64; 5], [i64; 2], i64, &str); 2] = [
        ([1, -2, -2, -2, 1], [4, -416], -6400, "-1/2700"),
        ([-1, 2, -1, -2, 1], [1, 110], -448, "-1/12096"),
    ];
    for (key, inv, delta, j) in rows {
        let r = build_record(&canonicalize(&key)?, &opts.record)?.ok_or(Error::Reducible)?;
        let tag = format!("{key:?}");
        rep.expect_eq(
            &format!("{tag} J2, J3"),
            r.invariants.clone(),
            inv.iter().map(|&v| BigInt::from(v)).collect(),
        );
        rep.expect_eq(&format!("{tag} discriminant"), r.delta.clone(), BigInt::from(delta));
        rep.expect_eq(
            &format!("{tag} j"),
            r.extras.get("j").and_then(|v| v.as_str()).unwrap_or(""),
            j,
        );
        rep.expect_eq(&format!("{tag} group"), r.group_name.as_str(), "D4");
    }
    Ok(rep)
}

fn quartic_census(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("quartic-census-h10");
    let (s, _) = census_collect(4, 10, Convention::Monic, opts, |_| false)?;
    rep.expect_eq("non-S4 total", s.non_symmetric(), 5676);
    for (g, c) in [("D4", 5162), ("A4", 184), ("V4", 222), ("C4", 108)] {
        rep.expect_eq(g, s.count(g), c);
    }
    rep.expect_eq("distinct j-invariants", s.non_symmetric_classes, 1231);
    Ok(rep)
}

fn quintic_table(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("quintic-c5-table");
    let mut records = Vec::new();
    for (rows, _, _) in CYCLIC_QUINTIC_CLASSES {
        for row in rows {
            records.push(build_record(&canonicalize(row)?, &opts.record)?.ok_or(Error::Reducible)?);
        }
    }
    let not_c5: Vec<String> = records
        .iter()
        .filter(|r| r.group_name != "C5")
        .map(|r| r.key.to_string())
        .collect();
    rep.check(
        "all 20 classify C5",
        records.len() == 20 && not_c5.is_empty(),
        format!("not C5: {not_c5:?}"),
    );
    let summary = crate::database::summarize(&records)?;
    let classes = summary
        .invariant_classes
        .get("C5")
        .cloned()
        .unwrap_or(crate::database::GroupClasses {
            distinct: 0,
            classes: Vec::new(),
        });
    let mult: Vec<u64> = classes.classes.iter().map(|c| c.count).collect();
    rep.expect_eq("class multiplicities", mult, vec![12, 4, 4]);
    let mut i = 0;
    for (rows, triple, wh) in CYCLIC_QUINTIC_CLASSES {
        let want = triple.join(",");
        let got: BTreeSet<String> = records[i..i + rows.len()].iter().map(invariant_class).collect();
        rep.expect_eq(&format!("invariants {want}"), got, BTreeSet::from([want.clone()]));
        let worst = records[i..i + rows.len()]
            .iter()
            .map(|r| (r.weighted_height - wh).abs())
            .fold(0.0, f64::max);
        rep.check(
            &format!("weighted height {wh}"),
            worst <= 0.01,
            format!("largest deviation {worst:.4} (value {:.4})", records[i].weighted_height),
        );
        i += rows.len();
    }
    Ok(rep)
}

fn quintic_c5(opts: &VerifyOptions, h: u64) -> Result<SuiteReport> {
    let name = if h == 5 { "quintic-c5-h5" } else { "quintic-census-h10" };
    let mut rep = SuiteReport::new(name);
    let (s, c5) = census_collect(5, h, Convention::Monic, opts, |r| r.group_name == "C5")?;
    let published: BTreeSet<PolyKey> = CYCLIC_QUINTIC_CLASSES
        .iter()
        .flat_map(|(rows, _, _)| rows.iter())
        .filter(|r| r.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0) <= h)
        .map(|r| canonicalize(r).expect("valid"))
        .collect();
    let found: BTreeSet<PolyKey> = c5.iter().map(|r| r.key.clone()).collect();
    rep.expect_eq("C5 records", c5.len(), published.len());
    rep.expect_eq("C5 keys equal the published rows", found, published);
    let classes: BTreeSet<String> = c5.iter().map(invariant_class).collect();
    if h == 5 {
        rep.expect_eq(
            "single invariant class",
            classes,
            BTreeSet::from([CYCLIC_QUINTIC_CLASSES[0].1.join(",")]),
        );
    } else {
        rep.expect_eq("invariant classes", classes.len(), 3);
        for (g, c) in [("F5", 480), ("D5", 900), ("A5", 1146)] {
            rep.expect_eq(g, s.count(g), c);
        }
    }
    Ok(rep)
}

/// Random irreducible quintics with coefficients in `[-bound, bound]`,
/// drawn from a seeded generator.
pub fn random_irreducible_quintics(count: usize, bound: i64, seed: u64) -> Vec<IntPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut c: Vec<i64> = (0..6).map(|_| rng.gen_range(-bound..=bound)).collect();
        if c[5] == 0 {
            c[5] = 1;
        }
        let f = IntPolynomial::from_i64(&c);
        if is_irreducible(&f) {
            out.push(f);
        }
    }
    out
}

/// Resolvent and invariants of random quintics; every d4, d5, d6 must
/// match the Berwick expressions in `(J4, J8, J12)` without exceeding
/// `cap` bits.
pub fn berwick_suite(count: usize, bound: i64, cap: u32, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("berwick");
    let mut failures = Vec::new();
    let mut max_bits = 0;
    for f in random_irreducible_quintics(count, bound, seed) {
        match quintic_resolvent_with(&f, DEFAULT_PRECISION_BITS, cap) {
            Ok(res) => {
                max_bits = max_bits.max(res.bits);
                if let Err(e) = quintic_invariants_from_resolvent(&res) {
                    failures.push(format!("{:?}: {e}", f.to_i64()));
                }
            }
            Err(e) => failures.push(format!("{:?}: {e}", f.to_i64())),
        }
    }
    rep.check(
        &format!("{count} quintics satisfy the identities"),
        failures.is_empty(),
        format!(
            "{} failures {:?}; largest precision used {max_bits} bits",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
    Ok(rep)
}
