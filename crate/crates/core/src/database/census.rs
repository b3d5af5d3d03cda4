//! Census pipeline: enumerate, build records in parallel batches, write in
//! key order and accumulate statistics.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::enumerate::{family_size, has_nonzero_discriminant, slice_candidates, slices, Convention, Slice};
use super::record::{build_record, PolyRecord, RecordOptions};
use crate::arith::PolyKey;
use crate::error::{Error, Result};
use crate::galois::group_by_gap_id;
use crate::par::Execution;

/// Slices handed to the executor per batch.
pub const DEFAULT_BATCH: usize = 32;

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    pub record: RecordOptions,
    pub convention: Convention,
    pub execution: Execution,
    /// Slices per batch; 0 means [`DEFAULT_BATCH`].
    pub batch: usize,
}

/// Sizes of the key space under the three counting conventions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCounts {
    pub convention: Convention,
    /// Size of the family: every point of projective space of naive
    /// height at most `h`, or every monic tuple.
    pub family: u64,
    /// Canonical tuples with `a0 an != 0`.
    pub nonzero_endpoints: u64,
    /// Those with nonzero discriminant, the enumerated keys.
    pub nonzero_discriminant: u64,
    pub reducible: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantClass {
    pub invariant: String,
    pub count: u64,
    pub first_key: PolyKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupClasses {
    pub distinct: u64,
    /// Largest classes first.
    pub classes: Vec<InvariantClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub ratio: f64,
    pub key: PolyKey,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub degree: usize,
    pub max_height: u64,
    pub enumeration: Option<EnumerationCounts>,
    pub records: u64,
    pub group_counts: BTreeMap<String, u64>,
    /// Records of height at most `h`, per group, for each height present.
    pub cumulative_by_height: BTreeMap<u64, BTreeMap<String, u64>>,
    /// Invariant classes per group. Symmetric groups are omitted by the
    /// streaming census, where they would hold nearly every record.
    pub invariant_classes: BTreeMap<String, GroupClasses>,
    /// Distinct classes over all groups other than the symmetric group; a
    /// class can occur under several groups.
    pub non_symmetric_classes: u64,
    pub ratio_min: Option<Extremum>,
    pub ratio_max: Option<Extremum>,
}

impl CensusSummary {
    pub fn count(&self, group: &str) -> u64 {
        self.group_counts.get(group).copied().unwrap_or(0)
    }

    pub fn distinct_classes(&self, group: &str) -> u64 {
        self.invariant_classes.get(group).map_or(0, |c| c.distinct)
    }

    /// Records whose group is not the full symmetric group.
    pub fn non_symmetric(&self) -> u64 {
        let sym = format!("S{}", self.degree);
        self.group_counts
            .iter()
            .filter(|(g, _)| **g != sym)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Class label of a record: `2 Delta` for cubics, `j` for quartics and the
/// triple `(J4, J8, J12)` for quintics.
pub fn invariant_class(r: &PolyRecord) -> String {
    match r.degree {
        4 => {
            let (j2, j3) = (&r.invariants[0], &r.invariants[1]);
            let den = BigInt::from(4) * j2.pow(3) - j3.pow(2);
            let j = BigRational::new(j2.pow(3), den);
            format!("{}/{}", j.numer(), j.denom())
        }
        _ => r.invariants.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
    }
}

/// Incremental summary; push records in key order.
#[derive(Clone, Debug)]
pub struct SummaryBuilder {
    degree: Option<usize>,
    track_symmetric: bool,
    records: u64,
    per_height: BTreeMap<u64, BTreeMap<String, u64>>,
    classes: BTreeMap<String, BTreeMap<String, (u64, PolyKey)>>,
    ratio_min: Option<Extremum>,
    ratio_max: Option<Extremum>,
}

impl SummaryBuilder {
    pub fn new(track_symmetric: bool) -> Self {
        Self {
            degree: None,
            track_symmetric,
            records: 0,
            per_height: BTreeMap::new(),
            classes: BTreeMap::new(),
            ratio_min: None,
            ratio_max: None,
        }
    }

    pub fn push(&mut self, r: &PolyRecord) -> Result<()> {
        match self.degree {
            None => self.degree = Some(r.degree),
            Some(d) if d != r.degree => return Err(Error::MixedDegrees),
            _ => {}
        }
        self.records += 1;
        *self
            .per_height
            .entry(r.height)
            .or_default()
            .entry(r.group_name.clone())
            .or_default() += 1;
        let symmetric = group_by_gap_id(r.group_gap_id).is_some_and(|g| g.is_symmetric());
        if self.track_symmetric || !symmetric {
            let slot = self
                .classes
                .entry(r.group_name.clone())
                .or_default()
                .entry(invariant_class(r))
                .or_insert_with(|| (0, r.key.clone()));
            slot.0 += 1;
        }
        let ratio = r.weighted_height / r.height as f64;
        // strict comparisons keep the earliest witness on ties
        if self.ratio_min.as_ref().is_none_or(|m| ratio < m.ratio) {
            self.ratio_min = Some(Extremum {
                ratio,
                key: r.key.clone(),
            });
        }
        if self.ratio_max.as_ref().is_none_or(|m| ratio > m.ratio) {
            self.ratio_max = Some(Extremum {
                ratio,
                key: r.key.clone(),
            });
        }
        Ok(())
    }

    pub fn finish(self, enumeration: Option<EnumerationCounts>) -> CensusSummary {
        let mut group_counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut cumulative_by_height = BTreeMap::new();
        for (&h, counts) in &self.per_height {
            for (g, c) in counts {
                *group_counts.entry(g.clone()).or_default() += c;
            }
            cumulative_by_height.insert(h, group_counts.clone());
        }
        let sym = format!("S{}", self.degree.unwrap_or(0));
        let non_symmetric_classes = self
            .classes
            .iter()
            .filter(|(g, _)| **g != sym)
            .flat_map(|(_, m)| m.keys())
            .collect::<std::collections::BTreeSet<_>>()
            .len() as u64;
        let invariant_classes = self
            .classes
            .into_iter()
            .map(|(g, m)| {
                let mut classes: Vec<InvariantClass> = m
                    .into_iter()
                    .map(|(invariant, (count, first_key))| InvariantClass {
                        invariant,
                        count,
                        first_key,
                    })
                    .collect();
                classes.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.first_key.cmp(&b.first_key)));
                let distinct = classes.len() as u64;
                (g, GroupClasses { distinct, classes })
            })
            .collect();
        CensusSummary {
            degree: self.degree.unwrap_or(0),
            max_height: self.per_height.keys().next_back().copied().unwrap_or(0),
            enumeration,
            records: self.records,
            group_counts,
            cumulative_by_height,
            invariant_classes,
            non_symmetric_classes,
            ratio_min: self.ratio_min,
            ratio_max: self.ratio_max,
        }
    }
}

/// Summary of a record set of one degree, with classes for every group.
pub fn summarize<'a, I: IntoIterator<Item = &'a PolyRecord>>(records: I) -> Result<CensusSummary> {
    let mut b = SummaryBuilder::new(true);
    for r in records {
        b.push(r)?;
    }
    Ok(b.finish(None))
}

struct SliceOutput {
    nonzero_endpoints: u64,
    nonzero_discriminant: u64,
    reducible: u64,
    records: Vec<PolyRecord>,
}

fn process_slice(n: usize, h: u64, s: Slice, convention: Convention, opts: &RecordOptions) -> Result<SliceOutput> {
    let mut out = SliceOutput {
        nonzero_endpoints: 0,
        nonzero_discriminant: 0,
        reducible: 0,
        records: Vec::new(),
    };
    for c in slice_candidates(n, h, s, convention) {
        out.nonzero_endpoints += 1;
        if !has_nonzero_discriminant(&c) {
            continue;
        }
        out.nonzero_discriminant += 1;
        match build_record(&PolyKey::from_canonical(c), opts)? {
            Some(r) => out.records.push(r),
            None => out.reducible += 1,
        }
    }
    Ok(out)
}

/// Runs the census of degree `n` up to height `h`, handing each record to
/// `sink` in key order.
pub fn run_census<F>(n: usize, h: u64, opts: &CensusOptions, mut sink: F) -> Result<CensusSummary>
where
    F: FnMut(&PolyRecord) -> Result<()>,
{
    if !(3..=5).contains(&n) {
        return Err(Error::OutOfRange(n));
    }
    if h == 0 {
        return Err(Error::Malformed("height must be at least 1".into()));
    }
    let mut counts = EnumerationCounts {
        convention: opts.convention,
        family: family_size(n, h, opts.convention) as u64,
        nonzero_endpoints: 0,
        nonzero_discriminant: 0,
        reducible: 0,
    };
    let mut builder = SummaryBuilder::new(false);
    let batch = if opts.batch == 0 { DEFAULT_BATCH } else { opts.batch };
    let all = slices(h);
    for chunk in all.chunks(batch) {
        let outs = opts.execution.map(chunk.to_vec(), |s| {
            process_slice(n, h, s, opts.convention, &opts.record)
        });
        for out in outs {
            let out = out?;
            counts.nonzero_endpoints += out.nonzero_endpoints;
            counts.nonzero_discriminant += out.nonzero_discriminant;
            counts.reducible += out.reducible;
            for r in &out.records {
                builder.push(r)?;
                sink(r)?;
            }
        }
    }
    Ok(builder.finish(Some(counts)))
}

/// Census without persistence.
pub fn census(n: usize, h: u64, opts: &CensusOptions) -> Result<CensusSummary> {
    run_census(n, h, opts, |_| Ok(()))
}

/// Path of the summary written next to a record file.
pub fn summary_path(records: &Path) -> PathBuf {
    records.with_extension("summary.json")
}

/// Streams the records of the census to `path` as JSON lines and writes
/// the summary next to it.
pub fn generate_database(n: usize, h: u64, path: &Path, opts: &CensusOptions) -> Result<CensusSummary> {
    let mut w = BufWriter::new(File::create(path)?);
    let summary = run_census(n, h, opts, |r| {
        w.write_all(r.to_json_line().as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    })?;
    w.flush()?;
    write_summary(&summary, &summary_path(path))?;
    Ok(summary)
}

pub fn write_summary(summary: &CensusSummary, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, summary)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Iterates the records of a JSON-lines file, skipping blank lines.
pub fn read_records(path: &Path) -> Result<impl Iterator<Item = Result<PolyRecord>>> {
    let reader = BufReader::new(File::open(path)?);
    Ok(reader.lines().filter_map(|line| match line {
        Ok(l) if l.trim().is_empty() => None,
        Ok(l) => Some(PolyRecord::from_json_line(&l)),
        Err(e) => Some(Err(e.into())),
    }))
}

pub fn load_records(path: &Path) -> Result<Vec<PolyRecord>> {
    read_records(path)?.collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::canonicalize;
    use crate::database::enumerate_keys;

    fn record(c: &[i64]) -> PolyRecord {
        build_record(&canonicalize(c).unwrap(), &RecordOptions::default())
            .unwrap()
            .unwrap()
    }

    #[test]
    fn small_census_matches_direct_build() {
        let opts = CensusOptions::default();
        let mut streamed = Vec::new();
        let s = run_census(3, 3, &opts, |r| {
            streamed.push(r.clone());
            Ok(())
        })
        .unwrap();
        let direct: Vec<PolyRecord> = enumerate_keys(3, 3)
            .filter_map(|k| build_record(&k, &RecordOptions::default()).unwrap())
            .collect();
        assert_eq!(streamed, direct);
        assert_eq!(s.records as usize, direct.len());
        assert_eq!(s.group_counts.values().sum::<u64>(), s.records);
        let e = s.enumeration.unwrap();
        assert_eq!(e.nonzero_discriminant, e.reducible + s.records);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let seq = CensusOptions {
            execution: Execution::Sequential,
            batch: 3,
            ..Default::default()
        };
        let par = CensusOptions {
            execution: Execution::Parallel { workers: 2 },
            batch: 5,
            ..Default::default()
        };
        assert_eq!(census(4, 2, &seq).unwrap(), census(4, 2, &par).unwrap());
    }

    #[test]
    fn cumulative_counts_are_monotone() {
        let s = census(3, 4, &CensusOptions::default()).unwrap();
        let mut prev: BTreeMap<String, u64> = BTreeMap::new();
        for counts in s.cumulative_by_height.values() {
            for (g, c) in &prev {
                assert!(counts.get(g).copied().unwrap_or(0) >= *c);
            }
            prev = counts.clone();
        }
        assert_eq!(prev, s.group_counts);
    }

    #[test]
    fn mixed_degrees_rejected() {
        let a = record(&[1, 3, -4, 1]);
        let b = record(&[1, 1, 1, 1, 1]);
        assert!(matches!(summarize([&a, &b]), Err(Error::MixedDegrees)));
    }

    #[test]
    fn single_record_has_one_class() {
        let a = record(&[-1, -1, 0, 0, 0, 1]);
        let s = summarize([&a]).unwrap();
        assert_eq!(s.invariant_classes.values().map(|c| c.distinct).sum::<u64>(), 1);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cubic.jsonl");
        let s = generate_database(3, 2, &path, &CensusOptions::default()).unwrap();
        let back = load_records(&path).unwrap();
        assert_eq!(back.len() as u64, s.records);
        let mut again = summarize(&back).unwrap();
        again.enumeration = s.enumeration.clone();
        assert_eq!(again.group_counts, s.group_counts);
        let text = std::fs::read_to_string(summary_path(&path)).unwrap();
        let parsed: CensusSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, s);
    }
}
