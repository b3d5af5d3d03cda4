//! Bounded-height polynomial databases and their census statistics.

mod census;
mod enumerate;
mod record;

pub use census::{
    census, generate_database, invariant_class, load_records, read_records, run_census, summarize, summary_path,
    write_summary, CensusOptions, CensusSummary, EnumerationCounts, Extremum, GroupClasses, InvariantClass,
    SummaryBuilder, DEFAULT_BATCH,
};
pub use enumerate::{
    candidate_bound, enumerate_keys, enumerate_keys_with, family_size, has_nonzero_discriminant,
    projective_point_count, slice_candidates, slice_keys, slices, Convention, Slice,
};
pub use record::{build_record, PolyRecord, RecordOptions, RECORD_PRECISION_CAP};
