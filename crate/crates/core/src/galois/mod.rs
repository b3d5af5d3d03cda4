//! Galois groups of irreducible cubics, quartics and quintics over the
//! rationals.

mod catalog;
mod classify;

use serde::Serialize;

pub use catalog::{
    candidates_from_signature, cycle_type, enumerate_elements, group_by_gap_id, group_by_name, group_catalog,
    groups_of_degree, Catalog, GroupId,
};
pub use classify::{analyze, Analysis};

use crate::arith::IntPolynomial;
use crate::error::Result;

/// Default number of usable primes for cycle-type sampling.
pub const DEFAULT_PRIME_BUDGET: usize = 25;

/// Prime budget used by the exhaustive mode.
pub const EXHAUSTIVE_PRIME_BUDGET: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub prime_budget: usize,
    pub precision_bits: u32,
    pub exhaustive: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            prime_budget: DEFAULT_PRIME_BUDGET,
            precision_bits: crate::invariants::DEFAULT_PRECISION_BITS,
            exhaustive: false,
        }
    }
}

impl ClassifyOptions {
    pub(crate) fn effective_budget(&self) -> usize {
        if self.exhaustive {
            self.prime_budget.max(EXHAUSTIVE_PRIME_BUDGET)
        } else {
            self.prime_budget
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certainty {
    Deterministic,
    /// Decided by the absence of a cycle type over `primes_used` primes;
    /// `residual` lists the groups that sampling could not exclude.
    Sampled {
        primes_used: usize,
        residual: Vec<&'static str>,
    },
}

/// Which layer contributed to a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    Discriminant,
    Signature,
    RealRoots,
    CubicResolvent,
    SexticResolvent,
    DegenerateResolvent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub group: &'static GroupId,
    pub certainty: Certainty,
    pub evidence: Vec<Evidence>,
}

impl Verdict {
    pub fn is_deterministic(&self) -> bool {
        self.certainty == Certainty::Deterministic
    }
}

/// Galois group of an irreducible polynomial of degree 3, 4 or 5.
pub fn classify(f: &IntPolynomial, opts: &ClassifyOptions) -> Result<Verdict> {
    Ok(analyze(f, opts)?.verdict)
}
