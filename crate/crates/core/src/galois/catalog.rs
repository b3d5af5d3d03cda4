//! Transitive subgroups of `S_n`.
//!
//! Groups of degree 3, 4 and 5 are stored with generators; their
//! signatures are computed by enumerating elements. Larger degrees carry
//! counts and, for the primes up to 19, the usual names.

use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modp::{CycleType, Signature};

/// A transitive subgroup of `S_n` up to conjugacy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupId {
    /// `[n, k]` in the transitive group library numbering.
    pub gap_id: [usize; 2],
    pub name: &'static str,
    pub order: u64,
    pub in_alternating: bool,
    /// Cycle types of all elements, identity included.
    pub signature: Signature,
    /// Immediate supergroups in the lattice of transitive subgroups.
    pub parents: Vec<[usize; 2]>,
    /// Generators as images of `0..n`.
    pub generators: Vec<Vec<usize>>,
}

impl GroupId {
    pub fn degree(&self) -> usize {
        self.gap_id[0]
    }

    pub fn admits(&self, t: &CycleType) -> bool {
        self.signature.contains(t)
    }

    pub fn is_symmetric(&self) -> bool {
        self.order == factorial(self.degree())
    }

    pub fn is_alternating(&self) -> bool {
        self.degree() >= 3 && self.order * 2 == factorial(self.degree())
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Catalog entry for one degree.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub degree: usize,
    /// Number of transitive subgroups of `S_n` up to conjugacy.
    pub count: u64,
    /// Full records, available for degrees 3 to 5.
    pub groups: Vec<&'static GroupId>,
    /// Names, available for degrees up to 5 and primes up to 19.
    pub names: Vec<&'static str>,
}

/// Number of transitive groups of degree `n`, `n = 1..=47`.
const COUNTS: [u64; 47] = [
    1, 1, 2, 5, 5, 16, 7, 50, 34, 45, 8, 301, 9, 63, 104, 1954, 10, 983, 8, 1117, 164, 59, 7, 25000, 211, 96, 2392,
    1854, 8, 5712, 12, 2801324, 162, 115, 407, 121279, 11, 76, 306, 315842, 10, 9491, 10, 2113, 10923, 56, 6,
];

fn prime_degree_names(n: usize) -> Option<&'static [&'static str]> {
    Some(match n {
        7 => &["C7", "D7", "F21", "F42", "L(3,2)", "A7", "S7"],
        11 => &["C11", "D11", "F55", "F110", "L(11)", "M11", "A11", "S11"],
        13 => &["C13", "D13", "F39", "F52", "F78", "F156", "L(13)", "A13", "S13"],
        17 => &[
            "C17",
            "D17",
            "F68",
            "F136",
            "F272",
            "L(17)",
            "PZL(2,16)",
            "PYL(2,16)",
            "A17",
            "S17",
        ],
        19 => &["C19", "D19", "F57", "F114", "F171", "F342", "A19", "S19"],
        _ => return None,
    })
}

struct Spec {
    k: usize,
    name: &'static str,
    generators: &'static [&'static [usize]],
    parents: &'static [usize],
}

const DEGREE3: &[Spec] = &[
    Spec {
        k: 1,
        name: "C3",
        generators: &[&[1, 2, 0]],
        parents: &[2],
    },
    Spec {
        k: 2,
        name: "S3",
        generators: &[&[1, 2, 0], &[1, 0, 2]],
        parents: &[],
    },
];

const DEGREE4: &[Spec] = &[
    Spec {
        k: 1,
        name: "C4",
        generators: &[&[1, 2, 3, 0]],
        parents: &[3],
    },
    Spec {
        k: 2,
        name: "V4",
        generators: &[&[1, 0, 3, 2], &[2, 3, 0, 1]],
        parents: &[3, 4],
    },
    Spec {
        k: 3,
        name: "D4",
        generators: &[&[1, 2, 3, 0], &[2, 1, 0, 3]],
        parents: &[5],
    },
    Spec {
        k: 4,
        name: "A4",
        generators: &[&[1, 2, 0, 3], &[1, 0, 3, 2]],
        parents: &[5],
    },
    Spec {
        k: 5,
        name: "S4",
        generators: &[&[1, 2, 3, 0], &[1, 0, 2, 3]],
        parents: &[],
    },
];

const DEGREE5: &[Spec] = &[
    Spec {
        k: 1,
        name: "C5",
        generators: &[&[1, 2, 3, 4, 0]],
        parents: &[2],
    },
    Spec {
        k: 2,
        name: "D5",
        generators: &[&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]],
        parents: &[3, 4],
    },
    Spec {
        k: 3,
        name: "F5",
        generators: &[&[1, 2, 3, 4, 0], &[0, 3, 1, 4, 2]],
        parents: &[5],
    },
    Spec {
        k: 4,
        name: "A5",
        generators: &[&[1, 2, 3, 4, 0], &[1, 2, 0, 3, 4]],
        parents: &[5],
    },
    Spec {
        k: 5,
        name: "S5",
        generators: &[&[1, 2, 3, 4, 0], &[1, 0, 2, 3, 4]],
        parents: &[],
    },
];

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // apply b, then a
    b.iter().map(|&i| a[i]).collect()
}

/// All elements of the group generated by `gens`, by breadth-first closure.
pub fn enumerate_elements(n: usize, gens: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = compose(s, &g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

pub fn cycle_type(perm: &[usize]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        parts.push(len);
    }
    CycleType::new(parts)
}

fn build(n: usize, specs: &[Spec]) -> Vec<GroupId> {
    specs
        .iter()
        .map(|s| {
            let generators: Vec<Vec<usize>> = s.generators.iter().map(|g| g.to_vec()).collect();
            let elements = enumerate_elements(n, &generators);
            let signature: Signature = elements.iter().map(|g| cycle_type(g)).collect();
            GroupId {
                gap_id: [n, s.k],
                name: s.name,
                order: elements.len() as u64,
                in_alternating: signature.iter().all(CycleType::is_even),
                signature,
                parents: s.parents.iter().map(|&k| [n, k]).collect(),
                generators,
            }
        })
        .collect()
}

fn groups(n: usize) -> &'static [GroupId] {
    static TABLES: OnceLock<[Vec<GroupId>; 3]> = OnceLock::new();
    let t = TABLES.get_or_init(|| [build(3, DEGREE3), build(4, DEGREE4), build(5, DEGREE5)]);
    match n {
        3..=5 => &t[n - 3],
        _ => &[],
    }
}

/// Groups with full data for degree `n` (3 to 5), in library order.
pub fn groups_of_degree(n: usize) -> Result<&'static [GroupId]> {
    match n {
        3..=5 => Ok(groups(n)),
        _ => Err(Error::OutOfRange(n)),
    }
}

pub fn group_by_name(n: usize, name: &str) -> Option<&'static GroupId> {
    groups(n).iter().find(|g| g.name == name)
}

pub fn group_by_gap_id(id: [usize; 2]) -> Option<&'static GroupId> {
    groups(id[0]).iter().find(|g| g.gap_id == id)
}

/// Catalog data for degree `n`, `1 <= n <= 47`.
pub fn group_catalog(n: usize) -> Result<Catalog> {
    if n == 0 || n > COUNTS.len() {
        return Err(Error::OutOfRange(n));
    }
    let groups: Vec<&'static GroupId> = groups(n).iter().collect();
    let names = if !groups.is_empty() {
        groups.iter().map(|g| g.name).collect()
    } else {
        prime_degree_names(n).map(|s| s.to_vec()).unwrap_or_default()
    };
    Ok(Catalog {
        degree: n,
        count: COUNTS[n - 1],
        groups,
        names,
    })
}

/// Groups whose signature contains every observed cycle type.
pub fn candidates_from_signature(n: usize, observed: &Signature) -> Result<Vec<&'static GroupId>> {
    let all = groups_of_degree(n)?;
    let out: Vec<&'static GroupId> = all.iter().filter(|g| observed.iter().all(|t| g.admits(t))).collect();
    if out.is_empty() {
        return Err(Error::Inconsistent { degree: n });
    }
    Ok(out)
}
