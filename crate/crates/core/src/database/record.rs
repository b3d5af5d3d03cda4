//! One database row per irreducible key.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::Value;

use crate::arith::{is_irreducible, poly_from_key, PolyKey};
use crate::error::{Error, Result};
use crate::galois::{analyze, group_by_gap_id, Certainty, ClassifyOptions, GroupId};
use crate::invariants::{
    cubic_invariants, quartic_invariants, quintic_invariants_from_resolvent, quintic_resolvent_with, weighted_height,
    InvariantVector,
};
use crate::modp::{degree_pattern_mod_p, CycleType, LISTING_PRIMES};
use crate::realroots::{count_real_roots, count_real_roots_listing};

/// Precision cap for the resolvent when a record needs its invariants.
pub const RECORD_PRECISION_CAP: u32 = 4096;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordOptions {
    pub classify: ClassifyOptions,
    /// Count real roots the way the published listing does.
    pub listing_compatible: bool,
}

/// A database row.
///
/// `signature` holds the cycle type at each of 2, 3, 5, 7 in that order,
/// with an empty entry where the prime divides the discriminant or the
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub degree: usize,
    pub key: PolyKey,
    pub height: u64,
    #[serde(with = "int_array")]
    pub invariants: Vec<BigInt>,
    #[serde(with = "int_string")]
    pub delta: BigInt,
    pub weighted_height: f64,
    pub signature: Vec<Vec<usize>>,
    pub group_gap_id: [usize; 2],
    pub group_name: String,
    pub extras: BTreeMap<String, Value>,
}

impl PolyRecord {
    pub fn group(&self) -> Result<&'static GroupId> {
        group_by_gap_id(self.group_gap_id)
            .ok_or_else(|| Error::Malformed(format!("unknown group {:?}", self.group_gap_id)))
    }

    pub fn invariant_vector(&self) -> InvariantVector {
        let weights = match self.degree {
            3 => vec![4],
            4 => vec![3, 4],
            _ => vec![4, 8, 12],
        };
        InvariantVector::new(self.degree, self.invariants.clone(), weights)
    }

    pub fn extra_u64(&self, name: &str) -> Option<u64> {
        self.extras.get(name).and_then(Value::as_u64)
    }

    pub fn extra_bool(&self, name: &str) -> Option<bool> {
        self.extras.get(name).and_then(Value::as_bool)
    }

    /// Cycle types of the signature layer, without the empty entries.
    pub fn cycle_types(&self) -> Vec<CycleType> {
        self.signature
            .iter()
            .filter(|t| !t.is_empty())
            .map(|t| CycleType::new(t.clone()))
            .collect()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        Ok(serde_json::from_str(line)?)
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Builds the record of `key`, or `None` when the polynomial is reducible.
pub fn build_record(key: &PolyKey, opts: &RecordOptions) -> Result<Option<PolyRecord>> {
    let f = poly_from_key(key);
    let n = f.degree();
    if !(3..=5).contains(&n) {
        return Err(Error::OutOfRange(n));
    }
    if !is_irreducible(&f) {
        return Ok(None);
    }
    let a = analyze(&f, &opts.classify)?;
    let mut extras = BTreeMap::new();
    let roots = if opts.listing_compatible {
        count_real_roots_listing(&f)?
    } else {
        match a.real_roots {
            Some(rc) => rc,
            None => count_real_roots(&f)?,
        }
    };
    extras.insert("real_roots".into(), Value::from(roots.real));

    let invariants = match n {
        3 => {
            let inv = cubic_invariants(&f)?;
            extras.insert("two_delta".into(), Value::from(inv.values[0].to_string()));
            inv
        }
        4 => {
            let q = quartic_invariants(&f)?;
            let j = q.j_invariant()?;
            extras.insert("j".into(), Value::from(format!("{}/{}", j.numer(), j.denom())));
            let has_root = a.resolvent_roots.as_ref().is_some_and(|r| !r.is_empty());
            extras.insert("resolvent_rational_root".into(), Value::from(has_root));
            q.vector()
        }
        _ => {
            let sextic = match a.sextic.clone() {
                Some(s) => s,
                None => quintic_resolvent_with(&f, opts.classify.precision_bits, RECORD_PRECISION_CAP)?,
            };
            let (rational, _) = sextic.rational_roots();
            extras.insert("resolvent_rational_root".into(), Value::from(!rational.is_empty()));
            quintic_invariants_from_resolvent(&sextic)?
        }
    };
    if let Certainty::Sampled { primes_used, residual } = &a.verdict.certainty {
        extras.insert("certainty".into(), Value::from("sampled"));
        extras.insert("primes_used".into(), Value::from(*primes_used));
        extras.insert(
            "residual".into(),
            Value::from(residual.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        );
    }
    let signature = LISTING_PRIMES
        .iter()
        .map(|&p| degree_pattern_mod_p(&f, p).map_or_else(|_| Vec::new(), |t| t.parts().to_vec()))
        .collect();
    Ok(Some(PolyRecord {
        degree: n,
        key: key.clone(),
        height: key.height(),
        weighted_height: round6(weighted_height(&invariants)),
        invariants: invariants.values,
        delta: a.delta,
        signature,
        group_gap_id: a.verdict.group.gap_id,
        group_name: a.verdict.group.name.to_string(),
        extras,
    }))
}

/// Integer arrays written as plain JSON numbers of any size.
mod int_array {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        RawValue::from_string(text)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let raw: Box<RawValue> = Deserialize::deserialize(d)?;
        let body = raw.get().trim();
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| serde::de::Error::custom("expected an integer array"))?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        inner
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Exact integers written as decimal strings.
mod int_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let t: String = Deserialize::deserialize(d)?;
        t.parse().map_err(serde::de::Error::custom)
    }
}
