use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::IntPolynomial;
use crate::error::{Error, Result};

/// Canonical representative of a projective point `[a_n : ... : a_0]`.
///
/// Entries are stored `a0` first. A key is primitive, has nonzero endpoints
/// and a positive leading entry, so every projective class of candidate
/// polynomials has exactly one key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct PolyKey(Vec<i64>);

impl PolyKey {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    /// Naive height, the largest absolute entry.
    pub fn height(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// Builds a key from entries that are already canonical. Used by the
    /// enumerator, which only produces canonical tuples.
    pub(crate) fn from_canonical(coeffs: Vec<i64>) -> Self {
        debug_assert!(canonicalize(&coeffs).is_ok_and(|k| k.0 == coeffs));
        Self(coeffs)
    }
}

impl TryFrom<Vec<i64>> for PolyKey {
    type Error = Error;

    fn try_from(raw: Vec<i64>) -> Result<Self> {
        let key = canonicalize(&raw)?;
        if key.0 != raw {
            return Err(Error::Malformed(format!("key {raw:?} is not canonical")));
        }
        Ok(key)
    }
}

impl From<PolyKey> for Vec<i64> {
    fn from(k: PolyKey) -> Self {
        k.0
    }
}

impl fmt::Display for PolyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Returns the primitive, sign-normalized representative of `raw`.
pub fn canonicalize(raw: &[i64]) -> Result<PolyKey> {
    if raw.len() < 2 {
        return Err(Error::KeyTooShort(raw.len()));
    }
    if raw.iter().all(|&c| c == 0) {
        return Err(Error::ZeroTuple);
    }
    let (first, last) = (raw[0], raw[raw.len() - 1]);
    if first == 0 || last == 0 {
        return Err(Error::ZeroEndpoint);
    }
    let g = raw.iter().fold(0i64, |acc, &c| acc.gcd(&c));
    let sign = if last < 0 { -1 } else { 1 };
    Ok(PolyKey(raw.iter().map(|&c| sign * (c / g)).collect()))
}

pub fn poly_from_key(key: &PolyKey) -> IntPolynomial {
    IntPolynomial::from_i64(key.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&[2, 4, 6, 2]).unwrap().coeffs(), &[1, 2, 3, 1]);
        assert_eq!(canonicalize(&[-1, 0, 0, -1]).unwrap().coeffs(), &[1, 0, 0, 1]);
        assert!(matches!(canonicalize(&[0, 1, 1, 1]), Err(Error::ZeroEndpoint)));
        assert!(matches!(canonicalize(&[0, 0, 0]), Err(Error::ZeroTuple)));
    }

    #[test]
    fn key_to_polynomial_is_positional() {
        let k = canonicalize(&[1, 3, -4, 1]).unwrap();
        assert_eq!(poly_from_key(&k).to_string(), "x^3 - 4x^2 + 3x + 1");
        let k = canonicalize(&[-1, 0, 0, 1]).unwrap();
        assert_eq!(poly_from_key(&k).to_string(), "x^3 - 1");
        let k = canonicalize(&[1, 0, -3, 1]).unwrap();
        assert_eq!(poly_from_key(&k).to_string(), "x^3 - 3x^2 + 1");
    }

    #[test]
    fn rejects_noncanonical_wire_keys() {
        assert!(PolyKey::try_from(vec![2, 4]).is_err());
        assert!(PolyKey::try_from(vec![1, -1]).is_err());
        assert!(PolyKey::try_from(vec![-1, 1]).is_ok());
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(raw in prop::collection::vec(-50i64..=50, 2..7), scale in -5i64..=5) {
            prop_assume!(scale != 0);
            let scaled: Vec<i64> = raw.iter().map(|c| c * scale).collect();
            if let Ok(k) = canonicalize(&scaled) {
                let again = canonicalize(k.coeffs()).unwrap();
                prop_assert_eq!(&again, &k);
                // projectively equivalent inputs share a key
                prop_assert_eq!(canonicalize(&raw).unwrap(), k);
            }
        }
    }
}
