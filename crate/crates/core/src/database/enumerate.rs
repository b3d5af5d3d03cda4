//! Bounded-height enumeration of canonical keys.

use num_integer::Integer;
use num_traits::Zero;

use serde::{Deserialize, Serialize};

use crate::arith::{discriminant, IntPolynomial, PolyKey};

/// Upper bound `2 h^2 (2h + 1)^(n - 1)` on the number of keys: `2h`
/// choices of `a0`, `h` of the positive `a_n`, the rest free.
pub fn candidate_bound(n: usize, h: u64) -> u128 {
    2 * (h as u128).pow(2) * (2 * h as u128 + 1).pow(n as u32 - 1)
}

/// Number of points of `P^n` with naive height at most `h`: primitive
/// nonzero tuples in `[-h, h]^(n+1)` up to sign.
pub fn projective_point_count(n: usize, h: u64) -> u128 {
    let mut primitive: i128 = 0;
    for d in 1..=h {
        let mu = mobius(d);
        if mu != 0 {
            let side = 2 * (h / d) as i128 + 1;
            primitive += mu as i128 * (side.pow(n as u32 + 1) - 1);
        }
    }
    (primitive / 2) as u128
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Which polynomials a census ranges over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Every projective point with `a0 an != 0`.
    #[default]
    Projective,
    /// Only monic polynomials, `an = 1`.
    Monic,
}

impl Convention {
    /// The convention under which the published census of each degree was
    /// taken.
    pub fn published(n: usize) -> Self {
        if n == 3 {
            Convention::Projective
        } else {
            Convention::Monic
        }
    }

    fn max_leading(self, h: i64) -> i64 {
        match self {
            Convention::Projective => h,
            Convention::Monic => 1,
        }
    }
}

/// Size of the whole family before any filter: all points of `P^n` of
/// height at most `h`, or all monic tuples.
pub fn family_size(n: usize, h: u64, convention: Convention) -> u128 {
    match convention {
        Convention::Projective => projective_point_count(n, h),
        Convention::Monic => (2 * h as u128 + 1).pow(n as u32),
    }
}

/// The keys sharing their first two entries `(a0, a1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slice {
    pub a0: i64,
    pub a1: i64,
}

/// All slices for height `h`, in key order.
pub fn slices(h: u64) -> Vec<Slice> {
    let h = h as i64;
    let mut out = Vec::new();
    for a0 in (-h..=h).filter(|&a| a != 0) {
        for a1 in -h..=h {
            out.push(Slice { a0, a1 });
        }
    }
    out
}

/// Canonical tuples of one slice, before the discriminant filter:
/// `a_n` positive (or 1 for monic) and gcd 1, in lexicographic order.
pub fn slice_candidates(n: usize, h: u64, slice: Slice, convention: Convention) -> impl Iterator<Item = Vec<i64>> {
    assert!(n >= 2, "degree must be at least 2");
    let h = h as i64;
    let top = convention.max_leading(h);
    let mut cur: Vec<i64> = vec![-h; n + 1];
    cur[0] = slice.a0;
    cur[1] = slice.a1;
    cur[n] = 1;
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let item = cur.clone();
        // odometer over positions 2..=n, rightmost fastest
        let mut pos = n;
        loop {
            let hi = if pos == n { top } else { h };
            if cur[pos] < hi {
                cur[pos] += 1;
                break;
            }
            cur[pos] = if pos == n { 1 } else { -h };
            if pos == 2 {
                done = true;
                break;
            }
            pos -= 1;
        }
        if item.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1 {
            return Some(item);
        }
    })
}

/// Whether the polynomial with coefficients `coeffs` (`a0` first) has
/// nonzero discriminant.
pub fn has_nonzero_discriminant(coeffs: &[i64]) -> bool {
    discriminant(&IntPolynomial::from_i64(coeffs)).is_ok_and(|d| !d.is_zero())
}

/// Keys of one slice that pass the discriminant filter.
pub fn slice_keys(n: usize, h: u64, slice: Slice, convention: Convention) -> impl Iterator<Item = PolyKey> {
    slice_candidates(n, h, slice, convention)
        .filter(|c| has_nonzero_discriminant(c))
        .map(PolyKey::from_canonical)
}

/// Every canonical key of degree `n` and height at most `h` with
/// `a0 an != 0` and nonzero discriminant, in lexicographic order.
pub fn enumerate_keys(n: usize, h: u64) -> impl Iterator<Item = PolyKey> {
    enumerate_keys_with(n, h, Convention::Projective)
}

pub fn enumerate_keys_with(n: usize, h: u64, convention: Convention) -> impl Iterator<Item = PolyKey> {
    slices(h).into_iter().flat_map(move |s| slice_keys(n, h, s, convention))
}
