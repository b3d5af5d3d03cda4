//! Polynomials over prime fields, distinct-degree factorization and
//! Dedekind cycle-type sampling.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::IntPolynomial;
use crate::error::{Error, Result};

/// Largest prime the sampler will try before giving up.
pub const PRIME_CEILING: u64 = 1 << 16;

/// Primes used by the published feature layer.
pub const LISTING_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Factor-degree multiset, sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&d| d > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Parity of a permutation with this cycle type.
    pub fn is_even(&self) -> bool {
        self.0.iter().map(|&d| d - 1).sum::<usize>() % 2 == 0
    }

    /// Degrees of all unions of factors, i.e. the possible degrees of a
    /// rational factor compatible with this pattern.
    pub fn subset_sums(&self) -> u64 {
        let mut mask = 1u64;
        for &d in &self.0 {
            mask |= mask << d;
        }
        mask
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Set of cycle types, observed or admitted by a group.
pub type Signature = BTreeSet<CycleType>;

/// Dense polynomial over `Z/pZ`, `p < 2^16`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl ModPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs, p }
    }

    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        let pb = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect();
        Self::new(coeffs, p)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn x(p: u64) -> Self {
        Self::new(vec![0, 1], p)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p);
                Self::new(self.coeffs.iter().map(|c| c * inv % self.p).collect(), self.p)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * (i as u64 % p) % p)
                .collect(),
            p,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            (0..n)
                .map(|i| (get(&self.coeffs, i) + p - get(&o.coeffs, i)) % p)
                .collect(),
            p,
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(Vec::new(), self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::new(out, p)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::new(Vec::new(), p), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let inv = inv_mod(*d.coeffs.last().unwrap(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = r[k + dd] * inv % p;
            if t == 0 {
                continue;
            }
            q[k] = t;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - t * c % p) % p;
            }
        }
        (Self::new(q, p), Self::new(r, p))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::new(vec![1], self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

fn pow_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_u64(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// All primes below [`PRIME_CEILING`], ascending.
pub fn primes() -> impl Iterator<Item = u64> {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE
        .get_or_init(|| (2..PRIME_CEILING).filter(|&n| is_prime(n)).collect())
        .iter()
        .copied()
}

/// Distinct-degree factorization of a monic squarefree polynomial: the
/// factor degrees as a cycle type.
pub fn distinct_degree_pattern(f: &ModPoly) -> CycleType {
    let p = f.modulus();
    let mut f = f.monic();
    let mut parts = Vec::new();
    let x = ModPoly::x(p);
    let mut h = x.clone();
    let mut d = 0;
    while f.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &f);
        let g = h.sub(&x).gcd(&f);
        if g.degree() > 0 {
            parts.extend(std::iter::repeat_n(d, g.degree() / d));
            f = f.div_rem(&g).0;
            h = h.rem(&f);
        }
    }
    if f.degree() > 0 {
        parts.push(f.degree());
    }
    CycleType::new(parts)
}

/// Degree pattern of `f mod p`.
///
/// Fails with `BadPrime` when `p` divides the leading coefficient or the
/// reduction is not squarefree, which for `p` coprime to `a_n` happens
/// exactly when `p` divides the discriminant.
pub fn degree_pattern_mod_p(f: &IntPolynomial, p: u64) -> Result<CycleType> {
    if p >= PRIME_CEILING || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let fp = ModPoly::from_int(f, p);
    if fp.is_zero() || fp.degree() != f.degree() {
        return Err(Error::BadPrime(p));
    }
    if fp.gcd(&fp.derivative()).degree() > 0 {
        return Err(Error::BadPrime(p));
    }
    Ok(distinct_degree_pattern(&fp))
}

/// Patterns at the first `budget` usable primes, in prime order.
pub fn sample_patterns(f: &IntPolynomial, budget: usize) -> Result<Vec<(u64, CycleType)>> {
    let mut out = Vec::with_capacity(budget);
    if budget == 0 {
        return Ok(out);
    }
    for p in primes() {
        if let Ok(t) = degree_pattern_mod_p(f, p) {
            out.push((p, t));
            if out.len() == budget {
                return Ok(out);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoUsablePrimes(PRIME_CEILING));
    }
    Ok(out)
}

/// Set of cycle types seen over the first `prime_budget` usable primes.
pub fn dedekind_signature(f: &IntPolynomial, prime_budget: usize) -> Result<Signature> {
    Ok(sample_patterns(f, prime_budget)?.into_iter().map(|(_, t)| t).collect())
}

/// Distinct irreducible factor degrees of `f mod p` with multiplicities
/// ignored; works on non-squarefree reductions.
pub fn distinct_factor_degrees(f: &ModPoly) -> Vec<usize> {
    let p = f.modulus();
    let f = f.monic();
    let n = f.degree();
    let x = ModPoly::x(p);
    let mut count = vec![0usize; n + 1];
    let mut h = x.clone();
    for d in 1..=n {
        h = h.pow_mod(p, &f);
        let g = h.sub(&x).gcd(&f);
        let lower: usize = (1..d).filter(|e| d % e == 0).map(|e| e * count[e]).sum();
        count[d] = (g.degree() - lower) / d;
    }
    (1..=n).filter(|&d| count[d] > 0).collect()
}

/// The feature-layer signature exactly as the published listing computes
/// it: seeded with the degree, primes 2, 3, 5, 7 regardless of ramification,
/// and each new factor degree above 1 appended in order of discovery.
pub fn listing_signature(f: &IntPolynomial) -> Vec<usize> {
    let mut sig = vec![f.degree()];
    for p in LISTING_PRIMES {
        let fp = ModPoly::from_int(f, p);
        if fp.degree() == 0 {
            continue;
        }
        for d in distinct_factor_degrees(&fp) {
            if d > 1 && !sig.contains(&d) {
                sig.push(d);
            }
        }
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reduces_to_zero(c: &BigInt, p: u64) -> bool {
        num_traits::Zero::is_zero(&(c % BigInt::from(p)))
    }

    fn pat(c: &[i64], p: u64) -> Result<Vec<usize>> {
        degree_pattern_mod_p(&IntPolynomial::from_i64(c), p).map(|t| t.parts().to_vec())
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(pat(&[1, 0, 1], 5).unwrap(), vec![1, 1]);
        assert_eq!(pat(&[1, 0, 1], 3).unwrap(), vec![2]);
        assert!(matches!(pat(&[1, 0, 1], 2), Err(Error::BadPrime(2))));
        assert_eq!(pat(&[-1, -1, 0, 0, 0, 1], 2).unwrap(), vec![3, 2]);
        assert_eq!(pat(&[1, 1, 1, 1, 1], 2).unwrap(), vec![4]);
        assert_eq!(pat(&[1, 3, -4, 1], 2).unwrap(), vec![3]);
        // leading coefficient divisible by p
        assert!(matches!(pat(&[1, 1, 2], 2), Err(Error::BadPrime(2))));
    }

    #[test]
    fn signature_examples() {
        let f = IntPolynomial::from_i64(&[-1, -1, 0, 0, 0, 1]);
        let sig = dedekind_signature(&f, 25).unwrap();
        assert!(sig.contains(&CycleType::new(vec![3, 2])));
        let c = IntPolynomial::from_i64(&[1, 3, -4, 1]);
        let sig = dedekind_signature(&c, 25).unwrap();
        assert!(sig.iter().all(|t| t.parts() == [3] || t.parts() == [1, 1, 1]));
    }

    #[test]
    fn listing_signature_matches_published_layer() {
        // x^5 - x - 1: mod 2 gives degrees 2 and 3
        let f = IntPolynomial::from_i64(&[-1, -1, 0, 0, 0, 1]);
        let s = listing_signature(&f);
        assert_eq!(s[0], 5);
        assert!(s.contains(&2) && s.contains(&3));
        // x^5 - 2 is (x - 0)^5 mod 2 and x^5 mod 5, still reported
        let g = IntPolynomial::from_i64(&[-2, 0, 0, 0, 0, 1]);
        assert_eq!(listing_signature(&g)[0], 5);
    }

    /// Trial factorization over F_p by enumerating monic polynomials.
    fn brute_pattern(c: &[i64], p: u64) -> Option<Vec<usize>> {
        let f = ModPoly::from_int(&IntPolynomial::from_i64(c), p);
        if f.degree() + 1 != c.len() || f.gcd(&f.derivative()).degree() > 0 {
            return None;
        }
        let mut rest = f.monic();
        let mut parts = Vec::new();
        let mut d = 1;
        while rest.degree() > 0 {
            let mut found = false;
            'search: for idx in 0..p.pow(d as u32) {
                let mut coeffs = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    coeffs.push(k % p);
                    k /= p;
                }
                coeffs.push(1);
                let g = ModPoly::new(coeffs, p);
                let (q, r) = rest.div_rem(&g);
                if r.is_zero() {
                    parts.push(d);
                    rest = q;
                    found = true;
                    break 'search;
                }
            }
            if !found {
                d += 1;
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(parts)
    }

    proptest! {
        #[test]
        fn ddf_matches_trial_factorization(
            c in prop::collection::vec(-20i64..=20, 2..6),
            lead in 1i64..=5,
            pi in 0usize..4,
        ) {
            let p = LISTING_PRIMES[pi];
            let mut c = c;
            c.push(lead);
            let f = IntPolynomial::from_i64(&c);
            match (degree_pattern_mod_p(&f, p), brute_pattern(&c, p)) {
                (Ok(t), Some(b)) => {
                    prop_assert_eq!(t.degree(), f.degree());
                    prop_assert_eq!(t.parts().to_vec(), b);
                }
                (Err(Error::BadPrime(_)), None) => {}
                (got, want) => prop_assert!(false, "{:?} vs {:?}", got, want),
            }
        }

        #[test]
        fn skipped_primes_divide_disc_or_lead(c in prop::collection::vec(-20i64..=20, 3..7)) {
            let f = IntPolynomial::from_i64(&c);
            prop_assume!(f.degree() >= 2);
            let disc = crate::arith::discriminant(&f).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13] {
                if degree_pattern_mod_p(&f, p).is_err() {
                    prop_assert!(reduces_to_zero(&disc, p) || reduces_to_zero(&f.leading(), p));
                }
            }
        }
    }
}
