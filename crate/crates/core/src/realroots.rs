//! Sturm-sequence real-root counting and the non-real-roots forcing test.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::resultant::pseudo_rem;
use crate::arith::{discriminant, IntPolynomial};
use crate::error::{Error, Result};

/// Fraction-free Sturm chain `f, f', -rem, ...`.
///
/// Each remainder is a pseudo-remainder scaled by a positive power of
/// `|lc|` and divided by its positive content, so every entry has the same
/// sign pattern as the classical chain over the rationals.
#[derive(Clone, Debug)]
pub struct SturmChain {
    polys: Vec<IntPolynomial>,
}

fn positive_prem(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let lb = b.leading();
    let r = pseudo_rem(a.coeffs(), b.coeffs()).expect("bigint arithmetic does not overflow");
    let r = IntPolynomial::new(r);
    if lb.is_negative() {
        // lc^(d+1) may be negative; the exponent's parity decides.
        let e = a.degree() + 1 - b.degree();
        if e % 2 == 1 {
            return r.neg();
        }
    }
    r
}

impl SturmChain {
    pub fn new(f: &IntPolynomial) -> Self {
        let mut polys = vec![f.clone()];
        let d = f.derivative();
        if !d.is_zero() {
            polys.push(d.primitive_part());
        }
        while polys.len() >= 2 {
            let k = polys.len();
            let rem = positive_prem(&polys[k - 2], &polys[k - 1]);
            if rem.is_zero() {
                break;
            }
            polys.push(rem.neg().primitive_part());
        }
        Self { polys }
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Sign changes at `+inf` (`positive`) or `-inf`, read off leading
    /// coefficients and degrees.
    pub fn sign_changes_at_infinity(&self, positive: bool) -> usize {
        Self::count_changes(self.polys.iter().map(|p| {
            let s: i8 = if p.leading().is_negative() { -1 } else { 1 };
            if !positive && p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Sign changes at `p / q` with `q > 0`.
    pub fn sign_changes_at_ratio(&self, p: &BigInt, q: &BigInt) -> usize {
        Self::count_changes(self.polys.iter().map(|poly| sign(&poly.eval_homogeneous(p, q))))
    }
}

fn sign(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootCount {
    pub real: usize,
    /// Number `r` of non-real roots; always even.
    pub nonreal: usize,
}

/// Distinct real roots of a squarefree polynomial over the whole line.
pub fn count_real_roots(f: &IntPolynomial) -> Result<RootCount> {
    ensure_squarefree(f)?;
    let chain = SturmChain::new(f);
    let real = chain.sign_changes_at_infinity(false) - chain.sign_changes_at_infinity(true);
    Ok(RootCount {
        real,
        nonreal: f.degree() - real,
    })
}

/// Variant that evaluates the chain at `-10^10` and `10^10` and counts
/// changes the way the published listing does, where a zero entry counts
/// as its own sign value.
pub fn count_real_roots_listing(f: &IntPolynomial) -> Result<RootCount> {
    ensure_squarefree(f)?;
    let chain = SturmChain::new(f);
    let big = BigInt::from(10_000_000_000i64);
    let at = |x: &BigInt| {
        let values: Vec<i8> = chain.polys.iter().map(|p| sign(&p.eval(x))).collect();
        let mut kept = Vec::with_capacity(values.len());
        for (i, s) in values.iter().enumerate() {
            if i == 0 || *s != values[i - 1] {
                kept.push(*s);
            }
        }
        kept.len() as isize - 1
    };
    let real = (at(&-big.clone()) - at(&big)).max(0) as usize;
    Ok(RootCount {
        real,
        nonreal: f.degree().saturating_sub(real),
    })
}

fn ensure_squarefree(f: &IntPolynomial) -> Result<()> {
    if f.degree() >= 2 && discriminant(f)?.is_zero() {
        return Err(Error::NotSquarefree);
    }
    Ok(())
}

/// `N(r) = floor(s (s ln s + 2 ln s + 3))` for `r = 2s`, `r >= 2`.
pub fn nonreal_bound(r: usize) -> u64 {
    assert!(r >= 2 && r.is_multiple_of(2), "r must be a positive even number");
    let s = (r / 2) as f64;
    (s * (s * s.ln() + 2.0 * s.ln() + 3.0)).floor() as u64
}

/// The Galois group is `A_p` or `S_p`; parity decides which.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForcedAlternatingOrSymmetric {
    pub degree: u64,
}

/// Whether `r` non-real roots force the group of an irreducible polynomial
/// of prime degree `p` to be alternating or symmetric.
pub fn forced_alternating_or_symmetric(p: u64, r: usize) -> Option<ForcedAlternatingOrSymmetric> {
    if r == 0 || r % 2 == 1 || r as u64 > p {
        return None;
    }
    let sharp = match r {
        4 => p > 7,
        6 => p > 13,
        8 => p > 23,
        10 => p > 37,
        _ => false,
    };
    (sharp || p >= nonreal_bound(r)).then_some(ForcedAlternatingOrSymmetric { degree: p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(c: &[i64]) -> (usize, usize) {
        let rc = count_real_roots(&IntPolynomial::from_i64(c)).unwrap();
        (rc.real, rc.nonreal)
    }

    #[test]
    fn counts_examples() {
        assert_eq!(count(&[1, 0, 1]), (0, 2));
        assert_eq!(count(&[1, 0, -3, 1]), (3, 0));
        assert_eq!(count(&[-1, -1, 0, 0, 0, 1]), (1, 4));
        assert_eq!(count(&[-2, 0, 0, 0, 0, 1]), (1, 4));
        // negative leading coefficient
        assert_eq!(count(&[1, 0, -1]), (2, 0));
        assert_eq!(count(&[-1, 1, 4, -3, -3, 1]), (5, 0));
    }

    #[test]
    fn rejects_repeated_roots() {
        let f = IntPolynomial::from_i64(&[1, -2, 1]);
        assert!(matches!(count_real_roots(&f), Err(Error::NotSquarefree)));
    }

    #[test]
    fn listing_mode_agrees_for_moderate_roots() {
        for c in [
            &[1i64, 0, -3, 1][..],
            &[-1, -1, 0, 0, 0, 1],
            &[1, 0, 1],
            &[-1, 1, 4, -3, -3, 1],
        ] {
            let f = IntPolynomial::from_i64(c);
            assert_eq!(count_real_roots(&f).unwrap(), count_real_roots_listing(&f).unwrap());
        }
    }

    #[test]
    fn listing_mode_misses_roots_beyond_its_window() {
        // x^2 - 10^22 has roots at +-10^11, outside [-10^10, 10^10]
        let f = IntPolynomial::new(vec![-BigInt::from(10).pow(22), 0.into(), 1.into()]);
        assert_eq!(count_real_roots(&f).unwrap().real, 2);
        assert_eq!(count_real_roots_listing(&f).unwrap().real, 0);
    }

    #[test]
    fn forcing_examples() {
        assert!(forced_alternating_or_symmetric(11, 4).is_some());
        assert!(forced_alternating_or_symmetric(7, 4).is_none());
        assert!(forced_alternating_or_symmetric(13, 6).is_none());
        assert!(forced_alternating_or_symmetric(17, 6).is_some());
        // a transposition and a p-cycle generate S_p
        assert!(forced_alternating_or_symmetric(5, 2).is_some());
        assert!(forced_alternating_or_symmetric(5, 0).is_none());
        assert!(forced_alternating_or_symmetric(5, 4).is_none());
    }

    #[test]
    fn bound_values_and_monotonicity() {
        assert_eq!(nonreal_bound(2), 3);
        assert_eq!(nonreal_bound(4), 11);
        assert_eq!(nonreal_bound(6), 25);
        for r in (2..=20).step_by(2) {
            assert!(nonreal_bound(r + 2) > nonreal_bound(r), "N({}) <= N({})", r + 2, r);
        }
    }
}
