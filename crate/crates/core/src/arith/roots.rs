//! Rational roots of integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPolynomial;
use crate::realroots::SturmChain;

/// Positive divisors of `n` by trial division, `n > 0`.
pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

const DIVISOR_LIMIT: u64 = 1 << 32;

/// Distinct rational roots of `f`, sorted ascending.
pub fn rational_roots(f: &IntPolynomial) -> Vec<BigRational> {
    if f.degree() == 0 || f.is_zero() {
        return Vec::new();
    }
    // Strip the factor x^k first so the constant term is nonzero.
    let shift = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    let mut roots = Vec::new();
    if shift > 0 {
        roots.push(BigRational::zero());
    }
    let g = IntPolynomial::new(f.coeffs()[shift..].to_vec());
    if g.degree() > 0 {
        let small = g.coeffs()[0]
            .abs()
            .to_u64()
            .zip(g.leading().abs().to_u64())
            .filter(|(a, b)| *a <= DIVISOR_LIMIT && *b <= DIVISOR_LIMIT);
        match small {
            Some((a0, an)) => roots.extend(roots_by_divisors(&g, a0, an)),
            None => roots.extend(roots_by_isolation(&g)),
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

pub fn has_rational_root(f: &IntPolynomial) -> bool {
    if f.degree() >= 1 && f.coeffs()[0].is_zero() {
        return true;
    }
    !rational_roots(f).is_empty()
}

fn roots_by_divisors(g: &IntPolynomial, a0: u64, an: u64) -> Vec<BigRational> {
    let ps = divisors(a0);
    let qs = divisors(an);
    let small = g.to_i64();
    let mut out = Vec::new();
    for &q in &qs {
        for &p in &ps {
            if p.gcd(&q) != 1 {
                continue;
            }
            for sp in [p as i128, -(p as i128)] {
                let is_root = match &small {
                    Some(c) => eval_scaled_i128(c, sp, q as i128),
                    None => None,
                }
                .unwrap_or_else(|| g.eval_homogeneous(&BigInt::from(sp), &BigInt::from(q)).is_zero());
                if is_root {
                    out.push(BigRational::new(BigInt::from(sp), BigInt::from(q)));
                }
            }
        }
    }
    out
}

/// `q^n f(p/q) == 0` in checked `i128`; `None` on overflow.
fn eval_scaled_i128(c: &[i64], p: i128, q: i128) -> Option<bool> {
    let mut acc: i128 = 0;
    let mut qpow: i128 = 1;
    for &a in c.iter().rev() {
        acc = acc.checked_mul(p)?.checked_add((a as i128).checked_mul(qpow)?)?;
        qpow = qpow.checked_mul(q)?;
    }
    Some(acc == 0)
}

/// Rational roots through the monic transform and exact integer-root
/// isolation; no factoring of the end coefficients is needed.
fn roots_by_isolation(g: &IntPolynomial) -> Vec<BigRational> {
    let lead = g.leading();
    integer_roots_monic(&g.monicized())
        .into_iter()
        .map(|r| BigRational::new(r, lead.clone()))
        .collect()
}

/// Integer roots of a monic integer polynomial, by Sturm counting on
/// half-integer endpoints and bisection down to unit intervals.
pub fn integer_roots_monic(g: &IntPolynomial) -> Vec<BigInt> {
    debug_assert!(g.leading().is_one());
    if g.degree() == 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(g);
    let bound: BigInt = g.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default() + 1;
    let two = BigInt::from(2);
    // changes at the half-integer m + 1/2
    let changes = |m: &BigInt| chain.sign_changes_at_ratio(&(m * &two + 1), &two);
    let mut out = Vec::new();
    let mut stack = vec![(-&bound - 1, bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        // roots in (lo + 1/2, hi + 1/2]
        let count = changes(&lo) - changes(&hi);
        if count == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if g.eval(&hi).is_zero() {
                out.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi).div_floor(&two);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort();
    out
}
