//! Exact integer polynomial arithmetic.

mod irreducible;
mod key;
mod poly;
pub(crate) mod resultant;
mod roots;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use irreducible::is_irreducible;
pub use key::{canonicalize, poly_from_key, PolyKey};
pub use poly::IntPolynomial;
pub use resultant::{discriminant, is_perfect_square, resultant};
pub use roots::{has_rational_root, integer_roots_monic, rational_roots};

pub(crate) use roots::divisors;

use crate::error::{Error, Result};

/// Reduced fraction of big integers with positive denominator.
pub type Rational = num_rational::BigRational;

/// Primitive integer polynomial proportional to `f(a x + b)`.
pub fn affine_substitute(f: &IntPolynomial, a: &Rational, b: &Rational) -> Result<IntPolynomial> {
    if a.is_zero() {
        return Err(Error::ZeroScale);
    }
    // Horner in Q[x] with the linear form a x + b
    let mut acc: Vec<Rational> = Vec::new();
    for c in f.coeffs().iter().rev() {
        let mut next = vec![Rational::zero(); acc.len() + 1];
        for (i, t) in acc.iter().enumerate() {
            next[i] += t * b;
            next[i + 1] += t * a;
        }
        next[0] += Rational::from_integer(c.clone());
        acc = next;
    }
    let den = acc.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = acc.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    Ok(IntPolynomial::new(ints).primitive_part())
}
