//! Subresultant resultants and discriminants.
//!
//! The remainder sequence is written once over [`Coeff`] so that the hot
//! census path can run it in checked `i128` arithmetic and fall back to
//! `BigInt` when an intermediate value overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

pub(crate) trait Coeff: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Exact division; `None` on overflow. Callers only divide when the
    /// quotient is known to be integral.
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;

    fn pow(&self, mut e: u32) -> Option<Self> {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Some(acc)
    }
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
}

fn trim<T: Coeff>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn deg<T>(v: &[T]) -> usize {
    v.len().saturating_sub(1)
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn pseudo_rem<T: Coeff>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = deg(b);
    let lb = b.last()?.clone();
    let mut e = (deg(a) + 1).saturating_sub(db) as u32;
    while !r.is_empty() && deg(&r) >= db {
        let s = r.last()?.clone();
        let shift = deg(&r) - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb)?;
        }
        for (j, bc) in b.iter().enumerate() {
            let t = s.mul(bc)?;
            r[j + shift] = r[j + shift].sub(&t)?;
        }
        trim(&mut r);
        e = e.saturating_sub(1);
    }
    let scale = lb.pow(e)?;
    for c in r.iter_mut() {
        *c = c.mul(&scale)?;
    }
    Some(r)
}

fn content<T: Coeff>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, c| acc.gcd(c))
}

/// Resultant of `a` and `b` by the subresultant remainder sequence.
pub(crate) fn resultant_generic<T: Coeff>(a: &[T], b: &[T]) -> Option<T> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return Some(T::zero());
    }
    let ca = content(&a);
    let cb = content(&b);
    let t = ca.pow(deg(&b) as u32)?.mul(&cb.pow(deg(&a) as u32)?)?;
    for c in a.iter_mut() {
        *c = c.div(&ca)?;
    }
    for c in b.iter_mut() {
        *c = c.div(&cb)?;
    }
    let mut s = T::one();
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = s.neg()?;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = T::one();
    let mut h = T::one();
    while deg(&b) > 0 {
        let delta = (deg(&a) - deg(&b)) as u32;
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = s.neg()?;
        }
        let r = pseudo_rem(&a, &b)?;
        a = b;
        let divisor = g.mul(&h.pow(delta)?)?;
        b = r.iter().map(|c| c.div(&divisor)).collect::<Option<Vec<_>>>()?;
        trim(&mut b);
        if b.is_empty() {
            return Some(T::zero());
        }
        g = a.last()?.clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta)?.div(&h.pow(delta - 1)?)?,
        };
    }
    let da = deg(&a) as u32;
    let lb = b.last()?.clone();
    let hh = if da == 0 {
        T::one()
    } else {
        lb.pow(da)?.div(&h.pow(da - 1)?)?
    };
    s.mul(&t)?.mul(&hh)
}

pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    if let (Some(x), Some(y)) = (a.to_i128(), b.to_i128()) {
        if let Some(r) = resultant_generic(&x, &y) {
            return BigInt::from(r);
        }
    }
    resultant_generic(a.coeffs(), b.coeffs()).expect("bigint arithmetic does not overflow")
}

fn discriminant_generic<T: Coeff>(f: &[T]) -> Option<T> {
    let n = deg(f);
    let df: Vec<T> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let mut k = T::zero();
            for _ in 0..i {
                k = k.add(&T::one())?;
            }
            c.mul(&k)
        })
        .collect::<Option<_>>()?;
    let res = resultant_generic(f, &df)?;
    let mut d = res.div(f.last()?)?;
    if (n * (n - 1) / 2) % 2 == 1 {
        d = d.neg()?;
    }
    Some(d)
}

/// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / a_n`.
pub fn discriminant(f: &IntPolynomial) -> Result<BigInt> {
    if f.degree() < 2 {
        return Err(Error::DegreeTooSmall(f.degree()));
    }
    if let Some(c) = f.to_i128() {
        if let Some(d) = discriminant_generic(&c) {
            return Ok(BigInt::from(d));
        }
    }
    Ok(discriminant_generic(f.coeffs()).expect("bigint arithmetic does not overflow"))
}

/// `true` when `n` is the square of an integer (so never for negatives).
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc(c: &[i64]) -> BigInt {
        discriminant(&IntPolynomial::from_i64(c)).unwrap()
    }

    /// Determinant of the Sylvester matrix by fraction-free elimination,
    /// an independent route to the resultant.
    fn sylvester_resultant(a: &[i64], b: &[i64]) -> BigInt {
        let (m, n) = (a.len() - 1, b.len() - 1);
        let size = m + n;
        let mut mat = vec![vec![BigInt::from(0); size]; size];
        for i in 0..n {
            for (j, c) in a.iter().rev().enumerate() {
                mat[i][i + j] = BigInt::from(*c);
            }
        }
        for i in 0..m {
            for (j, c) in b.iter().rev().enumerate() {
                mat[n + i][i + j] = BigInt::from(*c);
            }
        }
        let mut sign = BigInt::from(1);
        let mut prev = BigInt::from(1);
        for k in 0..size {
            if Zero::is_zero(&mat[k][k]) {
                match (k + 1..size).find(|&r| !Zero::is_zero(&mat[r][k])) {
                    Some(r) => {
                        mat.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::from(0),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    mat[i][j] = v / &prev;
                }
            }
            prev = mat[k][k].clone();
        }
        sign * prev
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(disc(&[1, 1, 1]), BigInt::from(-3));
        assert_eq!(disc(&[1, 3, -4, 1]), BigInt::from(49));
        assert_eq!(disc(&[1, -2, -2, -2, 1]), BigInt::from(-6400));
        assert_eq!(disc(&[1, 0, -3, 1]), BigInt::from(81));
        assert_eq!(disc(&[-1, -1, 0, 0, 0, 1]), BigInt::from(2869));
        assert_eq!(disc(&[-2, 0, 0, 0, 0, 1]), BigInt::from(50000));
        assert!(matches!(
            discriminant(&IntPolynomial::from_i64(&[1, 1])),
            Err(Error::DegreeTooSmall(1))
        ));
    }

    #[test]
    fn repeated_root_gives_zero() {
        // (x - 1)^2 (x + 2)
        assert_eq!(disc(&[2, -3, 0, 1]), BigInt::from(0));
    }

    #[test]
    fn bigint_fallback_matches_i128() {
        let big: Vec<i64> = vec![i64::MAX / 3, -7, 11, i64::MAX / 5, 3, 1];
        let f = IntPolynomial::from_i64(&big);
        let via_big = discriminant_generic(f.coeffs()).unwrap();
        assert_eq!(discriminant(&f).unwrap(), via_big);
    }

    #[test]
    fn perfect_squares() {
        assert!(is_perfect_square(&BigInt::from(49)));
        assert!(is_perfect_square(&BigInt::from(0)));
        assert!(!is_perfect_square(&BigInt::from(-49)));
        assert!(!is_perfect_square(&BigInt::from(50)));
    }

    proptest! {
        #[test]
        fn quadratic_closed_form(a0 in -100i64..=100, a1 in -100i64..=100, a2 in -100i64..=100) {
            prop_assume!(a2 != 0);
            prop_assert_eq!(disc(&[a0, a1, a2]), BigInt::from(a1 * a1 - 4 * a0 * a2));
        }

        #[test]
        fn cubic_closed_form(c in prop::collection::vec(-30i64..=30, 4)) {
            prop_assume!(c[3] != 0);
            let (a, b, cc, d) = (c[3], c[2], c[1], c[0]);
            let expect = b*b*cc*cc - 4*a*cc*cc*cc - 4*b*b*b*d - 27*a*a*d*d + 18*a*b*cc*d;
            prop_assert_eq!(disc(&c), BigInt::from(expect));
        }

        #[test]
        fn resultant_matches_sylvester(a in prop::collection::vec(-9i64..=9, 2..6), b in prop::collection::vec(-9i64..=9, 2..6)) {
            prop_assume!(*a.last().unwrap() != 0 && *b.last().unwrap() != 0);
            let r = resultant(&IntPolynomial::from_i64(&a), &IntPolynomial::from_i64(&b));
            prop_assert_eq!(r, sylvester_resultant(&a, &b));
        }
    }
}
