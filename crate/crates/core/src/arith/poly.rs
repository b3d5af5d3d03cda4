use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`. Trailing zeros are trimmed on
/// construction, so the leading coefficient of a nonzero polynomial is
/// never zero. The zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Leading coefficient, zero for the zero polynomial.
    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `q^deg * f(p / q)`, an integer whose sign equals the sign of
    /// `f(p / q)` when `q > 0`.
    pub fn eval_homogeneous(&self, p: &BigInt, q: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the (positive) content; the sign of the polynomial is kept.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    /// Exact division over the integers: `Some(q)` iff `self = q * divisor`
    /// with `q` integral.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    /// Reverse the coefficient order, `x^n f(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Max absolute coefficient (naive height).
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Coefficients as `i128` when every one fits.
    pub fn to_i128(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(ToPrimitive::to_i128).collect()
    }

    /// Coefficients as `i64` when every one fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// `a_n^(n-1) f(x / a_n)`: monic with integer coefficients and the same
    /// splitting field.
    pub fn monicized(&self) -> Self {
        let n = self.degree();
        let lead = self.leading();
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut pow = BigInt::one();
        // coefficient i picks up lead^(n - 1 - i) for i < n
        let mut pows = vec![BigInt::one(); n + 1];
        for i in (0..n).rev() {
            pows[i] = pow.clone();
            pow *= &lead;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i == n {
                coeffs.push(BigInt::one());
            } else {
                coeffs.push(c * &pows[i]);
            }
        }
        Self::new(coeffs)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.leading(), BigInt::from(2));
        assert!(IntPolynomial::from_i64(&[0, 0]).is_zero());
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(
            IntPolynomial::from_i64(&[1, 3, -4, 1]).to_string(),
            "x^3 - 4x^2 + 3x + 1"
        );
        assert_eq!(IntPolynomial::from_i64(&[-1, 0, 0, 1]).to_string(), "x^3 - 1");
    }

    #[test]
    fn homogeneous_eval_matches_scaled_value() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        // 3^2 * ((5/3)^2 - 2) = 25 - 18
        assert_eq!(p.eval_homogeneous(&5.into(), &3.into()), BigInt::from(7));
    }

    #[test]
    fn monicized_is_monic_with_scaled_roots() {
        // 2x^2 - 3x + 1 has roots 1, 1/2; monicized has roots 2, 1
        let p = IntPolynomial::from_i64(&[1, -3, 2]);
        let m = p.monicized();
        assert_eq!(m, IntPolynomial::from_i64(&[2, -3, 1]));
    }

    #[test]
    fn exact_division() {
        let a = IntPolynomial::from_i64(&[-1, 0, 1]);
        let b = IntPolynomial::from_i64(&[1, 1]);
        assert_eq!(a.div_exact(&b), Some(IntPolynomial::from_i64(&[-1, 1])));
        assert_eq!(a.div_exact(&IntPolynomial::from_i64(&[1, 2])), None);
    }
}
