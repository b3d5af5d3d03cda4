//! Invariants of binary cubics, quartics and quintics, the quintic sextic
//! resolvent and the weighted moduli height.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{discriminant, integer_roots_monic, IntPolynomial, Rational};
use crate::error::{Error, Result};
use crate::numeric::{certified_roots, ComplexBall};

/// Default working precision of the numeric resolvent, in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 212;

/// Precision cap used when the caller does not give one.
pub const DEFAULT_PRECISION_CAP: u32 = 2048;

/// Generators of an invariant ring evaluated at one form, with weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantVector {
    pub degree: usize,
    pub values: Vec<BigInt>,
    pub weights: Vec<u32>,
}

impl InvariantVector {
    pub fn new(degree: usize, values: Vec<BigInt>, weights: Vec<u32>) -> Self {
        assert_eq!(values.len(), weights.len());
        Self {
            degree,
            values,
            weights,
        }
    }

    pub fn cubic(two_delta: BigInt) -> Self {
        Self::new(3, vec![two_delta], vec![4])
    }

    pub fn quartic(j2: BigInt, j3: BigInt) -> Self {
        Self::new(4, vec![j2, j3], vec![3, 4])
    }

    pub fn quintic(j4: BigInt, j8: BigInt, j12: BigInt) -> Self {
        Self::new(5, vec![j4, j8, j12], vec![4, 8, 12])
    }
}

/// `|x|^(1/w)` through logarithms, so values beyond `f64` range still work.
fn root_abs(x: &BigInt, w: u32) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits();
    let (m, shift) = if bits > 1000 {
        ((x.abs() >> (bits - 60) as usize).to_f64().unwrap(), (bits - 60) as f64)
    } else {
        (x.abs().to_f64().unwrap(), 0.0)
    };
    ((m.ln() + shift * std::f64::consts::LN_2) / w as f64).exp()
}

/// `max_k |J_k|^(1/w_k)`.
pub fn weighted_height(inv: &InvariantVector) -> f64 {
    inv.values
        .iter()
        .zip(&inv.weights)
        .map(|(v, &w)| root_abs(v, w))
        .fold(0.0, f64::max)
}

fn expect_degree(f: &IntPolynomial, n: usize) -> Result<()> {
    if f.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: f.degree(),
        });
    }
    Ok(())
}

/// Cubic invariant vector `[2 Delta]`.
pub fn cubic_invariants(f: &IntPolynomial) -> Result<InvariantVector> {
    expect_degree(f, 3)?;
    Ok(InvariantVector::cubic(discriminant(f)? * 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarticInvariants {
    pub j2: BigInt,
    pub j3: BigInt,
    pub delta: BigInt,
}

impl QuarticInvariants {
    /// `J2^3 / (4 J2^3 - J3^2)`.
    pub fn j_invariant(&self) -> Result<Rational> {
        let den = BigInt::from(4) * self.j2.pow(3) - self.j3.pow(2);
        if den.is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        Ok(Rational::new(self.j2.pow(3), den))
    }

    pub fn vector(&self) -> InvariantVector {
        InvariantVector::quartic(self.j2.clone(), self.j3.clone())
    }
}

/// `J2`, `J3` and `Delta = (4 J2^3 - J3^2) / 27` of a binary quartic.
pub fn quartic_invariants(f: &IntPolynomial) -> Result<QuarticInvariants> {
    expect_degree(f, 4)?;
    let a: Vec<&BigInt> = f.coeffs().iter().collect();
    let (a0, a1, a2, a3, a4) = (a[0], a[1], a[2], a[3], a[4]);
    let j2 = BigInt::from(12) * a0 * a4 - BigInt::from(3) * a1 * a3 + a2 * a2;
    let j3 = BigInt::from(72) * a0 * a2 * a4 - BigInt::from(27) * a0 * a3 * a3 - BigInt::from(27) * a1 * a1 * a4
        + BigInt::from(9) * a1 * a2 * a3
        - BigInt::from(2) * a2 * a2 * a2;
    let num = BigInt::from(4) * j2.pow(3) - j3.pow(2);
    let (delta, rem) = num.div_rem(&BigInt::from(27));
    debug_assert!(rem.is_zero());
    Ok(QuarticInvariants { j2, j3, delta })
}

/// Root lists of the six 5-cycles, one per 5-Sylow subgroup of `S5`.
pub const SYLOW_CYCLES: [[usize; 5]; 6] = [
    [0, 1, 2, 3, 4],
    [0, 1, 2, 4, 3],
    [0, 1, 3, 4, 2],
    [0, 1, 3, 2, 4],
    [0, 1, 4, 2, 3],
    [0, 2, 3, 4, 1],
];

/// `g(x) = x^6 + d1 x^5 + ... + d6`, the sextic resolvent of a quintic.
#[derive(Clone, Debug)]
pub struct SexticResolvent {
    /// `d[0] = d1, ..., d[5] = d6`.
    pub d: [BigInt; 6],
    /// Precision that certified the coefficients.
    pub bits: u32,
    thetas: Vec<ComplexBall>,
}

impl SexticResolvent {
    pub fn polynomial(&self) -> IntPolynomial {
        let mut c: Vec<BigInt> = self.d.iter().rev().cloned().collect();
        c.push(BigInt::from(1));
        IntPolynomial::new(c)
    }

    /// Enclosures of the six roots `theta_i`.
    pub fn roots(&self) -> &[ComplexBall] {
        &self.thetas
    }

    /// Distinct rational (hence integer) roots of `g`, with a flag that is
    /// set when any of them is a repeated root.
    pub fn rational_roots(&self) -> (Vec<BigInt>, bool) {
        let g = self.polynomial();
        let mut roots: Vec<BigInt> = if self.thetas.iter().all(|t| t.rad < 0.5) {
            // every root of g lies in one of the balls, so every integer
            // root is the rounding of some ball
            self.thetas
                .iter()
                .filter_map(|t| t.certified_integer())
                .filter(|k| g.eval(k).is_zero())
                .collect()
        } else {
            integer_roots_monic(&g)
        };
        roots.sort();
        roots.dedup();
        let dg = g.derivative();
        let repeated = roots.iter().any(|k| dg.eval(k).is_zero());
        (roots, repeated)
    }
}

/// Sextic resolvent at `precision_bits`, doubling up to the default cap.
pub fn quintic_resolvent(f: &IntPolynomial, precision_bits: u32) -> Result<SexticResolvent> {
    quintic_resolvent_with(f, precision_bits, DEFAULT_PRECISION_CAP.max(precision_bits))
}

/// Sextic resolvent starting at `start` bits and doubling, never beyond
/// `cap`.
///
/// `theta_i = 5 a5^4 (P_i + Q_i)` where, for the i-th 5-cycle
/// `(c1 c2 c3 c4 c5)`, `P_i` is the product of the squared root
/// differences along the pentagon edges and `Q_i` the same product along
/// the opposite pentagon `(c1 c3 c5 c2 c4)`. The coefficients are then
/// certified integers.
pub fn quintic_resolvent_with(f: &IntPolynomial, start: u32, cap: u32) -> Result<SexticResolvent> {
    expect_degree(f, 5)?;
    if discriminant(f)?.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let mut bits = start.max(64);
    loop {
        if let Some(res) = resolvent_at(f, bits) {
            return Ok(res);
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted(cap));
        }
        bits = (bits * 2).min(cap);
    }
}

fn resolvent_at(f: &IntPolynomial, bits: u32) -> Option<SexticResolvent> {
    let roots = certified_roots(f, bits).ok()?;
    let mut sq = vec![vec![None; 5]; 5];
    for i in 0..5 {
        for j in i + 1..5 {
            let d = roots[i].sub(&roots[j]).square();
            sq[i][j] = Some(d.clone());
            sq[j][i] = Some(d);
        }
    }
    let edge = |a: usize, b: usize| sq[a][b].clone().expect("distinct indices");
    let cycle_product = |c: [usize; 5]| {
        let mut acc = edge(c[0], c[1]);
        for k in 1..5 {
            acc = acc.mul(&edge(c[k], c[(k + 1) % 5]));
        }
        acc
    };
    let scale = BigInt::from(5) * f.leading().pow(4);
    let thetas: Vec<ComplexBall> = SYLOW_CYCLES
        .iter()
        .map(|c| {
            let opposite = [c[0], c[2], c[4], c[1], c[3]];
            cycle_product(*c).add(&cycle_product(opposite)).scale(&scale)
        })
        .collect();
    // expand prod (x - theta_i), coefficients highest degree first
    let one = ComplexBall::from_int(&BigInt::from(1), bits);
    let mut poly = vec![one];
    for t in &thetas {
        let mut next = poly.clone();
        next.push(ComplexBall::from_int(&BigInt::zero(), bits));
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].sub(&c.mul(t));
        }
        poly = next;
    }
    let mut d: [BigInt; 6] = Default::default();
    for r in 1..=6 {
        d[r - 1] = poly[r].certified_integer()?;
    }
    Some(SexticResolvent { d, bits, thetas })
}

fn berwick(j4: &BigInt, j8: &BigInt, j12: &BigInt) -> [BigInt; 6] {
    let n = |k: i64| BigInt::from(k);
    let (a, b, c) = (j4, j8, j12);
    [
        n(-10) * a,
        n(35) * a.pow(2) + n(10) * b,
        n(-60) * a.pow(3) - n(30) * a * b - n(10) * c,
        n(55) * a.pow(4) + n(30) * a.pow(2) * b + n(25) * b.pow(2) + n(50) * a * c,
        n(-26) * a.pow(5) - n(10) * a.pow(3) * b - n(44) * a * b.pow(2) - n(59) * a.pow(2) * c - n(14) * b * c,
        n(5) * a.pow(6) + n(20) * a.pow(2) * b.pow(2) + n(20) * a.pow(3) * c + n(20) * a * b * c + n(25) * c.pow(2),
    ]
}

/// `(J4, J8, J12)` by inverting the first three Berwick relations; the
/// remaining three are checked.
pub fn quintic_invariants_from_resolvent(res: &SexticResolvent) -> Result<InvariantVector> {
    let ten = BigInt::from(10);
    let exact = |x: BigInt, what: &str| -> Result<BigInt> {
        let (q, r) = x.div_rem(&ten);
        if !r.is_zero() {
            return Err(Error::BerwickInconsistent(format!("{what} is not divisible by 10")));
        }
        Ok(q)
    };
    let d = &res.d;
    let j4 = exact(-d[0].clone(), "d1")?;
    let j8 = exact(&d[1] - BigInt::from(35) * j4.pow(2), "d2 - 35 J4^2")?;
    let j12 = exact(
        -(&d[2] + BigInt::from(60) * j4.pow(3) + BigInt::from(30) * &j4 * &j8),
        "d3 + 60 J4^3 + 30 J4 J8",
    )?;
    let expect = berwick(&j4, &j8, &j12);
    for r in 3..6 {
        if expect[r] != d[r] {
            return Err(Error::BerwickInconsistent(format!(
                "d{} = {} but the invariants give {}",
                r + 1,
                d[r],
                expect[r]
            )));
        }
    }
    Ok(InvariantVector::quintic(j4, j8, j12))
}

/// `J4, J8, J12` of a quintic.
pub fn quintic_invariants(f: &IntPolynomial, precision_bits: u32) -> Result<InvariantVector> {
    quintic_invariants_from_resolvent(&quintic_resolvent(f, precision_bits)?)
}

/// Discriminant recovered from `J4` and `J8`.
///
/// With the normalization fixed by the Berwick relations above the
/// classical relation takes the form `125 Delta = J4^2 - 4 J8`.
pub fn quintic_discriminant_from_invariants(j4: &BigInt, j8: &BigInt) -> Rational {
    Rational::new(j4.pow(2) - BigInt::from(4) * j8, BigInt::from(125))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quartic_examples() {
        let q = quartic_invariants(&poly(&[1, -2, -2, -2, 1])).unwrap();
        assert_eq!(
            (q.j2.clone(), q.j3.clone(), q.delta.clone()),
            (4.into(), (-416).into(), (-6400).into())
        );
        assert_eq!(q.j_invariant().unwrap(), Rational::new((-1).into(), 2700.into()));
        let q = quartic_invariants(&poly(&[-1, 2, -1, -2, 1])).unwrap();
        assert_eq!(
            (q.j2.clone(), q.j3.clone(), q.delta.clone()),
            (1.into(), 110.into(), (-448).into())
        );
        assert_eq!(q.j_invariant().unwrap(), Rational::new((-1).into(), 12096.into()));
        let q = quartic_invariants(&poly(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            (q.j2.clone(), q.j3.clone(), q.delta.clone()),
            (12.into(), 0.into(), 256.into())
        );
        assert_eq!(q.j_invariant().unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(q.delta, discriminant(&poly(&[1, 0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn j_invariant_needs_nonzero_discriminant() {
        // (x^2 - 1)^2
        let q = quartic_invariants(&poly(&[1, 0, -2, 0, 1])).unwrap();
        assert!(matches!(q.j_invariant(), Err(Error::ZeroDiscriminant)));
    }

    #[test]
    fn resolvent_of_table_quintic() {
        let r = quintic_resolvent(&poly(&[-1, 1, 4, -3, -3, 1]), 212).unwrap();
        assert_eq!(r.d[0], BigInt::from(-42350));
        let inv = quintic_invariants_from_resolvent(&r).unwrap();
        assert_eq!(inv.values, big(&[4235, 4026275, -16076916075]));
        assert_eq!(r.rational_roots().0.len(), 1);
    }

    #[test]
    fn resolvent_root_test() {
        let r = quintic_resolvent(&poly(&[-1, -1, 0, 0, 0, 1]), 212).unwrap();
        assert!(r.rational_roots().0.is_empty());
        let inv = quintic_invariants_from_resolvent(&r).unwrap();
        assert_eq!(inv.values, big(&[-625, 8000, 0]));
        let r = quintic_resolvent(&poly(&[-2, 0, 0, 0, 0, 1]), 212).unwrap();
        assert!(!r.rational_roots().0.is_empty());
    }

    #[test]
    fn weighted_heights() {
        let wh = weighted_height(&InvariantVector::cubic(98.into()));
        assert!((wh - 3.1463462836).abs() < 1e-9);
        let wh = weighted_height(&InvariantVector::quartic(4.into(), (-416).into()));
        assert!((wh - 4.5162).abs() < 1e-4);
        let wh = weighted_height(&InvariantVector::quintic(
            4235.into(),
            4026275.into(),
            (-16076916075i64).into(),
        ));
        assert!((wh - 8.06).abs() < 0.01);
    }

    #[test]
    fn discriminant_relation_constant() {
        // fitted on two table rows, then holds on the third and beyond
        for (key, j4, j8) in [
            (&[-1i64, 1, 4, -3, -3, 1][..], 4235i64, 4026275i64),
            (&[-1, 4, 9, -5, -9, 1], 113377, 2971552001),
            (&[-1, 0, 10, 5, -10, 1], 109375, 2392578125),
            (&[-1, -1, 0, 0, 0, 1], -625, 8000),
        ] {
            let disc = discriminant(&poly(key)).unwrap();
            assert_eq!(
                quintic_discriminant_from_invariants(&j4.into(), &j8.into()),
                Rational::from_integer(disc)
            );
        }
    }
}
