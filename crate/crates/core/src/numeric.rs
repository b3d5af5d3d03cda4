//! Multiprecision complex root enclosures.
//!
//! Values are fixed-point: a complex number is a pair of big-integer
//! mantissas scaled by `2^bits`, and a ball adds an `f64` radius. Radii are
//! propagated with outward rounding so that every ball contains the exact
//! value it stands for.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::IntPolynomial;
use crate::error::{Error, Result};

/// Relative slack added to every radius computed in `f64`.
const SLACK: f64 = 1.0 + 1e-12;

/// Splits `|x|` into `m * 2^e` with `m` carrying at most 60 significant bits.
fn split(x: &BigInt) -> (f64, i64) {
    let nbits = x.bits() as i64;
    if nbits <= 60 {
        return (x.abs().to_f64().unwrap_or(0.0), 0);
    }
    let shift = nbits - 60;
    ((x.abs() >> shift as usize).to_f64().unwrap_or(0.0), shift)
}

fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    let e = e.clamp(-2000, 2000) as i32;
    // two steps keep intermediate values representable
    let half = e / 2;
    m * 2f64.powi(half) * 2f64.powi(e - half)
}

/// `|re + i im| / 2^scale` as `f64`.
fn modulus(re: &BigInt, im: &BigInt, scale: i64) -> f64 {
    let (a, ea) = split(re);
    let (b, eb) = split(im);
    let e = ea.max(eb);
    let a = ldexp(a, ea - e);
    let b = ldexp(b, eb - e);
    ldexp(a.hypot(b), e - scale)
}

/// `|re + i im|` as `m * 2^e`, for values far outside the `f64` range.
fn log_modulus(re: &BigInt, im: &BigInt) -> (f64, i64) {
    let (a, ea) = split(re);
    let (b, eb) = split(im);
    let e = ea.max(eb);
    (ldexp(a, ea - e).hypot(ldexp(b, eb - e)), e)
}

/// `x / 2^bits` as `f64`.
pub fn fx_to_f64(x: &BigInt, bits: u32) -> f64 {
    let (m, e) = split(x);
    let v = ldexp(m, e - bits as i64);
    if x.is_negative() {
        -v
    } else {
        v
    }
}

fn fx_from_f64(v: f64, bits: u32) -> BigInt {
    if v == 0.0 || !v.is_finite() {
        return BigInt::zero();
    }
    // v = m * 2^e exactly with integral m
    let (m, e) = frexp(v);
    let mant = BigInt::from((m * (1u64 << 53) as f64) as i64);
    let shift = e - 53 + bits as i64;
    if shift >= 0 {
        mant << shift as usize
    } else {
        mant >> (-shift) as usize
    }
}

fn frexp(v: f64) -> (f64, i64) {
    let e = v.abs().log2().floor() as i64 + 1;
    (v / 2f64.powi(e as i32), e)
}

/// Complex ball with fixed-point midpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBall {
    pub re: BigInt,
    pub im: BigInt,
    /// Absolute radius.
    pub rad: f64,
    pub bits: u32,
}

impl ComplexBall {
    pub fn from_int(k: &BigInt, bits: u32) -> Self {
        Self {
            re: k << bits as usize,
            im: BigInt::zero(),
            rad: 0.0,
            bits,
        }
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(fx_to_f64(&self.re, self.bits), fx_to_f64(&self.im, self.bits))
    }

    pub fn abs_mid(&self) -> f64 {
        modulus(&self.re, &self.im, self.bits as i64)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            rad: (self.rad + o.rad) * SLACK,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            rad: (self.rad + o.rad) * SLACK,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let b = self.bits as usize;
        let re = (&self.re * &o.re - &self.im * &o.im) >> b;
        let im = (&self.re * &o.im + &self.im * &o.re) >> b;
        let ulp = ldexp(2.0, -(self.bits as i64));
        let rad = (self.abs_mid() * o.rad + o.abs_mid() * self.rad + self.rad * o.rad + ulp) * SLACK;
        Self {
            re,
            im,
            rad,
            bits: self.bits,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let kf = split(k);
        Self {
            re: &self.re * k,
            im: &self.im * k,
            rad: self.rad * ldexp(kf.0, kf.1) * SLACK,
            bits: self.bits,
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// The unique integer in the ball, when the ball is narrow enough to
    /// certify one.
    pub fn certified_integer(&self) -> Option<BigInt> {
        if !(self.rad < 0.5) {
            return None;
        }
        let b = self.bits as usize;
        let half = BigInt::from(1) << (b - 1);
        let k: BigInt = (&self.re + &half) >> b;
        let dist_re = fx_to_f64(&(&self.re - (&k << b)), self.bits).abs();
        let dist_im = fx_to_f64(&self.im, self.bits).abs();
        (dist_re.hypot(dist_im) <= self.rad).then_some(k)
    }

    /// Whether the ball meets the real axis.
    pub fn touches_real_axis(&self) -> bool {
        fx_to_f64(&self.im, self.bits).abs() <= self.rad
    }
}

/// Initial root approximations by the Aberth iteration in `f64`.
pub fn aberth_f64(f: &IntPolynomial) -> Vec<Complex64> {
    let n = f.degree();
    let lead = f.leading().to_f64().unwrap_or(1.0);
    let c: Vec<f64> = f.coeffs().iter().map(|a| a.to_f64().unwrap_or(0.0) / lead).collect();
    let bound = 1.0 + c[..n].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Exact `2^(bits * deg) f(z)` and `2^(bits * deg) f'(z)` at the dyadic
/// point `z = (x + i y) / 2^bits`.
fn exact_eval(f: &IntPolynomial, x: &BigInt, y: &BigInt, bits: u32) -> [(BigInt, BigInt); 2] {
    let n = f.degree();
    let b = bits as usize;
    let mut p = (f.leading(), BigInt::zero());
    let mut dp = (BigInt::zero(), BigInt::zero());
    for (k, a) in f.coeffs()[..n].iter().enumerate().rev() {
        let dre = &dp.0 * x - &dp.1 * y + (&p.0 << b);
        let dim = &dp.0 * y + &dp.1 * x + (&p.1 << b);
        dp = (dre, dim);
        let re = &p.0 * x - &p.1 * y + (a << (b * (n - k)));
        let im = &p.0 * y + &p.1 * x;
        p = (re, im);
    }
    [p, dp]
}

fn newton_fixed(f: &IntPolynomial, z: &mut (BigInt, BigInt), bits: u32) {
    let b = bits as usize;
    let coeffs: Vec<BigInt> = f.coeffs().iter().map(|a| a << b).collect();
    let stop_bits = 12u64;
    for _ in 0..200 {
        let mut p = (BigInt::zero(), BigInt::zero());
        let mut dp = (BigInt::zero(), BigInt::zero());
        for a in coeffs.iter().rev() {
            let dre = ((&dp.0 * &z.0 - &dp.1 * &z.1) >> b) + &p.0;
            let dim = ((&dp.0 * &z.1 + &dp.1 * &z.0) >> b) + &p.1;
            dp = (dre, dim);
            let re = ((&p.0 * &z.0 - &p.1 * &z.1) >> b) + a;
            let im = (&p.0 * &z.1 + &p.1 * &z.0) >> b;
            p = (re, im);
        }
        let den = &dp.0 * &dp.0 + &dp.1 * &dp.1;
        if den.is_zero() {
            return;
        }
        let nre = ((&p.0 * &dp.0 + &p.1 * &dp.1) << b) / &den;
        let nim = ((&p.1 * &dp.0 - &p.0 * &dp.1) << b) / &den;
        z.0 -= &nre;
        z.1 -= &nim;
        if nre.bits() <= stop_bits && nim.bits() <= stop_bits {
            return;
        }
    }
}

fn aberth_fixed(f: &IntPolynomial, zs: &mut [(BigInt, BigInt)], bits: u32) {
    let n = zs.len();
    let b = bits as usize;
    let coeffs: Vec<BigInt> = f.coeffs().iter().map(|a| a << b).collect();
    let one = BigInt::from(1) << b;
    let cdiv = |a: &(BigInt, BigInt), c: &(BigInt, BigInt)| -> Option<(BigInt, BigInt)> {
        let den = &c.0 * &c.0 + &c.1 * &c.1;
        if den.is_zero() {
            return None;
        }
        Some((
            ((&a.0 * &c.0 + &a.1 * &c.1) << b) / &den,
            ((&a.1 * &c.0 - &a.0 * &c.1) << b) / &den,
        ))
    };
    let cmul = |a: &(BigInt, BigInt), c: &(BigInt, BigInt)| -> (BigInt, BigInt) {
        ((&a.0 * &c.0 - &a.1 * &c.1) >> b, (&a.0 * &c.1 + &a.1 * &c.0) >> b)
    };
    for _ in 0..300 {
        let mut done = true;
        for i in 0..n {
            let z = zs[i].clone();
            let mut p = (BigInt::zero(), BigInt::zero());
            let mut dp = (BigInt::zero(), BigInt::zero());
            for a in coeffs.iter().rev() {
                let t = cmul(&dp, &z);
                dp = (t.0 + &p.0, t.1 + &p.1);
                let t = cmul(&p, &z);
                p = (t.0 + a, t.1);
            }
            let Some(ratio) = cdiv(&p, &dp) else { continue };
            let mut s = (BigInt::zero(), BigInt::zero());
            for (j, zj) in zs.iter().enumerate() {
                if j != i {
                    let d = (&z.0 - &zj.0, &z.1 - &zj.1);
                    if let Some(inv) = cdiv(&(one.clone(), BigInt::zero()), &d) {
                        s = (s.0 + inv.0, s.1 + inv.1);
                    }
                }
            }
            let rs = cmul(&ratio, &s);
            let den = (&one - rs.0, -rs.1);
            let Some(w) = cdiv(&ratio, &den) else { continue };
            if w.0.bits() > 12 || w.1.bits() > 12 {
                done = false;
            }
            zs[i] = (&z.0 - &w.0, &z.1 - &w.1);
        }
        if done {
            return;
        }
    }
}

/// Certified enclosures of all complex roots of a squarefree `f`.
///
/// Each ball is centred on a `bits`-bit approximation and has radius
/// `n |f(z)| / |f'(z)|`, which always contains a root; pairwise disjoint
/// balls therefore contain one root each.
pub fn certified_roots(f: &IntPolynomial, bits: u32) -> Result<Vec<ComplexBall>> {
    let n = f.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let approx = aberth_f64(f);
    let mut zs: Vec<(BigInt, BigInt)> = approx
        .iter()
        .map(|z| (fx_from_f64(z.re, bits), fx_from_f64(z.im, bits)))
        .collect();
    for z in zs.iter_mut() {
        newton_fixed(f, z, bits);
    }
    if let Some(balls) = certify(f, &zs, bits) {
        return Ok(balls);
    }
    let mut zs: Vec<(BigInt, BigInt)> = approx
        .iter()
        .map(|z| (fx_from_f64(z.re, bits), fx_from_f64(z.im, bits)))
        .collect();
    aberth_fixed(f, &mut zs, bits);
    certify(f, &zs, bits).ok_or(Error::PrecisionExhausted(bits))
}

fn certify(f: &IntPolynomial, zs: &[(BigInt, BigInt)], bits: u32) -> Option<Vec<ComplexBall>> {
    let n = f.degree();
    let mut balls = Vec::with_capacity(n);
    for (x, y) in zs {
        let [p, dp] = exact_eval(f, x, y, bits);
        // both carry the same power of two, which cancels in the ratio
        let (pm, pe) = log_modulus(&p.0, &p.1);
        let (dm, de) = log_modulus(&dp.0, &dp.1);
        if dm == 0.0 {
            return None;
        }
        let rad = if pm == 0.0 {
            0.0
        } else {
            ldexp(n as f64 * pm / dm, pe - de) * SLACK
        };
        if !rad.is_finite() {
            return None;
        }
        balls.push(ComplexBall {
            re: x.clone(),
            im: y.clone(),
            rad,
            bits,
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = modulus(
                &(&balls[i].re - &balls[j].re),
                &(&balls[i].im - &balls[j].im),
                bits as i64,
            );
            if d / SLACK <= balls[i].rad + balls[j].rad {
                return None;
            }
        }
    }
    Some(balls)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_simple_polynomials() {
        let f = IntPolynomial::from_i64(&[-2, 0, 1]);
        let roots = certified_roots(&f, 128).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|b| b.mid().re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 2f64.sqrt()).abs() < 1e-15);
        assert!((re[1] - 2f64.sqrt()).abs() < 1e-15);
        assert!(roots.iter().all(|b| b.rad < 1e-30));
    }

    #[test]
    fn quintic_roots_are_certified() {
        let f = IntPolynomial::from_i64(&[-1, -1, 0, 0, 0, 1]);
        let roots = certified_roots(&f, 212).unwrap();
        assert_eq!(roots.len(), 5);
        assert_eq!(roots.iter().filter(|b| b.touches_real_axis()).count(), 1);
        for b in &roots {
            assert!(b.rad < 1e-55, "radius {}", b.rad);
        }
    }

    #[test]
    fn clustered_roots() {
        // (x - 1)(x - 1 - 10^-9 ...) style cluster: 10^9 x - (10^9 + 1)
        let a = IntPolynomial::from_i64(&[-1, 1]);
        let b = IntPolynomial::from_i64(&[-1_000_000_001, 1_000_000_000]);
        let c = IntPolynomial::from_i64(&[3, 0, 1]);
        let f = a.mul(&b).mul(&c);
        let roots = certified_roots(&f, 256).unwrap();
        assert_eq!(roots.len(), 4);
    }

    #[test]
    fn ball_products_contain_exact_values() {
        let bits = 100;
        let x = ComplexBall::from_int(&BigInt::from(3), bits);
        let y = ComplexBall::from_int(&BigInt::from(-7), bits);
        assert_eq!(x.mul(&y).certified_integer(), Some(BigInt::from(-21)));
        assert_eq!(x.sub(&y).square().certified_integer(), Some(BigInt::from(100)));
    }
}
