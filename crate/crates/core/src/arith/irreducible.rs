//! Irreducibility over the rationals for small degrees.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{discriminant, has_rational_root, IntPolynomial};
use crate::modp;

/// Primes tried for the mod-p certificate before falling back to search.
const CERTIFICATE_PRIMES: usize = 12;

/// Whether `f` is irreducible over the rationals.
///
/// Linear factors are excluded by the rational-root test. Higher factors
/// are ruled out by mod-p degree patterns when they admit no common factor
/// degree, and otherwise by an exhaustive search bounded by Mignotte's
/// bound.
pub fn is_irreducible(f: &IntPolynomial) -> bool {
    let n = f.degree();
    if f.is_zero() || n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // a nontrivial content still leaves a unit times an irreducible
    let f = f.primitive_part();
    if f.coeffs()[0].is_zero() {
        return false;
    }
    if discriminant(&f).map_or(true, |d| d.is_zero()) {
        return false;
    }
    if has_rational_root(&f) {
        return false;
    }
    if n <= 3 {
        return true;
    }
    let patterns = modp::primes()
        .filter_map(|p| modp::degree_pattern_mod_p(&f, p).ok())
        .take(CERTIFICATE_PRIMES);
    // degree-1 factors are already excluded, so only degrees 2..=n/2 matter
    let mut allowed: u64 = ((1u64 << (n / 2 + 1)) - 1) & !0b11;
    for t in patterns {
        allowed &= t.subset_sums();
        if allowed == 0 {
            return true;
        }
    }
    !(2..=n / 2).any(|k| allowed & (1 << k) != 0 && has_factor_of_degree(&f, k))
}

/// `C(k, j) * ||f||_2`, rounded up, bounds `|b_j|` for any integer factor
/// `b_k x^k + ... + b_0` of `f`.
fn mignotte_bounds(f: &IntPolynomial, k: usize) -> Vec<BigInt> {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let mut binom = BigInt::from(1);
    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        out.push(&binom * &norm);
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    out
}

/// Nonzero sample values `f(t)`, used to prune candidate factors `g` by
/// `g(t) | f(t)`.
const SAMPLE_POINTS: [i64; 4] = [1, -1, 2, -2];

fn has_factor_of_degree(f: &IntPolynomial, k: usize) -> bool {
    let lead = f.leading().abs();
    let konst = f.coeffs()[0].abs();
    let (Some(lead), Some(konst)) = (lead.to_u64(), konst.to_u64()) else {
        // astronomically large coefficients never occur at census scale
        return has_factor_generic(f, k);
    };
    let bounds = mignotte_bounds(f, k);
    let Some(bounds) = bounds.iter().map(|b| b.to_i64()).collect::<Option<Vec<_>>>() else {
        return has_factor_generic(f, k);
    };
    let samples: Vec<(i128, i128)> = SAMPLE_POINTS
        .iter()
        .filter_map(|&t| f.eval(&BigInt::from(t)).to_i128().map(|v| (t as i128, v)))
        .collect();
    let leads = super::divisors(lead);
    let consts = super::divisors(konst);
    let mut g = vec![0i64; k + 1];
    for &c in &leads {
        g[k] = c as i64;
        for &d in &consts {
            for sd in [d as i64, -(d as i64)] {
                g[0] = sd;
                if search_middle(f, &mut g, 1, &bounds, &samples) {
                    return true;
                }
            }
        }
    }
    false
}

fn search_middle(f: &IntPolynomial, g: &mut Vec<i64>, j: usize, bounds: &[i64], samples: &[(i128, i128)]) -> bool {
    let k = g.len() - 1;
    if j == k {
        for &(t, v) in samples {
            let gt = g.iter().rev().fold(0i128, |acc, &c| acc * t + c as i128);
            if gt == 0 || v % gt != 0 {
                return false;
            }
        }
        return f.div_exact(&IntPolynomial::from_i64(g)).is_some();
    }
    for c in -bounds[j]..=bounds[j] {
        g[j] = c;
        if search_middle(f, g, j + 1, bounds, samples) {
            return true;
        }
    }
    false
}

fn has_factor_generic(f: &IntPolynomial, k: usize) -> bool {
    // only reached for coefficients beyond 64 bits; scan with the same
    // bounds using big integers
    let bounds = mignotte_bounds(f, k);
    let leads = big_divisors(&f.leading().abs());
    let consts = big_divisors(&f.coeffs()[0].abs());
    let mut g = vec![BigInt::zero(); k + 1];
    for c in &leads {
        g[k] = c.clone();
        for d in &consts {
            for sd in [d.clone(), -d.clone()] {
                g[0] = sd;
                if search_middle_big(f, &mut g, 1, &bounds) {
                    return true;
                }
            }
        }
    }
    false
}

fn search_middle_big(f: &IntPolynomial, g: &mut Vec<BigInt>, j: usize, bounds: &[BigInt]) -> bool {
    let k = g.len() - 1;
    if j == k {
        return f.div_exact(&IntPolynomial::new(g.clone())).is_some();
    }
    let mut c = -bounds[j].clone();
    while c <= bounds[j] {
        g[j] = c.clone();
        if search_middle_big(f, g, j + 1, bounds) {
            return true;
        }
        c += 1;
    }
    false
}

fn big_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            if &d * &d != *n {
                out.push(n / &d);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{affine_substitute, Rational};
    use proptest::prelude::*;

    fn irr(c: &[i64]) -> bool {
        is_irreducible(&IntPolynomial::from_i64(c))
    }

    #[test]
    fn examples() {
        assert!(!irr(&[-1, 0, 1]));
        assert!(irr(&[1, 1, 1, 1, 1]));
        assert!(irr(&[1, 3, -4, 1]));
        assert!(!irr(&[-1, 0, 0, 1]));
        assert!(irr(&[-2, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn products_of_quadratics_are_caught() {
        // x^4 + 1 is irreducible but splits modulo every prime
        assert!(irr(&[1, 0, 0, 0, 1]));
        // (x^2 + 1)(x^2 + 2)
        assert!(!irr(&[2, 0, 3, 0, 1]));
        // (2x^2 + x + 3)(x^3 - x + 5)
        let f = IntPolynomial::from_i64(&[3, 1, 2]).mul(&IntPolynomial::from_i64(&[5, -1, 0, 1]));
        assert!(!is_irreducible(&f));
        // (x^2 - 2)(x^2 - 3), both irreducible, no rational roots
        assert!(!irr(&[6, 0, -5, 0, 1]));
    }

    /// Degree-2 factor search over all small monic-up-to-lead quadratics,
    /// independent of the main routine's pruning.
    fn brute_has_quadratic_factor(f: &IntPolynomial) -> bool {
        for a in 1..=6i64 {
            for b in -40..=40i64 {
                for c in -40..=40i64 {
                    if c == 0 {
                        continue;
                    }
                    if f.div_exact(&IntPolynomial::from_i64(&[c, b, a])).is_some() {
                        return true;
                    }
                }
            }
        }
        false
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn quartic_agrees_with_brute_force(c in prop::collection::vec(-6i64..=6, 4), lead in 1i64..=3) {
            let mut c = c;
            c.push(lead);
            let f = IntPolynomial::from_i64(&c);
            prop_assume!(!f.coeffs()[0].is_zero());
            prop_assume!(!discriminant(&f).unwrap().is_zero());
            let expect = !has_rational_root(&f) && !brute_has_quadratic_factor(&f);
            prop_assert_eq!(is_irreducible(&f), expect);
        }

        #[test]
        fn products_are_reducible(a in prop::collection::vec(-5i64..=5, 3), b in prop::collection::vec(-5i64..=5, 3..4)) {
            let (mut a, mut b) = (a, b);
            a[2] = a[2].max(1);
            *b.last_mut().unwrap() = 1;
            let f = IntPolynomial::from_i64(&a).mul(&IntPolynomial::from_i64(&b));
            prop_assert!(!is_irreducible(&f));
        }

        #[test]
        fn invariant_under_affine_maps(
            c in prop::collection::vec(-8i64..=8, 5),
            an in 1i64..=4, ad in 1i64..=4, bn in -3i64..=3, bd in 1i64..=3,
        ) {
            let f = IntPolynomial::from_i64(&c);
            prop_assume!(f.degree() >= 2);
            let g = affine_substitute(&f, &Rational::new(an.into(), ad.into()), &Rational::new(bn.into(), bd.into())).unwrap();
            prop_assert_eq!(is_irreducible(&f), is_irreducible(&g));
        }
    }
}
