//! Fixed-length numeric features of database records.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::is_perfect_square;
use crate::database::PolyRecord;
use crate::error::{Error, Result};

/// Integer partitions of `n`, largest parts first, in descending
/// lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `sign(x) ln(1 + |x|)`, exact enough for integers of any size.
pub fn signed_log(x: &BigInt) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits();
    let mag = if bits > 1000 {
        let m = (x.abs() >> (bits - 60) as usize).to_f64().unwrap_or(f64::MAX);
        m.ln() + (bits - 60) as f64 * std::f64::consts::LN_2
    } else {
        x.abs().to_f64().unwrap_or(f64::MAX).ln_1p()
    };
    if x.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Feature layout for one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureExtractor {
    degree: usize,
    partitions: Vec<Vec<usize>>,
}

const SIGNATURE_PRIMES: [u64; 4] = [2, 3, 5, 7];

impl FeatureExtractor {
    pub fn new(degree: usize) -> Result<Self> {
        if !(3..=5).contains(&degree) {
            return Err(Error::OutOfRange(degree));
        }
        Ok(Self {
            degree,
            partitions: partitions(degree),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn invariant_count(&self) -> usize {
        self.degree - 2
    }

    fn has_resolvent_flag(&self) -> bool {
        self.degree >= 4
    }

    pub fn names(&self) -> Vec<String> {
        let n = self.degree;
        let mut out: Vec<String> = (0..=n).map(|i| format!("a{i}")).collect();
        out.extend((0..self.invariant_count()).map(|i| format!("log_inv{i}")));
        out.push("log_delta".into());
        out.push("delta_square".into());
        out.push("real_roots".into());
        out.push("nonreal_roots".into());
        for p in SIGNATURE_PRIMES {
            for part in &self.partitions {
                let label: Vec<String> = part.iter().map(|k| k.to_string()).collect();
                out.push(format!("p{p}_[{}]", label.join(",")));
            }
        }
        if self.has_resolvent_flag() {
            out.push("resolvent_root".into());
        }
        out
    }

    pub fn dimension(&self) -> usize {
        (self.degree + 1)
            + self.invariant_count()
            + 4
            + SIGNATURE_PRIMES.len() * self.partitions.len()
            + usize::from(self.has_resolvent_flag())
    }

    /// Which features are 0/1 indicators and so exempt from
    /// standardization.
    pub fn flag_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.dimension()];
        let square = self.degree + 1 + self.invariant_count() + 1;
        mask[square] = true;
        for m in mask.iter_mut().skip(square + 3) {
            *m = true;
        }
        mask
    }

    /// Index of the discriminant-square flag.
    pub fn square_flag_index(&self) -> usize {
        self.degree + 1 + self.invariant_count() + 1
    }

    pub fn extract(&self, r: &PolyRecord) -> Result<Vec<f64>> {
        if r.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: r.degree,
            });
        }
        let mut out = Vec::with_capacity(self.dimension());
        let h = r.height.max(1) as f64;
        out.extend(r.key.coeffs().iter().map(|&c| c as f64 / h));
        for i in 0..self.invariant_count() {
            out.push(r.invariants.get(i).map_or(0.0, signed_log));
        }
        out.push(signed_log(&r.delta));
        out.push(if is_perfect_square(&r.delta) { 1.0 } else { 0.0 });
        let real = r.extra_u64("real_roots").unwrap_or(0) as usize;
        out.push(real as f64);
        out.push(self.degree.saturating_sub(real) as f64);
        for slot in 0..SIGNATURE_PRIMES.len() {
            let t = r.signature.get(slot).cloned().unwrap_or_default();
            for part in &self.partitions {
                out.push(if *part == t { 1.0 } else { 0.0 });
            }
        }
        if self.has_resolvent_flag() {
            out.push(if r.extra_bool("resolvent_rational_root").unwrap_or(false) {
                1.0
            } else {
                0.0
            });
        }
        debug_assert_eq!(out.len(), self.dimension());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::canonicalize;
    use crate::database::{build_record, RecordOptions};

    fn rec(c: &[i64]) -> PolyRecord {
        build_record(&canonicalize(c).unwrap(), &RecordOptions::default())
            .unwrap()
            .unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(3).len(), 3);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(5)[0], vec![5]);
    }

    #[test]
    fn dimensions_match_names() {
        for n in 3..=5 {
            let fx = FeatureExtractor::new(n).unwrap();
            assert_eq!(fx.names().len(), fx.dimension());
            assert_eq!(fx.flag_mask().len(), fx.dimension());
        }
        assert_eq!(FeatureExtractor::new(5).unwrap().dimension(), 42);
    }

    #[test]
    fn square_flag() {
        let fx = FeatureExtractor::new(3).unwrap();
        let v = fx.extract(&rec(&[1, 3, -4, 1])).unwrap();
        assert_eq!(v[fx.square_flag_index()], 1.0);
        let fx = FeatureExtractor::new(4).unwrap();
        let v = fx.extract(&rec(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(v[fx.square_flag_index()], 1.0);
        assert!(fx.flag_mask()[fx.square_flag_index()]);
    }

    #[test]
    fn degree_mismatch() {
        let fx = FeatureExtractor::new(5).unwrap();
        assert!(matches!(
            fx.extract(&rec(&[1, 3, -4, 1])),
            Err(Error::DegreeMismatch { expected: 5, found: 3 })
        ));
    }

    #[test]
    fn entries_are_finite() {
        let fx = FeatureExtractor::new(5).unwrap();
        let v = fx.extract(&rec(&[-1, 1, 4, -3, -3, 1])).unwrap();
        assert!(v.iter().all(|x| x.is_finite()));
    }
}
