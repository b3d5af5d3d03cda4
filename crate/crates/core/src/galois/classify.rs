use num_bigint::BigInt;
use num_traits::Zero;

use super::catalog::{group_by_name, groups_of_degree, GroupId};
use super::{Certainty, ClassifyOptions, Evidence, Verdict};
use crate::arith::{discriminant, is_irreducible, is_perfect_square, rational_roots, IntPolynomial};
use crate::error::{Error, Result};
use crate::invariants::{quintic_resolvent, SexticResolvent};
use crate::modp::{self, CycleType, Signature};
use crate::realroots::{count_real_roots, forced_alternating_or_symmetric, RootCount};

/// A verdict together with the intermediate data the classifier computed,
/// so callers building records need not recompute it.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub verdict: Verdict,
    /// Primitive form of the input.
    pub poly: IntPolynomial,
    pub delta: BigInt,
    pub delta_is_square: bool,
    /// Patterns at the primes the classifier sampled, in order.
    pub patterns: Vec<(u64, CycleType)>,
    pub real_roots: Option<RootCount>,
    /// Rational roots of the cubic (quartic input) or sextic (quintic input)
    /// resolvent, when it was computed.
    pub resolvent_roots: Option<Vec<BigInt>>,
    pub sextic: Option<SexticResolvent>,
}

impl Analysis {
    fn new(poly: IntPolynomial, delta: BigInt, verdict: Verdict) -> Self {
        let delta_is_square = is_perfect_square(&delta);
        Self {
            verdict,
            poly,
            delta,
            delta_is_square,
            patterns: Vec::new(),
            real_roots: None,
            resolvent_roots: None,
            sextic: None,
        }
    }
}

fn group(n: usize, name: &str) -> &'static GroupId {
    group_by_name(n, name).expect("catalog group")
}

fn deterministic(g: &'static GroupId, evidence: Vec<Evidence>) -> Verdict {
    Verdict {
        group: g,
        certainty: Certainty::Deterministic,
        evidence,
    }
}

/// Runs the degree-specific decision procedure.
pub fn analyze(f: &IntPolynomial, opts: &ClassifyOptions) -> Result<Analysis> {
    let n = f.degree();
    if !(3..=5).contains(&n) {
        return Err(Error::OutOfRange(n));
    }
    let f = f.primitive_part();
    if !is_irreducible(&f) {
        return Err(Error::Reducible);
    }
    let delta = discriminant(&f)?;
    match n {
        3 => Ok(cubic(f, delta)),
        4 => Ok(quartic(f, delta)),
        _ => quintic(f, delta, opts),
    }
}

fn cubic(f: IntPolynomial, delta: BigInt) -> Analysis {
    let name = if is_perfect_square(&delta) { "C3" } else { "S3" };
    Analysis::new(f, delta, deterministic(group(3, name), vec![Evidence::Discriminant]))
}

/// Whether a rational quadratic with discriminant `d` splits over
/// `Q(sqrt(delta))`.
fn splits_over(d: &BigInt, delta: &BigInt) -> bool {
    d.is_zero() || is_perfect_square(d) || is_perfect_square(&(d * delta))
}

fn quartic(f: IntPolynomial, delta: BigInt) -> Analysis {
    let m = f.monicized();
    let (d, c, b, a) = (m.coeff(0), m.coeff(1), m.coeff(2), m.coeff(3));
    // x^3 - b x^2 + (ac - 4d) x - a^2 d + 4bd - c^2
    let resolvent = IntPolynomial::new(vec![
        -(&a * &a * &d) + BigInt::from(4) * &b * &d - &c * &c,
        &a * &c - BigInt::from(4) * &d,
        -b.clone(),
        BigInt::from(1),
    ]);
    let roots: Vec<BigInt> = rational_roots(&resolvent).into_iter().map(|r| r.to_integer()).collect();
    let square = is_perfect_square(&delta);
    let name = match roots.len() {
        3 => "V4",
        0 if square => "A4",
        0 => "S4",
        _ => {
            let beta = &roots[0];
            let d1 = beta * beta - BigInt::from(4) * &d;
            let d2 = &a * &a - BigInt::from(4) * (&b - beta);
            if splits_over(&d1, &delta) && splits_over(&d2, &delta) {
                "C4"
            } else {
                "D4"
            }
        }
    };
    let mut out = Analysis::new(
        f,
        delta,
        deterministic(group(4, name), vec![Evidence::Discriminant, Evidence::CubicResolvent]),
    );
    out.resolvent_roots = Some(roots);
    out
}

fn quintic(f: IntPolynomial, delta: BigInt, opts: &ClassifyOptions) -> Result<Analysis> {
    let square = is_perfect_square(&delta);
    let budget = opts.effective_budget();
    let mut cands: Vec<&'static GroupId> = groups_of_degree(5)?
        .iter()
        .filter(|g| g.in_alternating == square)
        .collect();
    let mut observed = Signature::new();
    let mut patterns = Vec::new();
    if budget > 0 {
        for p in modp::primes() {
            let Ok(t) = modp::degree_pattern_mod_p(&f, p) else {
                continue;
            };
            cands.retain(|g| g.admits(&t));
            observed.insert(t.clone());
            patterns.push((p, t));
            if cands.len() <= 1 || patterns.len() == budget {
                break;
            }
        }
        if patterns.is_empty() {
            return Err(Error::NoUsablePrimes(modp::PRIME_CEILING));
        }
    }
    let out = |verdict: Verdict| {
        let mut a = Analysis::new(f.clone(), delta.clone(), verdict);
        a.patterns = patterns.clone();
        a
    };
    match cands.len() {
        0 => return Err(Error::Inconsistent { degree: 5 }),
        1 => {
            return Ok(out(deterministic(
                cands[0],
                vec![Evidence::Discriminant, Evidence::Signature],
            )))
        }
        _ => {}
    }
    let parity_top = group(5, if square { "A5" } else { "S5" });

    let rc = count_real_roots(&f)?;
    if forced_alternating_or_symmetric(5, rc.nonreal).is_some() {
        let mut a = out(deterministic(
            parity_top,
            vec![Evidence::Discriminant, Evidence::RealRoots],
        ));
        a.real_roots = Some(rc);
        return Ok(a);
    }

    let res = quintic_resolvent(&f, opts.precision_bits)?;
    let (roots, repeated) = res.rational_roots();
    let verdict = if repeated {
        // the root test is inconclusive; fall back to the smallest group
        // that sampling could not exclude
        let pick = *cands.iter().min_by_key(|g| g.order).expect("nonempty");
        Verdict {
            group: pick,
            certainty: Certainty::Sampled {
                primes_used: patterns.len(),
                residual: cands
                    .iter()
                    .filter(|g| g.gap_id != pick.gap_id)
                    .map(|g| g.name)
                    .collect(),
            },
            evidence: vec![
                Evidence::Discriminant,
                Evidence::Signature,
                Evidence::DegenerateResolvent,
            ],
        }
    } else if roots.is_empty() {
        deterministic(parity_top, vec![Evidence::Discriminant, Evidence::SexticResolvent])
    } else if !square {
        deterministic(group(5, "F5"), vec![Evidence::Discriminant, Evidence::SexticResolvent])
    } else if observed.contains(&CycleType::new(vec![2, 2, 1])) {
        deterministic(
            group(5, "D5"),
            vec![Evidence::Discriminant, Evidence::SexticResolvent, Evidence::Signature],
        )
    } else {
        Verdict {
            group: group(5, "C5"),
            certainty: Certainty::Sampled {
                primes_used: patterns.len(),
                residual: vec!["D5"],
            },
            evidence: vec![Evidence::Discriminant, Evidence::SexticResolvent, Evidence::Signature],
        }
    };
    let mut a = out(verdict);
    a.real_roots = Some(rc);
    a.resolvent_roots = Some(roots);
    a.sextic = Some(res);
    Ok(a)
}
