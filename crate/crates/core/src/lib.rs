//! Exact Galois group determination for integer polynomials of degree 3 to 5.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: integer polynomials, canonical projective keys, discriminants
//!   and irreducibility over the rationals.
//! * [`modp`]: arithmetic over prime fields and Dedekind cycle-type sampling.
//! * [`realroots`]: exact Sturm real-root counting.
//! * [`numeric`]: certified multiprecision root enclosures.
//! * [`invariants`]: binary-form invariants and the quintic sextic resolvent.
//! * [`galois`]: the transitive group catalog and the per-degree classifiers.
//! * [`database`]: bounded-height enumeration, records and census summaries.
//! * [`nsn`]: the feedforward classifier with symbolic post-processing.
//! * [`verify`]: named verification suites used by the command line tool.

pub mod arith;
pub mod database;
pub mod error;
pub mod galois;
pub mod invariants;
pub mod modp;
pub mod nsn;
pub mod numeric;
pub mod par;
pub mod realroots;
pub mod verify;

pub use arith::{
    affine_substitute, canonicalize, discriminant, is_irreducible, poly_from_key, IntPolynomial, PolyKey, Rational,
};
pub use error::{Error, Result};

pub use galois::{classify, group_catalog, ClassifyOptions, GroupId, Verdict};
