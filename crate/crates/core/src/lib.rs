//! Exact-integer toolkit for end-symmetric continued fractions.
//!
//! A rational `alpha/beta` in lowest terms expands into a sequence of partial
//! quotients. The continuant of that sequence recovers the numerator, and the
//! *anticontinuant* `[q_0..q_{s-2}] - [q_1..q_{s-1}]` measures how far the
//! sequence is from being symmetric. Every such `beta` solves
//! `x^2 + A x + (-1)^s = 0 (mod alpha)` where `A` is the anticontinuant and `s`
//! the length of the sequence. This crate provides:
//!
//! * [`cf`]: expansion and evaluation under the end-coefficient convention,
//!   plus the parity-by-inverse predicate;
//! * [`continuants`]: continuants and anticontinuants over index ranges,
//!   Euler's identity residual, and Fibonacci numbers;
//! * [`asymmetry`]: asymmetry-type decomposition, composition, closed-form
//!   type values and exhaustive type enumeration;
//! * [`congruence`]: root finding, exceptional moduli, true exceptions and the
//!   folded `b n^2 / (b a n - e)` family;
//! * [`verifier`]: sweeps that check all of the above against each other and
//!   rebuild the table of asymmetry types for small values.
//!
//! All arithmetic is done on [`num_bigint::BigInt`].

pub mod asymmetry;
pub mod cf;
pub mod congruence;
pub mod continuants;
mod error;
pub mod int_serde;
pub mod verifier;

pub use asymmetry::{
    compose, decompose, enumerate_types, type_value, AsymmetryDecomposition, CoarseType,
    CoarseView, ExtendedAsymmetryType, LambdaParity, TypeCatalog, TypeFamily,
};
pub use cf::{
    both_expansions, evaluate, expand, expand_with_parity, parity_by_inverse, Parity,
    ParityPrediction, QuotientSequence, RationalPair,
};
pub use congruence::{
    exceptional_candidates, folded_expand_classify, folded_normalize, solve_quadratic,
    true_exceptions, CongruenceSpec, ExceptionalCertificate, ExceptionalCondition,
    ExceptionalModulus, ExceptionalSet, FoldedClassification, FoldedForm, FoldedParams,
};
pub use continuants::{
    anticontinuant, anticontinuant_range, anticontinuant_recursive, continuant, continuant_range,
    euler_residual, fibonacci,
};
pub use error::{Error, Result};
pub use verifier::{
    build_table, verify_identities, verify_main_theorem, verify_main_theorem_many, TableDocument,
    TheoremMode, VerificationReport,
};

pub use num_bigint::BigInt;
