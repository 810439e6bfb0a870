//! Finite simple continued fractions of coprime pairs.
//!
//! Every rational `alpha/beta > 1` has exactly two expansions, one ending in 1
//! and one ending in a quotient of at least 2. [`expand`] picks the one whose
//! final quotient is 1 exactly when its first quotient is 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::continuants::continuant;
use crate::error::{Error, Result};

/// Parity of a length (sequence length, core length, or stripped depth).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(len: usize) -> Self {
        if len.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(-1)^self` as an integer.
    pub fn sign(self) -> i32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "0" => Ok(Parity::Even),
            "odd" | "1" => Ok(Parity::Odd),
            _ => Err(Error::Parse {
                input: s.to_owned(),
                reason: "expected `even` or `odd`".into(),
            }),
        }
    }
}

/// A finite list of positive partial quotients. May be empty (cores of
/// asymmetry types are often empty); operations that need entries say so.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuotientSequence(#[serde(with = "crate::int_serde::vec")] Vec<BigInt>);

impl QuotientSequence {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|q| !q.is_positive()) {
            return Err(Error::NonPositiveEntry(bad.clone()));
        }
        Ok(QuotientSequence(entries))
    }

    /// Convenience constructor for literals; panics on a zero entry.
    pub fn from_u64s(entries: &[u64]) -> Self {
        Self::new(entries.iter().map(|&q| BigInt::from(q)).collect())
            .expect("quotients must be positive")
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<BigInt>) -> Self {
        debug_assert!(entries.iter().all(|q| q.is_positive()));
        QuotientSequence(entries)
    }

    pub fn empty() -> Self {
        QuotientSequence(Vec::new())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.len())
    }

    pub fn first(&self) -> Option<&BigInt> {
        self.0.first()
    }

    pub fn last(&self) -> Option<&BigInt> {
        self.0.last()
    }

    pub fn reversed(&self) -> Self {
        QuotientSequence(self.0.iter().rev().cloned().collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// True when the first entry is 1 exactly when the last entry is 1.
    pub fn satisfies_convention(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => a.is_one() == b.is_one(),
            _ => false,
        }
    }

    /// The other expansion of the same rational: `.., q` becomes `.., q-1, 1`
    /// and `.., q, 1` becomes `.., q+1`. `None` for `[1]` and the empty list.
    pub fn alternate(&self) -> Option<Self> {
        let last = self.last()?;
        let mut v = self.0.clone();
        if last.is_one() {
            if v.len() < 2 {
                return None;
            }
            v.pop();
            *v.last_mut().unwrap() += 1;
        } else {
            *v.last_mut().unwrap() -= 1;
            v.push(BigInt::one());
        }
        Some(QuotientSequence(v))
    }
}

impl fmt::Display for QuotientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

impl FromStr for QuotientSequence {
    type Err = Error;

    /// Parses comma-separated positive integers. The empty string is the empty sequence.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let entries = s
            .split(',')
            .map(|part| {
                part.trim().parse::<BigInt>().map_err(|e| Error::Parse {
                    input: s.to_owned(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// A coprime pair `alpha >= beta >= 1`; `beta == alpha` only for `1/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalPair {
    #[serde(with = "crate::int_serde")]
    alpha: BigInt,
    #[serde(with = "crate::int_serde")]
    beta: BigInt,
}

impl RationalPair {
    pub fn new(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Result<Self> {
        let (alpha, beta) = (alpha.into(), beta.into());
        if !beta.is_positive() || beta > alpha {
            return Err(Error::PairOutOfRange { alpha, beta });
        }
        if !alpha.gcd(&beta).is_one() {
            return Err(Error::NotCoprime { alpha, beta });
        }
        Ok(RationalPair { alpha, beta })
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }
}

impl fmt::Display for RationalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.alpha, self.beta)
    }
}

/// Plain Euclidean algorithm; final quotient is at least 2 unless the result is `[1]`.
fn euclid(pair: &RationalPair) -> Vec<BigInt> {
    let mut a = pair.alpha.clone();
    let mut b = pair.beta.clone();
    let mut out = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        out.push(q);
        a = b;
        b = r;
    }
    out
}

/// Expansion of `alpha/beta` obeying the end-coefficient convention.
pub fn expand(pair: &RationalPair) -> QuotientSequence {
    let mut q = euclid(pair);
    let first_is_one = q[0].is_one();
    let last_is_one = q[q.len() - 1].is_one();
    if first_is_one != last_is_one {
        // Euclid never ends in 1 except for [1], so the last quotient is >= 2 here.
        *q.last_mut().unwrap() -= 1;
        q.push(BigInt::one());
    }
    QuotientSequence(q)
}

/// The expansion of `alpha/beta` whose length has the requested parity.
pub fn expand_with_parity(pair: &RationalPair, parity: Parity) -> Result<QuotientSequence> {
    let mut q = euclid(pair);
    if Parity::of(q.len()) != parity {
        if q.len() == 1 && q[0].is_one() {
            return Err(Error::ParityUnachievable);
        }
        *q.last_mut().unwrap() -= 1;
        q.push(BigInt::one());
    }
    Ok(QuotientSequence(q))
}

/// Both expansions, convention one first. `1/1` has only `[1]`.
pub fn both_expansions(pair: &RationalPair) -> Vec<QuotientSequence> {
    let primary = expand(pair);
    let mut out = vec![primary];
    if let Some(other) = out[0].alternate() {
        out.push(other);
    }
    out
}

/// `(alpha, beta) = ([q_0..q_{s-1}], [q_1..q_{s-1}])`.
pub fn evaluate(q: &QuotientSequence) -> Result<RationalPair> {
    if q.is_empty() {
        return Err(Error::EmptySequence);
    }
    let alpha = continuant(q.entries());
    let beta = continuant(&q.entries()[1..]);
    debug_assert!(alpha.gcd(&beta).is_one());
    Ok(RationalPair { alpha, beta })
}

/// Outcome of the inverse test for the parity of an expansion length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityPrediction {
    #[serde(with = "crate::int_serde")]
    pub u: BigInt,
    #[serde(with = "crate::int_serde")]
    pub v: BigInt,
    /// Smallest positive inverse of `v` modulo `u`.
    #[serde(with = "crate::int_serde")]
    pub v_inverse: BigInt,
    pub same_side: bool,
    pub predicted_parity: Parity,
}

/// Predicts the length parity of the convention expansion of `u/v` from
/// where `v` and its inverse mod `u` fall relative to `u/2`: odd when both
/// are `<= u/2` or both `> u/2`, even otherwise.
pub fn parity_by_inverse(u: &BigInt, v: &BigInt) -> Result<ParityPrediction> {
    if *u < BigInt::from(2) || !v.is_positive() || v >= u {
        return Err(Error::PairOutOfRange {
            alpha: u.clone(),
            beta: v.clone(),
        });
    }
    let eg = v.extended_gcd(u);
    if !eg.gcd.is_one() {
        return Err(Error::NotCoprime {
            alpha: u.clone(),
            beta: v.clone(),
        });
    }
    let v_inverse = eg.x.mod_floor(u);
    let lower = |x: &BigInt| x * 2 <= *u;
    let same_side = lower(v) == lower(&v_inverse);
    Ok(ParityPrediction {
        u: u.clone(),
        v: v.clone(),
        v_inverse,
        same_side,
        predicted_parity: if same_side { Parity::Odd } else { Parity::Even },
    })
}
