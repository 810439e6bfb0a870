//! Asymmetry types of quotient sequences.
//!
//! An asymmetric sequence is written uniquely as
//!
//! ```text
//! q_0, .., q_{d-1}, p + (-1)^d c, x_0, .., x_{l-1}, p, q_{d-1}, .., q_0
//! ```
//!
//! with `c != 0`: `d` symmetric outer pairs are stripped, `c` is the marginal
//! asymmetry, `x` the core and `p` the pivot. The pair `(c ; x)` is the coarse
//! type. The anticontinuant of the sequence is `c K(x) - (-1)^d A(x)`, so it
//! depends on the parity of `d` as well whenever `A(x) != 0`. An
//! [`ExtendedAsymmetryType`] records that parity and is the invariant that
//! actually determines the anticontinuant.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cf::{Parity, QuotientSequence};
use crate::continuants::{anticontinuant, continuant, fibonacci};
use crate::error::{Error, Result};

/// Result of stripping the symmetric outer layers of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymmetryDecomposition {
    /// Number of stripped outer pairs.
    pub depth: usize,
    /// Marginal asymmetry; zero iff the sequence is symmetric.
    #[serde(with = "crate::int_serde")]
    pub c: BigInt,
    /// Core asymmetry. For a symmetric sequence: empty, or the middle entry.
    pub core: QuotientSequence,
    /// Entry closing the asymmetric block; absent for symmetric sequences.
    #[serde(with = "crate::int_serde::option")]
    pub pivot: Option<BigInt>,
    /// The stripped prefix `q_0..q_{depth-1}`.
    pub outer: QuotientSequence,
}

impl AsymmetryDecomposition {
    pub fn is_symmetric(&self) -> bool {
        self.c.is_zero()
    }

    pub fn depth_parity(&self) -> Parity {
        Parity::of(self.depth)
    }

    /// `None` for symmetric sequences.
    pub fn extended_type(&self) -> Option<ExtendedAsymmetryType> {
        (!self.is_symmetric()).then(|| ExtendedAsymmetryType {
            c: self.c.clone(),
            core: self.core.clone(),
            sigma: self.depth_parity(),
        })
    }

    pub fn coarse_type(&self) -> CoarseType {
        CoarseType {
            c: self.c.clone(),
            core: self.core.clone(),
        }
    }
}

/// Splits `q` at the first outer pair that differs.
pub fn decompose(q: &QuotientSequence) -> Result<AsymmetryDecomposition> {
    if q.is_empty() {
        return Err(Error::EmptySequence);
    }
    let e = q.entries();
    let s = e.len();
    let depth = (0..s / 2).find(|&d| e[d] != e[s - 1 - d]);
    let Some(depth) = depth else {
        let half = s / 2;
        return Ok(AsymmetryDecomposition {
            depth: half,
            c: BigInt::zero(),
            core: QuotientSequence::from_vec_unchecked(e[half..s - half].to_vec()),
            pivot: None,
            outer: QuotientSequence::from_vec_unchecked(e[..half].to_vec()),
        });
    };
    let pivot = e[s - 1 - depth].clone();
    let mut c = &e[depth] - &pivot;
    if depth % 2 == 1 {
        c = -c;
    }
    Ok(AsymmetryDecomposition {
        depth,
        c,
        core: QuotientSequence::from_vec_unchecked(e[depth + 1..s - 1 - depth].to_vec()),
        pivot: Some(pivot),
        outer: QuotientSequence::from_vec_unchecked(e[..depth].to_vec()),
    })
}

/// Rebuilds the sequence described by `d`; inverse of [`decompose`].
pub fn compose(d: &AsymmetryDecomposition) -> Result<QuotientSequence> {
    if d.outer.len() != d.depth {
        return Err(Error::InvalidComposition(format!(
            "depth {} but {} outer entries",
            d.depth,
            d.outer.len()
        )));
    }
    let outer = d.outer.entries();
    let mut out: Vec<BigInt> = outer.to_vec();
    if d.c.is_zero() {
        if d.pivot.is_some() {
            return Err(Error::InvalidComposition(
                "symmetric type with a pivot".into(),
            ));
        }
        if d.core.len() > 1 {
            return Err(Error::InvalidComposition(
                "symmetric type needs an empty or single-entry core".into(),
            ));
        }
        if outer.is_empty() && d.core.is_empty() {
            return Err(Error::EmptySequence);
        }
        out.extend(d.core.entries().iter().cloned());
    } else {
        let pivot = d
            .pivot
            .as_ref()
            .ok_or_else(|| Error::InvalidComposition("asymmetric type without a pivot".into()))?;
        if !pivot.is_positive() {
            return Err(Error::InvalidComposition(format!(
                "pivot {pivot} is not positive"
            )));
        }
        let lead = if d.depth.is_multiple_of(2) {
            pivot + &d.c
        } else {
            pivot - &d.c
        };
        if !lead.is_positive() {
            return Err(Error::InvalidComposition(format!(
                "entry {lead} before the core is not positive"
            )));
        }
        out.push(lead);
        out.extend(d.core.entries().iter().cloned());
        out.push(pivot.clone());
    }
    out.extend(outer.iter().rev().cloned());
    Ok(QuotientSequence::from_vec_unchecked(out))
}

/// `(c ; x)`, ignoring the depth parity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoarseType {
    #[serde(with = "crate::int_serde")]
    pub c: BigInt,
    pub core: QuotientSequence,
}

impl Ord for CoarseType {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.core.len(), &self.c, &self.core).cmp(&(other.core.len(), &other.c, &other.core))
    }
}

impl PartialOrd for CoarseType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoarseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.core.is_empty() {
            write!(f, "({} ;)", self.c)
        } else {
            write!(f, "({} ; {})", self.c, self.core)
        }
    }
}

/// Asymmetry type refined by the parity `sigma` of the stripped depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtendedAsymmetryType {
    #[serde(with = "crate::int_serde")]
    pub c: BigInt,
    pub core: QuotientSequence,
    pub sigma: Parity,
}

impl ExtendedAsymmetryType {
    pub fn new(c: impl Into<BigInt>, core: QuotientSequence, sigma: Parity) -> Result<Self> {
        let c = c.into();
        if c.is_zero() {
            return Err(Error::ZeroMarginal);
        }
        Ok(ExtendedAsymmetryType { c, core, sigma })
    }

    pub fn lambda(&self) -> usize {
        self.core.len()
    }

    pub fn coarse(&self) -> CoarseType {
        CoarseType {
            c: self.c.clone(),
            core: self.core.clone(),
        }
    }

    /// `(c, x, sigma) -> (-c, reverse(x), sigma)`: the type of the reversed sequences.
    pub fn reversal(&self) -> Self {
        ExtendedAsymmetryType {
            c: -&self.c,
            core: self.core.reversed(),
            sigma: self.sigma,
        }
    }
}

impl Ord for ExtendedAsymmetryType {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.core.len(), &self.c, &self.core, self.sigma).cmp(&(
            other.core.len(),
            &other.c,
            &other.core,
            other.sigma,
        ))
    }
}

impl PartialOrd for ExtendedAsymmetryType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedAsymmetryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.coarse(), self.sigma)
    }
}

/// Anticontinuant shared by every sequence of type `t`: `c K(x) - (-1)^sigma A(x)`.
pub fn type_value(t: &ExtendedAsymmetryType) -> Result<BigInt> {
    if t.c.is_zero() {
        return Err(Error::ZeroMarginal);
    }
    Ok(value_unchecked(&t.c, t.core.entries(), t.sigma))
}

fn value_unchecked(c: &BigInt, core: &[BigInt], sigma: Parity) -> BigInt {
    let k = continuant(core);
    let a = anticontinuant(core);
    match sigma {
        Parity::Even => c * k - a,
        Parity::Odd => c * k + a,
    }
}

/// One-parameter family of types: `pattern` entries that are `None` stand for
/// an arbitrary positive integer `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeFamily {
    #[serde(with = "crate::int_serde")]
    pub c: BigInt,
    pub pattern: Vec<Option<u64>>,
    pub sigma: Parity,
}

impl TypeFamily {
    pub fn instance(&self, p: &BigInt) -> Result<ExtendedAsymmetryType> {
        let core = self
            .pattern
            .iter()
            .map(|e| e.map(BigInt::from).unwrap_or_else(|| p.clone()))
            .collect();
        ExtendedAsymmetryType::new(self.c.clone(), QuotientSequence::new(core)?, self.sigma)
    }

    fn matches_core(&self, c: &BigInt, core: &QuotientSequence) -> bool {
        *c == self.c
            && core.len() == self.pattern.len()
            && core
                .entries()
                .iter()
                .zip(&self.pattern)
                .all(|(x, pat)| pat.is_none_or(|v| *x == BigInt::from(v)))
    }

    pub fn contains(&self, t: &ExtendedAsymmetryType) -> bool {
        t.sigma == self.sigma && self.matches_core(&t.c, &t.core)
    }

    pub fn contains_coarse(&self, t: &CoarseType) -> bool {
        self.matches_core(&t.c, &t.core)
    }

    pub fn lambda(&self) -> usize {
        self.pattern.len()
    }

    /// Core rendered with `p` for the free entry, e.g. `p,1`.
    pub fn pattern_string(&self) -> String {
        self.pattern
            .iter()
            .map(|e| e.map(|v| v.to_string()).unwrap_or_else(|| "p".into()))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn reversal(&self) -> Self {
        TypeFamily {
            c: -&self.c,
            pattern: self.pattern.iter().rev().copied().collect(),
            sigma: self.sigma,
        }
    }
}

impl fmt::Display for TypeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} ; {}) [{}]",
            self.c,
            self.pattern_string(),
            self.sigma
        )
    }
}

/// Filter on the core length `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaParity {
    Even,
    Odd,
    Both,
}

impl LambdaParity {
    pub fn admits(self, lambda: usize) -> bool {
        match self {
            LambdaParity::Both => true,
            LambdaParity::Even => lambda.is_multiple_of(2),
            LambdaParity::Odd => lambda % 2 == 1,
        }
    }
}

impl From<Parity> for LambdaParity {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => LambdaParity::Even,
            Parity::Odd => LambdaParity::Odd,
        }
    }
}

impl std::str::FromStr for LambdaParity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(LambdaParity::Even),
            "odd" => Ok(LambdaParity::Odd),
            "both" => Ok(LambdaParity::Both),
            _ => Err(Error::Parse {
                input: s.to_owned(),
                reason: "expected `even`, `odd` or `both`".into(),
            }),
        }
    }
}

/// Every extended type whose value is `target`, within a core-length filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCatalog {
    #[serde(with = "crate::int_serde")]
    pub target: BigInt,
    pub lambda_parity: LambdaParity,
    /// Sorted by `(lambda, c, core, sigma)`.
    pub finite_types: Vec<ExtendedAsymmetryType>,
    /// Only nonempty when `|target| == 2`.
    pub parametric_families: Vec<TypeFamily>,
}

impl TypeCatalog {
    pub fn contains(&self, t: &ExtendedAsymmetryType) -> bool {
        self.finite_types.binary_search(t).is_ok()
            || self.parametric_families.iter().any(|f| f.contains(t))
    }

    /// Drops `sigma`, keeping the types that reach the target at the given depth parity.
    pub fn coarse_view(&self, sigma: Parity) -> CoarseView {
        let types: BTreeSet<CoarseType> = self
            .finite_types
            .iter()
            .filter(|t| t.sigma == sigma)
            .map(ExtendedAsymmetryType::coarse)
            .collect();
        CoarseView {
            types: types.into_iter().collect(),
            families: self
                .parametric_families
                .iter()
                .filter(|f| f.sigma == sigma)
                .cloned()
                .collect(),
        }
    }

    /// Coarse view as printed in the classical table, where types are read off
    /// sequences with no stripped layers (even depth).
    pub fn paper_view(&self) -> CoarseView {
        self.coarse_view(Parity::Even)
    }

    pub fn len(&self) -> usize {
        self.finite_types.len() + self.parametric_families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Coarse `(c ; x)` types, plus families rendered with a free entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseView {
    pub types: Vec<CoarseType>,
    pub families: Vec<TypeFamily>,
}

impl CoarseView {
    pub fn contains(&self, t: &CoarseType) -> bool {
        self.types.binary_search(t).is_ok() || self.families.iter().any(|f| f.contains_coarse(t))
    }
}

/// All extended types with value `n`.
///
/// Candidates are searched cell by cell over `(sigma, lambda, c)` with
/// `F_{lambda+1} <= |n|` and `1 <= c <= |n| / F_{lambda+1}`. Core entries never
/// exceed `|n|` except in the two `|n| = 2` families, which are emitted
/// symbolically. Partial cores are cut as soon as a continuant that bounds
/// the value from below already exceeds `|n|`.
pub fn enumerate_types(n: &BigInt, lambda_parity: LambdaParity) -> Result<TypeCatalog> {
    if n.is_zero() {
        return Err(Error::SymmetricTarget);
    }
    let magnitude = n
        .magnitude()
        .to_u64()
        .ok_or_else(|| Error::TargetTooLarge(n.clone()))?;
    let mut finite = positive_types(magnitude, lambda_parity);
    let mut families = if magnitude == 2 && lambda_parity.admits(2) {
        vec![
            TypeFamily {
                c: BigInt::one(),
                pattern: vec![None, Some(1)],
                sigma: Parity::Even,
            },
            TypeFamily {
                c: BigInt::one(),
                pattern: vec![Some(1), None],
                sigma: Parity::Odd,
            },
        ]
    } else {
        Vec::new()
    };
    if n.is_negative() {
        finite = finite.iter().map(ExtendedAsymmetryType::reversal).collect();
        families = families.iter().map(TypeFamily::reversal).collect();
    }
    finite.sort();
    Ok(TypeCatalog {
        target: n.clone(),
        lambda_parity,
        finite_types: finite,
        parametric_families: families,
    })
}

fn positive_types(n: u64, lambda_parity: LambdaParity) -> Vec<ExtendedAsymmetryType> {
    let target = BigInt::from(n);
    let mut out = Vec::new();
    for sigma in [Parity::Even, Parity::Odd] {
        let mut lambda = 0usize;
        loop {
            let fib = fibonacci(lambda as u64 + 1)
                .to_u64()
                .expect("fibonacci bounded by target");
            if fib > n {
                break;
            }
            if lambda_parity.admits(lambda) {
                for c in 1..=n / fib {
                    let mut search = CoreSearch {
                        n,
                        c,
                        lambda,
                        sigma,
                        target: &target,
                        core: Vec::with_capacity(lambda),
                        out: &mut out,
                    };
                    search.run();
                }
            }
            lambda += 1;
        }
    }
    out
}

/// Depth-first search over cores of one `(sigma, lambda, c)` cell.
struct CoreSearch<'a> {
    n: u64,
    c: u64,
    lambda: usize,
    sigma: Parity,
    target: &'a BigInt,
    core: Vec<u64>,
    out: &'a mut Vec<ExtendedAsymmetryType>,
}

fn small_continuant(xs: &[u64]) -> u128 {
    let (mut prev, mut cur) = (0u128, 1u128);
    for &x in xs {
        let next = (x as u128).saturating_mul(cur).saturating_add(prev);
        prev = cur;
        cur = next;
    }
    cur
}

impl CoreSearch<'_> {
    fn run(&mut self) {
        if self.lambda == 0 {
            self.emit();
            return;
        }
        self.extend();
    }

    fn extend(&mut self) {
        for x in 1..=self.n {
            self.core.push(x);
            if !self.pruned() {
                if self.core.len() == self.lambda {
                    self.emit();
                } else {
                    self.extend();
                }
            }
            self.core.pop();
        }
    }

    /// True when every completion of the current prefix has value above `n`.
    fn pruned(&self) -> bool {
        if self.lambda < 2 {
            return false;
        }
        let n = self.n as u128;
        let c = self.c as u128;
        let k = self.core.len() - 1;
        let xs = &self.core;
        // With c > 0 every term of
        //   c x_{l-1} K(x_0..x_{l-2}) - K(x_0..x_{l-2}) + c K(x_0..x_{l-3}) + K(x_1..x_{l-1})
        // is nonnegative once the first two are combined. The odd-depth value is the
        // even-depth value of the reversed core.
        match self.sigma {
            Parity::Even => {
                (k >= 1 && small_continuant(&xs[1..]) > n)
                    || (k + 3 <= self.lambda && c.saturating_mul(small_continuant(xs)) > n)
            }
            Parity::Odd => {
                (k + 2 <= self.lambda && small_continuant(xs) > n)
                    || (k >= 2 && c.saturating_mul(small_continuant(&xs[2..])) > n)
            }
        }
    }

    fn is_family_member(&self) -> bool {
        self.lambda == 2
            && self.c == 1
            && match self.sigma {
                Parity::Even => self.core[1] == 1,
                Parity::Odd => self.core[0] == 1,
            }
    }

    fn emit(&mut self) {
        if self.is_family_member() {
            return;
        }
        let core: Vec<BigInt> = self.core.iter().map(|&x| BigInt::from(x)).collect();
        let c = BigInt::from(self.c);
        if value_unchecked(&c, &core, self.sigma) == *self.target {
            self.out.push(ExtendedAsymmetryType {
                c,
                core: QuotientSequence::from_vec_unchecked(core),
                sigma: self.sigma,
            });
        }
    }
}
