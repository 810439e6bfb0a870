//! The congruences `x^2 + n x + (-1)^s = 0 (mod alpha)` and their exceptional moduli.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::asymmetry::decompose;
use crate::cf::{both_expansions, expand_with_parity, Parity, QuotientSequence, RationalPair};
use crate::continuants::anticontinuant;
use crate::error::{Error, Result};

/// The congruence `x^2 + n x + (-1)^s = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CongruenceSpec {
    #[serde(with = "crate::int_serde")]
    pub n: BigInt,
    pub s: u8,
}

impl CongruenceSpec {
    pub fn new(n: impl Into<BigInt>, s: i64) -> Result<Self> {
        match s {
            0 | 1 => Ok(CongruenceSpec {
                n: n.into(),
                s: s as u8,
            }),
            _ => Err(Error::InvalidExponent(s)),
        }
    }

    /// `s = 0` with `n = +-2`: the left side is a perfect square.
    pub fn is_folded(&self) -> bool {
        self.s == 0 && *self.n.magnitude() == 2u32.into()
    }

    /// Parity an expansion must have for the congruence to follow from its anticontinuant.
    pub fn parity(&self) -> Parity {
        if self.s == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(-1)^s`
    pub fn constant(&self) -> BigInt {
        if self.s == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        }
    }

    pub fn negated(&self) -> Self {
        CongruenceSpec {
            n: -&self.n,
            s: self.s,
        }
    }

    pub fn is_root(&self, beta: &BigInt, alpha: &BigInt) -> bool {
        (beta * (beta + &self.n) + self.constant())
            .mod_floor(alpha)
            .is_zero()
    }

    fn reject_folded(&self) -> Result<()> {
        if self.is_folded() {
            Err(Error::FoldedCase { n: self.n.clone() })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for CongruenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.n.is_negative() { '-' } else { '+' };
        let c = if self.s == 0 { '+' } else { '-' };
        write!(f, "x^2 {sign} {}x {c} 1", self.n.magnitude())
    }
}

/// Roots `0 < beta < alpha`, ascending, by a full residue scan.
pub fn solve_quadratic(spec: &CongruenceSpec, alpha: &BigInt) -> Vec<BigInt> {
    let mut roots = Vec::new();
    if *alpha <= BigInt::one() {
        return roots;
    }
    // f(b) = b^2 + n b + e, stepped with f(b+1) = f(b) + 2b + 1 + n, all mod alpha.
    let mut value = (BigInt::one() + &spec.n + spec.constant()).mod_floor(alpha);
    let mut step = (BigInt::from(3) + &spec.n).mod_floor(alpha);
    let two = BigInt::from(2);
    let mut beta = BigInt::one();
    while beta < *alpha {
        if value.is_zero() {
            roots.push(beta.clone());
        }
        value += &step;
        if value >= *alpha {
            value -= alpha;
        }
        step += &two;
        if step >= *alpha {
            step -= alpha;
        }
        beta += 1;
    }
    roots
}

/// Which exclusion rule put a modulus in the exceptional set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalCondition {
    /// `alpha <= 2|n|`.
    SmallAlpha,
    /// `gamma (gamma - |n|) = -(-1)^s (mod alpha)` for some `1 <= gamma < |n|`.
    GammaCondition,
    /// `eta (eta - 2|n|) = -4 (-1)^s (mod alpha)` for some `1 <= eta < 2|n|`.
    EtaCondition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCertificate {
    #[serde(with = "crate::int_serde")]
    pub modulus: BigInt,
    pub condition: ExceptionalCondition,
    #[serde(with = "crate::int_serde::option")]
    pub witness: Option<BigInt>,
}

impl ExceptionalCertificate {
    /// Re-evaluates the condition for `spec`.
    pub fn holds(&self, spec: &CongruenceSpec) -> bool {
        let m = BigInt::from(spec.n.magnitude().clone());
        let sign = spec.constant();
        match (self.condition, &self.witness) {
            (ExceptionalCondition::SmallAlpha, None) => {
                self.modulus.is_positive() && self.modulus <= &m * 2
            }
            (ExceptionalCondition::GammaCondition, Some(g)) => {
                g.is_positive()
                    && *g < m
                    && (g * (g - &m) + &sign).mod_floor(&self.modulus).is_zero()
            }
            (ExceptionalCondition::EtaCondition, Some(h)) => {
                h.is_positive()
                    && *h < &m * 2
                    && (h * (h - &m * 2u32) + &sign * 4u32)
                        .mod_floor(&self.modulus)
                        .is_zero()
            }
            _ => false,
        }
    }
}

/// One exceptional modulus and every rule that flags it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalModulus {
    #[serde(with = "crate::int_serde")]
    pub modulus: BigInt,
    pub certificates: Vec<ExceptionalCertificate>,
}

/// Moduli that may violate the parity conclusion, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub spec: CongruenceSpec,
    pub members: Vec<ExceptionalModulus>,
}

impl ExceptionalSet {
    pub fn moduli(&self) -> Vec<BigInt> {
        self.members.iter().map(|m| m.modulus.clone()).collect()
    }

    fn find(&self, alpha: &BigInt) -> Option<&ExceptionalModulus> {
        self.members
            .binary_search_by(|m| m.modulus.cmp(alpha))
            .ok()
            .map(|i| &self.members[i])
    }

    pub fn contains(&self, alpha: &BigInt) -> bool {
        self.find(alpha).is_some()
    }

    pub fn certificates(&self, alpha: &BigInt) -> &[ExceptionalCertificate] {
        self.find(alpha)
            .map(|m| m.certificates.as_slice())
            .unwrap_or(&[])
    }
}

fn positive_divisors(value: &BigInt) -> Vec<BigInt> {
    let v = value.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= v {
        if (&v % &d).is_zero() {
            let q = &v / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Union of the three exclusion rules for `spec`.
pub fn exceptional_candidates(spec: &CongruenceSpec) -> Result<ExceptionalSet> {
    spec.reject_folded()?;
    let m = BigInt::from(spec.n.magnitude().clone());
    let sign = spec.constant();
    let mut found: BTreeMap<BigInt, Vec<ExceptionalCertificate>> = BTreeMap::new();
    let mut add = |modulus: BigInt, condition, witness: Option<BigInt>| {
        found
            .entry(modulus.clone())
            .or_default()
            .push(ExceptionalCertificate {
                modulus,
                condition,
                witness,
            });
    };

    let mut alpha = BigInt::one();
    while alpha <= &m * 2 {
        add(alpha.clone(), ExceptionalCondition::SmallAlpha, None);
        alpha += 1;
    }
    let mut gamma = BigInt::one();
    while gamma < m {
        let value = &gamma * (&gamma - &m) + &sign;
        debug_assert!(!value.is_zero());
        for d in positive_divisors(&value) {
            add(d, ExceptionalCondition::GammaCondition, Some(gamma.clone()));
        }
        gamma += 1;
    }
    let mut eta = BigInt::one();
    while eta < &m * 2 {
        let value: BigInt = &eta * (&eta - &m * 2u32) + &sign * 4u32;
        debug_assert!(!value.is_zero());
        for d in positive_divisors(&value) {
            add(d, ExceptionalCondition::EtaCondition, Some(eta.clone()));
        }
        eta += 1;
    }

    Ok(ExceptionalSet {
        spec: spec.clone(),
        members: found
            .into_iter()
            .map(|(modulus, certificates)| ExceptionalModulus {
                modulus,
                certificates,
            })
            .collect(),
    })
}

/// Whether some expansion of `pair` has anticontinuant `n` and length parity `parity`.
pub(crate) fn has_expansion_with(pair: &RationalPair, n: &BigInt, parity: Parity) -> bool {
    both_expansions(pair)
        .iter()
        .any(|q| q.parity() == parity && anticontinuant(q.entries()) == *n)
}

/// Solutions over the exceptional moduli that no expansion explains.
///
/// A root `beta` of `x^2 + n' x + (-1)^s` (with `n' = n`, or `n' = +-n` when
/// `include_negated`) is explained when one of the two expansions of
/// `alpha/beta` has length parity `s` and anticontinuant exactly `n'`. The
/// pairs left unexplained are returned sorted by `(alpha, beta)`.
pub fn true_exceptions(
    spec: &CongruenceSpec,
    include_negated: bool,
) -> Result<Vec<(BigInt, BigInt)>> {
    let candidates = exceptional_candidates(spec)?;
    let mut specs = vec![spec.clone()];
    if include_negated && !spec.n.is_zero() {
        specs.push(spec.negated());
    }
    let mut out = Vec::new();
    for alpha in &candidates.moduli() {
        let mut roots: BTreeMap<BigInt, Vec<&CongruenceSpec>> = BTreeMap::new();
        for sp in &specs {
            for beta in solve_quadratic(sp, alpha) {
                roots.entry(beta).or_default().push(sp);
            }
        }
        for (beta, solved) in roots {
            let pair = RationalPair::new(alpha.clone(), beta.clone())
                .expect("roots are coprime to the modulus");
            let explained = solved
                .iter()
                .any(|sp| has_expansion_with(&pair, &sp.n, sp.parity()));
            if !explained {
                out.push((alpha.clone(), beta));
            }
        }
    }
    Ok(out)
}

/// Parameters of `alpha / beta = b n^2 / (b a n - epsilon)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldedParams {
    #[serde(with = "crate::int_serde")]
    pub b: BigInt,
    #[serde(with = "crate::int_serde")]
    pub n: BigInt,
    #[serde(with = "crate::int_serde")]
    pub a: BigInt,
    /// `+1` or `-1`.
    pub epsilon: i8,
}

impl FoldedParams {
    pub fn new(
        b: impl Into<BigInt>,
        n: impl Into<BigInt>,
        a: impl Into<BigInt>,
        epsilon: i8,
    ) -> Result<Self> {
        let p = FoldedParams {
            b: b.into(),
            n: n.into(),
            a: a.into(),
            epsilon,
        };
        if !(p.b.is_positive() && p.n.is_positive() && p.a.is_positive()) {
            return Err(Error::InvalidFolded("b, n and a must be positive".into()));
        }
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::InvalidFolded(format!(
                "epsilon must be +1 or -1, got {epsilon}"
            )));
        }
        Ok(p)
    }

    pub fn alpha(&self) -> BigInt {
        &self.b * &self.n * &self.n
    }

    pub fn beta(&self) -> BigInt {
        &self.b * &self.a * &self.n - BigInt::from(self.epsilon)
    }

    pub fn is_normalized(&self) -> bool {
        self.a.gcd(&self.n).is_one()
    }
}

/// Moves `d^2`, `d = gcd(a, n)`, from `n^2` and `a n` into `b`.
pub fn folded_normalize(p: &FoldedParams) -> FoldedParams {
    let d = p.a.gcd(&p.n);
    FoldedParams {
        b: &p.b * &d * &d,
        n: &p.n / &d,
        a: &p.a / &d,
        epsilon: p.epsilon,
    }
}

/// Which of the three end-symmetric patterns a folded fraction follows.
///
/// * form 1: `.., pivot +- 2, pivot, ..`
/// * form 2: `.., pivot + 1, x, 1, pivot, ..`
/// * form 3: `.., pivot - 1, 1, x, pivot, ..`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldedForm {
    pub form: u8,
    #[serde(with = "crate::int_serde::option")]
    pub x: Option<BigInt>,
    #[serde(with = "crate::int_serde")]
    pub pivot: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldedClassification {
    /// The expansion that exhibits the pattern.
    pub sequence: QuotientSequence,
    pub form: FoldedForm,
}

fn classify_folded(q: &QuotientSequence) -> Option<FoldedForm> {
    let d = decompose(q).ok()?;
    let pivot = d.pivot.clone()?;
    // Signed offset of the entry in front of the core relative to the pivot.
    let lead = if d.depth % 2 == 0 {
        d.c.clone()
    } else {
        -d.c.clone()
    };
    let core = d.core.entries();
    if core.is_empty() && *lead.magnitude() == 2u32.into() {
        return Some(FoldedForm {
            form: 1,
            x: None,
            pivot,
        });
    }
    if core.len() == 2 {
        if lead.is_one() && core[1].is_one() {
            return Some(FoldedForm {
                form: 2,
                x: Some(core[0].clone()),
                pivot,
            });
        }
        if lead == -BigInt::one() && core[0].is_one() {
            return Some(FoldedForm {
                form: 3,
                x: Some(core[1].clone()),
                pivot,
            });
        }
    }
    None
}

/// Expands a folded fraction and matches it against the three patterns.
///
/// The even-length expansion is tried first, as it is the one whose
/// anticontinuant is tied to `x^2 +- 2x + 1`; the odd-length one is the
/// fallback. Failure of both is reported with the even-length sequence.
pub fn folded_expand_classify(p: &FoldedParams) -> Result<FoldedClassification> {
    if !p.is_normalized() {
        return Err(Error::InvalidFolded(format!(
            "gcd(a, n) must be 1 (a = {}, n = {})",
            p.a, p.n
        )));
    }
    let (alpha, beta) = (p.alpha(), p.beta());
    if !beta.is_positive() || beta >= alpha {
        return Err(Error::InvalidFolded(format!(
            "beta = {beta} is outside (0, {alpha})"
        )));
    }
    let pair = RationalPair::new(alpha, beta)?;
    let even = expand_with_parity(&pair, Parity::Even)?;
    let odd = expand_with_parity(&pair, Parity::Odd)?;
    for q in [&even, &odd] {
        if let Some(form) = classify_folded(q) {
            return Ok(FoldedClassification {
                sequence: q.clone(),
                form,
            });
        }
    }
    Err(Error::FoldedPatternMismatch(even))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn spec(n: i64, s: i64) -> CongruenceSpec {
        CongruenceSpec::new(n, s).unwrap()
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_quadratic(&spec(4, 0), &11.into()), ints(&[3, 4]));
        assert_eq!(solve_quadratic(&spec(-4, 0), &11.into()), ints(&[7, 8]));
        for n in -3..=3 {
            for s in 0..=1 {
                assert!(solve_quadratic(&spec(n, s), &1.into()).is_empty());
            }
        }
    }

    #[test]
    fn solve_matches_direct_scan() {
        for n in -7i64..=7 {
            for s in 0..=1 {
                let sp = spec(n, s);
                for alpha in 1i64..=300 {
                    let direct: Vec<BigInt> = (1..alpha)
                        .filter(|b| {
                            (b * b + n * b + if s == 0 { 1 } else { -1 }).rem_euclid(alpha) == 0
                        })
                        .map(BigInt::from)
                        .collect();
                    let a = BigInt::from(alpha);
                    assert_eq!(solve_quadratic(&sp, &a), direct);
                    for r in &direct {
                        assert!(r.gcd(&a).is_one());
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_exponent() {
        assert_eq!(CongruenceSpec::new(3, 2), Err(Error::InvalidExponent(2)));
    }

    #[test]
    fn candidates_examples() {
        let set = exceptional_candidates(&spec(3, 1)).unwrap();
        assert_eq!(set.moduli(), ints(&[1, 2, 3, 4, 5, 6, 9, 12, 13]));
        let set = exceptional_candidates(&spec(4, 0)).unwrap();
        assert_eq!(set.moduli(), ints(&[1, 2, 3, 4, 5, 6, 7, 8, 11, 12]));
        let set = exceptional_candidates(&spec(1, 0)).unwrap();
        assert_eq!(set.moduli(), ints(&[1, 2, 3]));
        assert_eq!(
            set.certificates(&3.into()),
            &[ExceptionalCertificate {
                modulus: 3.into(),
                condition: ExceptionalCondition::EtaCondition,
                witness: Some(1.into()),
            }]
        );
        assert!(matches!(
            exceptional_candidates(&spec(2, 0)),
            Err(Error::FoldedCase { .. })
        ));
        assert!(matches!(
            exceptional_candidates(&spec(-2, 0)),
            Err(Error::FoldedCase { .. })
        ));
        assert!(exceptional_candidates(&spec(2, 1)).is_ok());
    }

    #[test]
    fn candidates_are_sign_symmetric_and_certified() {
        for n in 1..=10i64 {
            for s in 0..=1 {
                if s == 0 && n == 2 {
                    continue;
                }
                let pos = exceptional_candidates(&spec(n, s)).unwrap();
                let neg = exceptional_candidates(&spec(-n, s)).unwrap();
                assert_eq!(pos.moduli(), neg.moduli());
                for alpha in &pos.moduli() {
                    let certs = pos.certificates(alpha);
                    assert!(!certs.is_empty());
                    assert!(certs.iter().all(|c| c.holds(&pos.spec)), "{alpha}");
                }
            }
        }
    }

    #[test]
    fn true_exception_examples() {
        let pairs = |v: &[(i64, i64)]| -> Vec<(BigInt, BigInt)> {
            v.iter().map(|&(a, b)| (a.into(), b.into())).collect()
        };
        assert_eq!(
            true_exceptions(&spec(4, 0), true).unwrap(),
            pairs(&[(2, 1), (3, 1), (3, 2)])
        );
        let three = true_exceptions(&spec(3, 1), true).unwrap();
        assert!(three.contains(&(3.into(), 1.into())));
        assert!(three.contains(&(3.into(), 2.into())));
        assert!(true_exceptions(&spec(1, 0), true).unwrap().is_empty());
    }

    #[test]
    fn normalize_examples() {
        let p = FoldedParams::new(1, 6, 4, 1).unwrap();
        let q = folded_normalize(&p);
        assert_eq!(
            (q.b.clone(), q.n.clone(), q.a.clone()),
            (4.into(), 3.into(), 2.into())
        );
        assert_eq!(q.alpha(), p.alpha());
        assert_eq!(q.beta(), p.beta());
        assert_eq!(folded_normalize(&q), q);

        let p = FoldedParams::new(2, 3, 2, -1).unwrap();
        assert_eq!(folded_normalize(&p), p);

        let q = folded_normalize(&FoldedParams::new(1, 4, 2, 1).unwrap());
        assert_eq!((q.b, q.n, q.a), (4.into(), 2.into(), 1.into()));

        assert!(FoldedParams::new(0, 3, 1, 1).is_err());
        assert!(FoldedParams::new(1, 3, 1, 0).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = folded_expand_classify(&FoldedParams::new(1, 5, 2, 1).unwrap()).unwrap();
        assert_eq!(c.sequence, QuotientSequence::from_u64s(&[2, 1, 3, 2]));
        assert_eq!(
            c.form,
            FoldedForm {
                form: 1,
                x: None,
                pivot: 3.into()
            }
        );

        let c = folded_expand_classify(&FoldedParams::new(2, 2, 1, 1).unwrap()).unwrap();
        assert_eq!(c.sequence, QuotientSequence::from_u64s(&[2, 1, 1, 1]));
        assert_eq!(
            c.form,
            FoldedForm {
                form: 2,
                x: Some(1.into()),
                pivot: 1.into()
            }
        );

        // 4/1: [4] has no pattern, its even twin [3, 1] is form 1 around pivot 1.
        let c = folded_expand_classify(&FoldedParams::new(1, 2, 1, 1).unwrap()).unwrap();
        assert_eq!(c.sequence, QuotientSequence::from_u64s(&[3, 1]));
        assert_eq!(
            c.form,
            FoldedForm {
                form: 1,
                x: None,
                pivot: 1.into()
            }
        );

        let c = folded_expand_classify(&FoldedParams::new(4, 3, 2, 1).unwrap()).unwrap();
        assert_eq!(c.form.form, 3);
        assert_eq!(c.form.x, Some(3.into()));
    }

    #[test]
    fn classify_rejects_bad_params() {
        assert!(folded_expand_classify(&FoldedParams::new(1, 6, 4, 1).unwrap()).is_err());
        // b = 1, n = 1, a = 1, epsilon = -1 gives beta = 2 > alpha = 1.
        assert!(folded_expand_classify(&FoldedParams::new(1, 1, 1, -1).unwrap()).is_err());
    }
}
