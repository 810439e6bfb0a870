//! Sweeps that check the congruence/type correspondence over ranges of moduli,
//! and the table of asymmetry types for small anticontinuant values.
//!
//! Reports are plain data ordered by `(alpha, beta)`; two reports over
//! disjoint modulus ranges combine with [`VerificationReport::merge`].

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymmetry::{
    decompose, enumerate_types, AsymmetryDecomposition, CoarseType, CoarseView, TypeCatalog,
};
use crate::cf::{
    both_expansions, evaluate, parity_by_inverse, Parity, QuotientSequence, RationalPair,
};
use crate::congruence::{
    exceptional_candidates, solve_quadratic, true_exceptions, CongruenceSpec,
    ExceptionalCertificate, ExceptionalSet,
};
use crate::continuants::{anticontinuant, continuant, euler_residual};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremMode {
    /// Membership by extended (depth-parity aware) type.
    Refined,
    /// Refined check plus membership by the coarse `(c ; x)` types of the table.
    Coarse,
}

impl std::str::FromStr for TheoremMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "refined" => Ok(TheoremMode::Refined),
            "coarse" => Ok(TheoremMode::Coarse),
            _ => Err(Error::Parse {
                input: s.to_owned(),
                reason: "expected `refined` or `coarse`".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaRange {
    #[serde(with = "crate::int_serde")]
    pub lo: BigInt,
    #[serde(with = "crate::int_serde")]
    pub hi: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `beta` solves the congruence but its expansion is not of a listed type.
    RootWithoutType,
    /// The expansion has a listed type but `beta` is not a root.
    TypeWithoutRoot,
    /// Catalog membership disagrees with evaluating the anticontinuant directly.
    CatalogDisagreement,
    /// `beta^2 + A beta + (-1)^s != 0 (mod alpha)` for an expansion.
    CongruenceIdentity,
    /// `2|A| >= K` for a convention expansion.
    HalfBound,
    /// Inverse test predicted the wrong length parity.
    ParityLemma,
    /// Evaluating the expansion did not give back the pair.
    RoundTrip,
    /// Nonzero Euler identity residual.
    EulerIdentity,
    /// `A(reverse(q)) != -A(q)`.
    ReversalAntisymmetry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(with = "crate::int_serde")]
    pub alpha: BigInt,
    #[serde(with = "crate::int_serde")]
    pub beta: BigInt,
    pub expansion: QuotientSequence,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoarseDirection {
    /// Coarse type is listed, yet `beta` is not a root.
    TypeWithoutRoot,
    /// `beta` is a root, yet its coarse type is not listed.
    RootWithoutType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseCounterexample {
    #[serde(with = "crate::int_serde")]
    pub alpha: BigInt,
    #[serde(with = "crate::int_serde")]
    pub beta: BigInt,
    pub expansion: QuotientSequence,
    pub coarse_type: CoarseType,
    pub direction: CoarseDirection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedModulus {
    #[serde(with = "crate::int_serde")]
    pub modulus: BigInt,
    pub certificates: Vec<ExceptionalCertificate>,
    /// The refined correspondence actually fails at this modulus.
    pub necessary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `None` for the identity sweep.
    pub spec: Option<CongruenceSpec>,
    pub mode: Option<TheoremMode>,
    pub alpha_range: AlphaRange,
    pub excluded: Vec<ExcludedModulus>,
    /// Decision points examined: coprime pairs, plus random trials for the identity sweep.
    pub checked: u64,
    /// Identity sweep: decision points without a violation. Theorem sweep:
    /// roots whose expansion has a listed type.
    pub matches: u64,
    pub violations: Vec<Violation>,
    pub coarse_counterexamples: Vec<CoarseCounterexample>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Combines reports for the same spec over disjoint modulus ranges.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.alpha_range = AlphaRange {
            lo: self.alpha_range.lo.clone().min(other.alpha_range.lo),
            hi: self.alpha_range.hi.clone().max(other.alpha_range.hi),
        };
        self.checked += other.checked;
        self.matches += other.matches;
        self.excluded.extend(other.excluded);
        self.excluded.sort_by(|a, b| a.modulus.cmp(&b.modulus));
        self.violations.extend(other.violations);
        self.violations
            .sort_by(|a, b| (&a.alpha, &a.beta).cmp(&(&b.alpha, &b.beta)));
        self.coarse_counterexamples
            .extend(other.coarse_counterexamples);
        self.coarse_counterexamples
            .sort_by(|a, b| (&a.alpha, &a.beta).cmp(&(&b.alpha, &b.beta)));
        self
    }

    fn empty(spec: Option<CongruenceSpec>, mode: Option<TheoremMode>, lo: u64, hi: u64) -> Self {
        VerificationReport {
            spec,
            mode,
            alpha_range: AlphaRange {
                lo: lo.into(),
                hi: hi.into(),
            },
            excluded: Vec::new(),
            checked: 0,
            matches: 0,
            violations: Vec::new(),
            coarse_counterexamples: Vec::new(),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            Some(spec) => writeln!(f, "congruence: {spec} (n = {}, s = {})", spec.n, spec.s)?,
            None => writeln!(f, "identity sweep")?,
        }
        if let Some(mode) = self.mode {
            writeln!(f, "mode: {mode:?}")?;
        }
        writeln!(
            f,
            "alpha: {}..={}",
            self.alpha_range.lo, self.alpha_range.hi
        )?;
        if !self.excluded.is_empty() {
            let list = |necessary: bool| {
                self.excluded
                    .iter()
                    .filter(|e| !necessary || e.necessary)
                    .map(|e| e.modulus.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            writeln!(f, "excluded: {}", list(false))?;
            writeln!(f, "necessary exclusions: {}", list(true))?;
        }
        writeln!(f, "checked: {}", self.checked)?;
        writeln!(f, "matches: {}", self.matches)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {}/{} [{}] {:?}", v.alpha, v.beta, v.expansion, v.kind)?;
        }
        if self.mode == Some(TheoremMode::Coarse) {
            writeln!(
                f,
                "coarse counterexamples: {}",
                self.coarse_counterexamples.len()
            )?;
            for c in &self.coarse_counterexamples {
                writeln!(
                    f,
                    "  {}/{} [{}] {} {:?}",
                    c.alpha, c.beta, c.expansion, c.coarse_type, c.direction
                )?;
            }
        }
        Ok(())
    }
}

/// Exhaustive check over coprime pairs `alpha <= max_alpha` of the congruence
/// identity (both expansions), the half bound and the inverse parity test,
/// followed by `trials` random Euler-identity and reversal checks.
pub fn verify_identities(max_alpha: u64, trials: u64, seed: u64) -> Result<VerificationReport> {
    if max_alpha < 2 {
        return Err(Error::PairOutOfRange {
            alpha: max_alpha.into(),
            beta: BigInt::one(),
        });
    }
    let mut report = VerificationReport::empty(None, None, 2, max_alpha);
    for a in 2..=max_alpha {
        let alpha = BigInt::from(a);
        for b in 1..a {
            if a.gcd(&b) != 1 {
                continue;
            }
            let beta = BigInt::from(b);
            let pair = RationalPair::new(alpha.clone(), beta.clone())?;
            let found = check_pair_identities(&pair);
            report.checked += 1;
            if found.is_empty() {
                report.matches += 1;
            }
            report.violations.extend(found);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let len = rng.random_range(1..=12usize);
        let entries: Vec<BigInt> = (0..len)
            .map(|_| BigInt::from(rng.random_range(1..=9u32)))
            .collect();
        let q = QuotientSequence::new(entries)?;
        let s = len as i64;
        let n = rng.random_range(0..s);
        let m = rng.random_range(-2..=n);
        let l = rng.random_range(0..=m + 2);
        let k = rng.random_range(0..=l);
        let mut bad = Vec::new();
        if !euler_residual(&q, k, l, m, n)?.is_zero() {
            bad.push(ViolationKind::EulerIdentity);
        }
        if anticontinuant(q.reversed().entries()) != -anticontinuant(q.entries()) {
            bad.push(ViolationKind::ReversalAntisymmetry);
        }
        report.checked += 1;
        if bad.is_empty() {
            report.matches += 1;
        }
        let pair = evaluate(&q)?;
        report
            .violations
            .extend(bad.into_iter().map(|kind| Violation {
                alpha: pair.alpha().clone(),
                beta: pair.beta().clone(),
                expansion: q.clone(),
                kind,
            }));
    }
    Ok(report)
}

fn check_pair_identities(pair: &RationalPair) -> Vec<Violation> {
    let (alpha, beta) = (pair.alpha(), pair.beta());
    let mut out = Vec::new();
    let mut flag = |q: &QuotientSequence, kind| {
        out.push(Violation {
            alpha: alpha.clone(),
            beta: beta.clone(),
            expansion: q.clone(),
            kind,
        })
    };
    let expansions = both_expansions(pair);
    for q in &expansions {
        let a = anticontinuant(q.entries());
        let sign = BigInt::from(q.parity().sign());
        if !(beta * beta + &a * beta + sign).mod_floor(alpha).is_zero() {
            flag(q, ViolationKind::CongruenceIdentity);
        }
        if evaluate(q).ok().as_ref() != Some(pair) {
            flag(q, ViolationKind::RoundTrip);
        }
    }
    let conv = &expansions[0];
    let a = anticontinuant(conv.entries());
    if a.magnitude() * 2u32 >= *continuant(conv.entries()).magnitude() {
        flag(conv, ViolationKind::HalfBound);
    }
    match parity_by_inverse(alpha, beta) {
        Ok(p) if p.predicted_parity == conv.parity() => {}
        _ => flag(conv, ViolationKind::ParityLemma),
    }
    out
}

/// One conforming expansion with the data every spec needs.
struct ExpansionData {
    expansion: QuotientSequence,
    anticontinuant: BigInt,
    parity: Parity,
    decomposition: AsymmetryDecomposition,
}

/// Per-`beta` data shared by every spec in a theorem sweep. `forms[0]` is
/// the Euclid-first expansion; 2/1 also carries `[1,1]`, which conforms too.
struct BetaRecord {
    beta: BigInt,
    forms: Vec<ExpansionData>,
}

fn beta_records(alpha: &BigInt) -> Vec<BetaRecord> {
    let mut out = Vec::new();
    let mut beta = BigInt::one();
    while beta < *alpha {
        if beta.gcd(alpha).is_one() {
            let pair = RationalPair::new(alpha.clone(), beta.clone()).expect("coprime pair");
            let forms = both_expansions(&pair)
                .into_iter()
                .filter(QuotientSequence::satisfies_convention)
                .map(|expansion| ExpansionData {
                    anticontinuant: anticontinuant(expansion.entries()),
                    parity: expansion.parity(),
                    decomposition: decompose(&expansion).expect("nonempty expansion"),
                    expansion,
                })
                .collect();
            out.push(BetaRecord {
                beta: beta.clone(),
                forms,
            });
        }
        beta += 1;
    }
    out
}

struct SpecSweep {
    spec: CongruenceSpec,
    catalog: Option<TypeCatalog>,
    coarse: Option<CoarseView>,
    excluded: ExceptionalSet,
    report: VerificationReport,
}

impl SpecSweep {
    fn new(spec: &CongruenceSpec, alpha_max: u64, mode: TheoremMode) -> Result<Self> {
        let excluded = exceptional_candidates(spec)?;
        let catalog = if spec.n.is_zero() {
            None
        } else {
            Some(enumerate_types(&spec.n, spec.parity().into())?)
        };
        let coarse = match mode {
            TheoremMode::Coarse => catalog.as_ref().map(TypeCatalog::paper_view),
            TheoremMode::Refined => None,
        };
        Ok(SpecSweep {
            spec: spec.clone(),
            catalog,
            coarse,
            excluded,
            report: VerificationReport::empty(Some(spec.clone()), Some(mode), 1, alpha_max),
        })
    }

    fn listed(&self, r: &ExpansionData) -> bool {
        if r.parity != self.spec.parity() {
            return false;
        }
        match (&self.catalog, r.decomposition.extended_type()) {
            (Some(cat), Some(t)) => cat.contains(&t),
            (None, None) => true,
            _ => false,
        }
    }

    fn coarse_listed(&self, r: &ExpansionData) -> bool {
        let t = r.decomposition.coarse_type();
        match &self.coarse {
            Some(view) => {
                !t.c.is_zero() && t.core.len() % 2 == self.spec.s as usize && view.contains(&t)
            }
            // n = 0: the listed types are the symmetric ones of the right length parity.
            None => t.c.is_zero() && r.parity == self.spec.parity(),
        }
    }

    fn visit(&mut self, alpha: &BigInt, records: &[BetaRecord]) {
        let roots = solve_quadratic(&self.spec, alpha);
        let is_excluded = self.excluded.contains(alpha);
        let mut necessary = false;
        for r in records {
            let is_root = roots.binary_search(&r.beta).is_ok();
            let listed = r.forms.iter().any(|e| self.listed(e));
            let direct = r
                .forms
                .iter()
                .any(|e| e.parity == self.spec.parity() && e.anticontinuant == self.spec.n);
            let main = &r.forms[0];
            let violation = |kind| Violation {
                alpha: alpha.clone(),
                beta: r.beta.clone(),
                expansion: main.expansion.clone(),
                kind,
            };
            if listed != direct {
                self.report
                    .violations
                    .push(violation(ViolationKind::CatalogDisagreement));
            }
            if is_excluded {
                necessary |= is_root != listed;
                continue;
            }
            self.report.checked += 1;
            match (is_root, listed) {
                (true, true) => self.report.matches += 1,
                (true, false) => self
                    .report
                    .violations
                    .push(violation(ViolationKind::RootWithoutType)),
                (false, true) => self
                    .report
                    .violations
                    .push(violation(ViolationKind::TypeWithoutRoot)),
                (false, false) => {}
            }
            if self.report.mode == Some(TheoremMode::Coarse) {
                let coarse = r.forms.iter().any(|e| self.coarse_listed(e));
                if coarse != is_root {
                    self.report
                        .coarse_counterexamples
                        .push(CoarseCounterexample {
                            alpha: alpha.clone(),
                            beta: r.beta.clone(),
                            expansion: main.expansion.clone(),
                            coarse_type: main.decomposition.coarse_type(),
                            direction: if is_root {
                                CoarseDirection::RootWithoutType
                            } else {
                                CoarseDirection::TypeWithoutRoot
                            },
                        });
                }
            }
        }
        if is_excluded {
            self.report.excluded.push(ExcludedModulus {
                modulus: alpha.clone(),
                certificates: self.excluded.certificates(alpha).to_vec(),
                necessary,
            });
        }
    }
}

/// Checks, for every `alpha <= alpha_max` outside the exceptional set, that the
/// roots of `spec` are exactly the `beta` whose convention expansion has length
/// parity `s` and an extended type with value `n`.
pub fn verify_main_theorem(
    spec: &CongruenceSpec,
    alpha_max: u64,
    mode: TheoremMode,
) -> Result<VerificationReport> {
    Ok(
        verify_main_theorem_many(std::slice::from_ref(spec), alpha_max, mode)?
            .pop()
            .expect("one report per spec"),
    )
}

/// [`verify_main_theorem`] for several specs, expanding each `alpha/beta` once.
pub fn verify_main_theorem_many(
    specs: &[CongruenceSpec],
    alpha_max: u64,
    mode: TheoremMode,
) -> Result<Vec<VerificationReport>> {
    let mut sweeps = specs
        .iter()
        .map(|s| SpecSweep::new(s, alpha_max, mode))
        .collect::<Result<Vec<_>>>()?;
    for a in 1..=alpha_max {
        let alpha = BigInt::from(a);
        let records = beta_records(&alpha);
        for sweep in &mut sweeps {
            sweep.visit(&alpha, &records);
        }
    }
    Ok(sweeps.into_iter().map(|s| s.report).collect())
}

/// One `(c ; x)` line of the table; `core` uses `p` for a free entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    #[serde(with = "crate::int_serde")]
    pub marginal: BigInt,
    pub core: String,
    pub parametric: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionPair {
    #[serde(with = "crate::int_serde")]
    pub alpha: BigInt,
    #[serde(with = "crate::int_serde")]
    pub beta: BigInt,
}

/// All types of one `(value, core-length parity)` group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(with = "crate::int_serde")]
    pub value: BigInt,
    pub parity: Parity,
    pub types: Vec<TableEntry>,
    pub exceptions: Vec<ExceptionPair>,
    /// False for the folded case `s = 0, n = 2`, which has no finite exceptional set.
    pub exceptions_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub n_max: u64,
    pub rows: Vec<TableRow>,
}

/// Coarse types with anticontinuant `n` for `1 <= n <= n_max`, split by core
/// length parity, with the solutions of `x^2 +- n x + (-1)^s` that no
/// expansion explains.
pub fn build_table(n_max: u64) -> Result<TableDocument> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let value = BigInt::from(n);
        for parity in [Parity::Even, Parity::Odd] {
            let view = enumerate_types(&value, parity.into())?.paper_view();
            let mut keyed: Vec<((usize, BigInt, bool), TableEntry)> = view
                .types
                .iter()
                .map(|t| {
                    (
                        (t.core.len(), t.c.clone(), false),
                        TableEntry {
                            marginal: t.c.clone(),
                            core: t.core.to_string(),
                            parametric: false,
                        },
                    )
                })
                .chain(view.families.iter().map(|f| {
                    (
                        (f.lambda(), f.c.clone(), true),
                        TableEntry {
                            marginal: f.c.clone(),
                            core: f.pattern_string(),
                            parametric: true,
                        },
                    )
                }))
                .collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let spec =
                CongruenceSpec::new(value.clone(), if parity == Parity::Even { 0 } else { 1 })?;
            let (exceptions, exceptions_defined) = if spec.is_folded() {
                (Vec::new(), false)
            } else {
                let pairs = true_exceptions(&spec, true)?
                    .into_iter()
                    .map(|(alpha, beta)| ExceptionPair { alpha, beta })
                    .collect();
                (pairs, true)
            };
            rows.push(TableRow {
                value: value.clone(),
                parity,
                types: keyed.into_iter().map(|(_, e)| e).collect(),
                exceptions,
                exceptions_defined,
            });
        }
    }
    Ok(TableDocument { n_max, rows })
}

impl TableRow {
    fn exceptions_cell(&self) -> String {
        if self.exceptions.is_empty() {
            "None".into()
        } else {
            self.exceptions
                .iter()
                .map(|p| format!("{}/{}", p.alpha, p.beta))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl TableDocument {
    /// Columns `value,parity,marginal,core,exceptions`; one line per type, core
    /// entries joined by `.`, exceptions as space-separated `alpha/beta` on
    /// the first line of each group.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,parity,marginal,core,exceptions\n");
        for row in &self.rows {
            for (i, t) in row.types.iter().enumerate() {
                let exceptions = if i == 0 {
                    row.exceptions_cell()
                } else {
                    String::new()
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.value,
                    row.parity,
                    t.marginal,
                    t.core.replace(',', "."),
                    exceptions
                );
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<12} {:>8}  {:<12} {}\n",
            "(value,len)", "marginal", "core", "exceptional (alpha,beta)"
        );
        for row in &self.rows {
            for (i, t) in row.types.iter().enumerate() {
                let head = if i == 0 {
                    format!("({}, {})", row.value, row.parity)
                } else {
                    String::new()
                };
                let exceptions = if i == 0 {
                    row.exceptions_cell()
                } else {
                    String::new()
                };
                let _ = writeln!(
                    out,
                    "{:<12} {:>8}  {:<12} {}",
                    head, t.marginal, t.core, exceptions
                );
            }
        }
        out
    }
}
