//! Isometric embeddings into the Euclidean space `diag(1^n)` and the
//! Lorentzian space `diag(1^{n-1}, λ)`.
//!
//! A degenerate source `0^k ⊕ S` embeds in `T` exactly when `S ⊕ H^k` does,
//! H the hyperbolic plane; by Witt cancellation this is `S ↪ T'` with
//! `T ≅ H^k ⊕ T'`. The nondegenerate question is settled by searching the
//! canonical forms for a complement `C` with `S ⊕ C ≅ T'`.

mod constants;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::forms::{canonical_list, canonical_with_invariants, DiagonalForm};
use crate::padic::PrimeContext;
use crate::symbols::{hilbert, SquareClass};

pub use constants::{hensel_constants, Co1, Co3, HenselConstants, NamedConstant};
pub use witness::{
    isotropic_witness, verify_witness, witness, witness_with, Witness, WitnessOptions,
    DEFAULT_WITNESS_PRECISION, DEFAULT_WITNESS_SEED, RETRY_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("a Lorentzian target needs n >= 1")]
    InvalidTarget,
    #[error("{form} does not embed in {target} ({reason})")]
    NotEmbeddable {
        form: String,
        target: TargetSpace,
        reason: Reason,
    },
    #[error("witness verification failed: {0}")]
    VerificationFailed(String),
    #[error("value search gave up after {attempts} attempts at step {step}")]
    RetryBudgetExhausted { step: usize, attempts: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Euclidean,
    Lorentzian,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::Euclidean => Family::Lorentzian,
            Family::Lorentzian => Family::Euclidean,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Family::Euclidean => "euclid",
            Family::Lorentzian => "lorentz",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclid" | "euclidean" => Ok(Family::Euclidean),
            "lorentz" | "lorentzian" => Ok(Family::Lorentzian),
            _ => Err(format!("unknown target family `{s}`")),
        }
    }
}

/// `Euclidean(n) = diag(1^n)`, `Lorentzian(n) = diag(1^{n-1}, λ)`.
///
/// `Euclidean(0)` is the zero space; it only arises as a reduced target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TargetSpace {
    pub family: Family,
    pub n: usize,
}

impl TargetSpace {
    pub fn new(family: Family, n: usize) -> Result<Self, EmbedError> {
        if family == Family::Lorentzian && n == 0 {
            return Err(EmbedError::InvalidTarget);
        }
        Ok(TargetSpace { family, n })
    }

    pub fn euclidean(n: usize) -> Self {
        TargetSpace {
            family: Family::Euclidean,
            n,
        }
    }

    /// Panics for `n = 0`.
    pub fn lorentzian(n: usize) -> Self {
        Self::new(Family::Lorentzian, n).expect("Lorentzian target needs n >= 1")
    }

    /// Diagonal entries as rationals: all 1, with λ last for Lorentzian.
    pub fn coefficients(&self, ctx: &PrimeContext) -> Vec<i64> {
        let mut c = vec![1i64; self.n];
        if self.family == Family::Lorentzian {
            c[self.n - 1] = ctx.lambda() as i64;
        }
        c
    }

    pub fn as_form(&self, ctx: &PrimeContext) -> DiagonalForm {
        match self.family {
            Family::Euclidean => DiagonalForm::ones(ctx, self.n),
            Family::Lorentzian => DiagonalForm::ones(ctx, self.n - 1)
                .direct_sum(&DiagonalForm::nondegenerate(ctx, vec![SquareClass::Lambda])),
        }
    }
}

impl fmt::Display for TargetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.token(), self.n)
    }
}

impl FromStr for TargetSpace {
    type Err = String;

    /// `euclid:N` or `lorentz:N`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (fam, n) = s
            .split_once(':')
            .ok_or_else(|| format!("expected FAMILY:N, got `{s}`"))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| format!("bad dimension in `{s}`"))?;
        TargetSpace::new(fam.trim().parse()?, n).map_err(|e| e.to_string())
    }
}

/// Why a decision came out the way it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    /// Same rank as the target and equal invariants.
    InvariantMatch,
    /// Same rank as the target, different invariants.
    InvariantMismatch,
    /// A canonical complement completes the source to the target.
    ComplementExists,
    /// No canonical complement of the right rank works.
    NoComplement,
    /// The reduced target is smaller than the nondegenerate part.
    RankExceedsTarget,
    /// The target has no totally isotropic subspace of dimension k.
    IsotropicBoundExceeded,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::InvariantMatch => "INVARIANT_MATCH",
            Reason::InvariantMismatch => "INVARIANT_MISMATCH",
            Reason::ComplementExists => "COMPLEMENT_EXISTS",
            Reason::NoComplement => "NO_COMPLEMENT",
            Reason::RankExceedsTarget => "RANK_EXCEEDS_TARGET",
            Reason::IsotropicBoundExceeded => "ISOTROPIC_BOUND_EXCEEDED",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Outcome of removing the radical: `0^k ⊕ S ↪ T` iff `S ↪ target`.
/// `target` is `None` when T has no k-dimensional totally isotropic subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub source: DiagonalForm,
    pub k: usize,
    pub original: TargetSpace,
    pub target: Option<TargetSpace>,
    /// Largest k the original target admits.
    pub k_bound: usize,
}

/// `diag(1, -1)`, written with class representatives.
fn hyperbolic_planes(ctx: &PrimeContext, k: usize) -> DiagonalForm {
    let m1 = SquareClass::minus_one(ctx);
    let mut classes = Vec::with_capacity(2 * k);
    for _ in 0..k {
        classes.push(SquareClass::One);
        classes.push(m1);
    }
    DiagonalForm::nondegenerate(ctx, classes)
}

/// The family space `T'` with `T ≅ H^k ⊕ T'`, if T contains `H^k`.
fn split_hyperbolic(ctx: &PrimeContext, t: TargetSpace, k: usize) -> Option<TargetSpace> {
    let m = t.n.checked_sub(2 * k)?;
    let goal = t.as_form(ctx).invariants();
    let hk = hyperbolic_planes(ctx, k);
    [Family::Euclidean, Family::Lorentzian]
        .into_iter()
        .filter_map(|fam| TargetSpace::new(fam, m).ok())
        .find(|cand| hk.direct_sum(&cand.as_form(ctx)).invariants() == goal)
        .or_else(|| {
            // T contains H^k only if some nondegenerate T' completes it
            let rest = (0..2)
                .flat_map(|h| SquareClass::ALL.into_iter().map(move |d| (d, 1 - 2 * h as i8)))
                .filter_map(|(d, h)| canonical_with_invariants(ctx, m, d, h))
                .find(|c| hk.direct_sum(c).invariants() == goal);
            assert!(
                rest.is_none(),
                "complement of H^{k} in {t} is not a family space"
            );
            None
        })
}

/// Largest k for which `T` contains `H^k`.
fn witt_index(ctx: &PrimeContext, t: TargetSpace) -> usize {
    (0..=t.n / 2)
        .rev()
        .find(|&k| split_hyperbolic(ctx, t, k).is_some())
        .unwrap_or(0)
}

pub fn reduce_degenerate(f: &DiagonalForm, t: TargetSpace) -> Reduction {
    let ctx = f.ctx();
    let k = f.zero_count();
    Reduction {
        source: f.nondegenerate_part(),
        k,
        original: t,
        target: split_hyperbolic(ctx, t, k),
        k_bound: witt_index(ctx, t),
    }
}

/// Verdict plus the data that justifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedDecision {
    pub embeds: bool,
    pub reason: Reason,
    pub reduction: Reduction,
    /// The canonical complement found, when `reason` is `ComplementExists`.
    pub complement: Option<DiagonalForm>,
}

fn complements(ctx: &PrimeContext, rank: usize) -> Vec<DiagonalForm> {
    match rank {
        0 => vec![DiagonalForm::nondegenerate(ctx, Vec::new())],
        1..=3 => canonical_list(ctx, rank),
        r => canonical_list(ctx, 3)
            .into_iter()
            .map(|q| DiagonalForm::ones(ctx, r - 3).direct_sum(&q))
            .collect(),
    }
}

/// Nondegenerate `s` into an arbitrary nondegenerate `t`, by complement
/// enumeration. Returns the verdict, its reason and the complement found.
pub fn embeds_in_form(s: &DiagonalForm, t: &DiagonalForm) -> (bool, Reason, Option<DiagonalForm>) {
    assert!(s.is_nondegenerate() && t.is_nondegenerate());
    let (sr, n) = (s.rank(), t.rank());
    if sr > n {
        return (false, Reason::RankExceedsTarget, None);
    }
    let goal = t.invariants();
    if sr == n {
        return if s.invariants() == goal {
            (true, Reason::InvariantMatch, None)
        } else {
            (false, Reason::InvariantMismatch, None)
        };
    }
    match complements(s.ctx(), n - sr)
        .into_iter()
        .find(|c| s.direct_sum(c).invariants() == goal)
    {
        Some(c) => (true, Reason::ComplementExists, Some(c)),
        None => (false, Reason::NoComplement, None),
    }
}

/// The same question answered by invariant arithmetic alone: cancellation
/// forces `d(C) = d(T)d(S)` and `ε(C) = ε(T)ε(S)(d(S), d(C))`; such a C
/// exists unless its rank is 0 and the pair is not trivial, its rank is 1
/// and ε(C) = -1, or its rank is 2 with `d(C) = -1` and ε(C) = -1.
pub fn embeds_by_invariants(s: &DiagonalForm, t: &DiagonalForm) -> bool {
    let ctx = s.ctx();
    let (sr, n) = (s.rank(), t.rank());
    if sr > n {
        return false;
    }
    let (ds, dt) = (s.disc(), t.disc());
    let dc = dt.mul(ds);
    let ec = t.hasse() * s.hasse() * hilbert(ds, dc, ctx);
    match n - sr {
        0 => dc == SquareClass::One && ec == 1,
        1 => ec == 1,
        2 => !(dc == SquareClass::minus_one(ctx) && ec == -1),
        _ => true,
    }
}

/// Nondegenerate `s` into a family target.
pub fn embeds_nondegenerate(s: &DiagonalForm, t: TargetSpace) -> EmbedDecision {
    let (embeds, reason, complement) = embeds_in_form(s, &t.as_form(s.ctx()));
    EmbedDecision {
        embeds,
        reason,
        reduction: Reduction {
            source: s.clone(),
            k: 0,
            original: t,
            target: Some(t),
            k_bound: witt_index(s.ctx(), t),
        },
        complement,
    }
}

pub fn decide(f: &DiagonalForm, t: TargetSpace) -> EmbedDecision {
    let reduction = reduce_degenerate(f, t);
    let Some(rt) = reduction.target else {
        return EmbedDecision {
            embeds: false,
            reason: Reason::IsotropicBoundExceeded,
            reduction,
            complement: None,
        };
    };
    let (embeds, reason, complement) = embeds_in_form(&reduction.source, &rt.as_form(f.ctx()));
    EmbedDecision {
        embeds,
        reason,
        reduction,
        complement,
    }
}

/// Smallest n with `f ↪ family(n)`. For `f = 0^k ⊕ S` of rank r the scan
/// stops by `n = 2k + r + 3`, where a rank-3 complement always exists.
pub fn min_dimension(f: &DiagonalForm, family: Family) -> usize {
    let start = f.dim().max(1);
    let bound = 2 * f.zero_count() + f.rank() + 3;
    (start..=bound.max(start))
        .find(|&n| decide(f, TargetSpace { family, n }).embeds)
        .expect("a rank-3 complement always exists")
}

/// Largest k with `0^k ↪ t`.
pub fn max_isotropic_dim(t: TargetSpace, ctx: &PrimeContext) -> usize {
    (0..=t.n / 2)
        .rev()
        .find(|&k| decide(&DiagonalForm::zeros(ctx, k), t).embeds)
        .unwrap_or(0)
}

/// Description of the nondegenerate query actually tested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedQuery {
    pub source: String,
    pub zero_count: usize,
    pub target: TargetSpace,
    pub reduced_target: Option<TargetSpace>,
    pub k_bound: usize,
    pub complement: Option<String>,
}

/// JSON decision record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub embeds: bool,
    pub min_n: Option<usize>,
    pub reason: Reason,
    pub reduced: ReducedQuery,
    pub witness: Option<Vec<Vec<String>>>,
    pub precision: u32,
}

impl DecisionRecord {
    pub fn new(d: &EmbedDecision, min_n: Option<usize>, w: Option<&Witness>, precision: u32) -> Self {
        let r = &d.reduction;
        DecisionRecord {
            embeds: d.embeds,
            min_n,
            reason: d.reason,
            reduced: ReducedQuery {
                source: r.source.to_dsl(),
                zero_count: r.k,
                target: r.original,
                reduced_target: r.target,
                k_bound: r.k_bound,
                complement: d.complement.as_ref().map(DiagonalForm::to_dsl),
            },
            witness: w.map(Witness::to_strings),
            precision,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;
    use SquareClass::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn e(n: usize) -> TargetSpace {
        TargetSpace::euclidean(n)
    }

    fn l(n: usize) -> TargetSpace {
        TargetSpace::lorentzian(n)
    }

    fn nd(c: &PrimeContext, cls: &[SquareClass]) -> DiagonalForm {
        DiagonalForm::nondegenerate(c, cls.to_vec())
    }

    #[test]
    fn nondegenerate_examples() {
        let c5 = ctx(5);
        assert!(embeds_nondegenerate(&nd(&c5, &[P]), e(2)).embeds);
        let d = embeds_nondegenerate(&nd(&c5, &[P]), l(2));
        assert_eq!((d.embeds, d.reason), (false, Reason::NoComplement));
        let c7 = ctx(7);
        assert!(!embeds_nondegenerate(&nd(&c7, &[P]), e(2)).embeds);
        assert!(embeds_nondegenerate(&nd(&c7, &[P]), l(2)).embeds);
        let d = embeds_nondegenerate(&nd(&c7, &[P, P, P]), e(2));
        assert_eq!(d.reason, Reason::RankExceedsTarget);
    }

    #[test]
    fn reductions() {
        let c = ctx(13);
        let f = parse_form("diag(p,0^2)", &c).unwrap();
        let r = reduce_degenerate(&f, e(7));
        assert_eq!(r.target, Some(e(3)));
        assert_eq!(r.source, nd(&c, &[P]));
        let r = reduce_degenerate(&DiagonalForm::zeros(&c, 3), l(6));
        assert_eq!((r.target, r.k_bound), (None, 2));
        let d = decide(&DiagonalForm::zeros(&c, 3), l(6));
        assert_eq!(d.reason, Reason::IsotropicBoundExceeded);
        // k = 0 leaves the query alone
        for t in [e(4), l(4), e(6)] {
            let r = reduce_degenerate(&nd(&c, &[Lambda]), t);
            assert_eq!(r.target, Some(t));
        }
        let c3 = ctx(3);
        for t in [e(6), l(6), l(5), e(1)] {
            assert_eq!(reduce_degenerate(&nd(&c3, &[P]), t).target, Some(t));
        }
    }

    #[test]
    fn three_mod_four_switches_family_with_odd_k() {
        let c = ctx(7);
        let z = |k| DiagonalForm::zeros(&c, k);
        assert_eq!(reduce_degenerate(&z(1), e(5)).target, Some(l(3)));
        assert_eq!(reduce_degenerate(&z(2), e(5)).target, Some(e(1)));
        assert_eq!(reduce_degenerate(&z(1), l(5)).target, Some(e(3)));
        assert_eq!(reduce_degenerate(&z(3), e(6)).target, None);
        assert_eq!(reduce_degenerate(&z(3), l(6)).target, Some(e(0)));
        assert_eq!(reduce_degenerate(&z(2), l(4)).target, None);
        assert_eq!(reduce_degenerate(&z(2), e(4)).target, Some(e(0)));
    }

    #[test]
    fn decide_examples() {
        let c = ctx(5);
        let one = |k| DiagonalForm::new(&c, k, vec![One]);
        for n in 1..=12usize {
            for k in 0..=6usize {
                assert_eq!(decide(&one(k), e(n)).embeds, 2 * k + 1 <= n, "n={n} k={k}");
            }
        }
        let hard = |k| DiagonalForm::new(&c, k, vec![Lambda, P, LambdaP]);
        for n in 1..=14usize {
            for k in 0..=6usize {
                assert_eq!(decide(&hard(k), e(n)).embeds, 2 * k + 6 <= n);
            }
        }
        let c13 = ctx(13);
        let f = nd(&c13, &[P, LambdaP]);
        assert!(!decide(&f, l(4)).embeds);
        assert!(decide(&f, l(5)).embeds);
    }

    #[test]
    fn min_dimension_examples() {
        let c5 = ctx(5);
        assert_eq!(min_dimension(&nd(&c5, &[Lambda, P, LambdaP]), Family::Euclidean), 6);
        for m in 1..6 {
            assert_eq!(min_dimension(&DiagonalForm::ones(&c5, m), Family::Euclidean), m);
        }
        let c3 = ctx(3);
        assert_eq!(min_dimension(&nd(&c3, &[One, P, P]), Family::Lorentzian), 6);
        // a large radical needs more than dim + 6
        let f = DiagonalForm::new(&c5, 6, vec![Lambda, P, LambdaP]);
        assert_eq!(min_dimension(&f, Family::Euclidean), 18);
    }

    #[test]
    fn isotropic_examples() {
        assert_eq!(max_isotropic_dim(e(4), &ctx(5)), 2);
        assert_eq!(max_isotropic_dim(l(4), &ctx(5)), 1);
        assert_eq!(max_isotropic_dim(e(4), &ctx(3)), 2);
        assert_eq!(max_isotropic_dim(e(6), &ctx(3)), 2);
        assert_eq!(max_isotropic_dim(l(6), &ctx(3)), 3);
    }

    #[test]
    fn target_parsing() {
        assert_eq!("euclid:4".parse::<TargetSpace>(), Ok(e(4)));
        assert_eq!("lorentz:1".parse::<TargetSpace>(), Ok(l(1)));
        assert!("lorentz:0".parse::<TargetSpace>().is_err());
        assert!("minkowski:3".parse::<TargetSpace>().is_err());
        assert_eq!(l(3).as_form(&ctx(7)).classes(), &[One, One, Lambda]);
    }

    #[test]
    fn reason_codes_serialize() {
        let s = serde_json::to_string(&Reason::IsotropicBoundExceeded).unwrap();
        assert_eq!(s, "\"ISOTROPIC_BOUND_EXCEEDED\"");
        for r in [Reason::InvariantMatch, Reason::NoComplement, Reason::RankExceedsTarget] {
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.code()));
        }
    }
}
