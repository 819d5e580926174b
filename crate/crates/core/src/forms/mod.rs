//! Quadratic spaces over Q_p: diagonal models, invariants, canonical forms.

mod canonical;
mod dsl;
mod gram;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::padic::PrimeContext;
use crate::symbols::{hilbert, SquareClass};

pub use canonical::{canonical, canonical_list, canonical_rank3, canonical_with_invariants};
pub use dsl::parse_form;
pub use gram::{diagonalize, Diagonalization, GramForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("Gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Gram matrix shape does not match n = {0}")]
    BadShape(usize),
    #[error("invalid Gram JSON: {0}")]
    Json(String),
}

/// `diag(0^k) ⊕ diag(c_1, ..., c_r)` with each `c_i` a class representative.
#[derive(Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    ctx: PrimeContext,
    zero_count: usize,
    classes: Vec<SquareClass>,
}

/// Dimension, rank and the invariants of the nondegenerate part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormInvariants {
    pub dim: usize,
    pub rank: usize,
    pub disc: SquareClass,
    pub hasse: i8,
}

impl DiagonalForm {
    pub fn new(ctx: &PrimeContext, zero_count: usize, classes: Vec<SquareClass>) -> Self {
        DiagonalForm {
            ctx: ctx.clone(),
            zero_count,
            classes,
        }
    }

    pub fn nondegenerate(ctx: &PrimeContext, classes: Vec<SquareClass>) -> Self {
        Self::new(ctx, 0, classes)
    }

    pub fn zeros(ctx: &PrimeContext, k: usize) -> Self {
        Self::new(ctx, k, Vec::new())
    }

    /// `diag(1^n)`.
    pub fn ones(ctx: &PrimeContext, n: usize) -> Self {
        Self::new(ctx, 0, vec![SquareClass::One; n])
    }

    #[inline]
    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    #[inline]
    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    #[inline]
    pub fn classes(&self) -> &[SquareClass] {
        &self.classes
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.zero_count + self.classes.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero_count == 0
    }

    /// The nondegenerate part `S`.
    pub fn nondegenerate_part(&self) -> DiagonalForm {
        Self::new(&self.ctx, 0, self.classes.clone())
    }

    pub fn disc(&self) -> SquareClass {
        self.classes
            .iter()
            .fold(SquareClass::One, |acc, &c| acc.mul(c))
    }

    pub fn hasse(&self) -> i8 {
        let mut e = 1i8;
        for (i, &a) in self.classes.iter().enumerate() {
            for &b in &self.classes[i + 1..] {
                e *= hilbert(a, b, &self.ctx);
            }
        }
        e
    }

    pub fn invariants(&self) -> FormInvariants {
        FormInvariants {
            dim: self.dim(),
            rank: self.rank(),
            disc: self.disc(),
            hasse: self.hasse(),
        }
    }

    pub fn equivalent(&self, other: &DiagonalForm) -> bool {
        assert_eq!(self.ctx, other.ctx, "forms over different primes");
        self.zero_count == other.zero_count && self.invariants() == other.invariants()
    }

    pub fn direct_sum(&self, other: &DiagonalForm) -> DiagonalForm {
        assert_eq!(self.ctx, other.ctx, "forms over different primes");
        let mut classes = self.classes.clone();
        classes.extend_from_slice(&other.classes);
        Self::new(&self.ctx, self.zero_count + other.zero_count, classes)
    }

    /// Canonical representative with the same invariants.
    pub fn canonical(&self) -> DiagonalForm {
        canonical(self)
    }

    /// DSL rendering, e.g. `diag(1^2,lp,0^3)`.
    pub fn to_dsl(&self) -> String {
        let mut items: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.classes.len() {
            let c = self.classes[i];
            let run = self.classes[i..].iter().take_while(|&&x| x == c).count();
            items.push(if run > 1 {
                format!("{c}^{run}")
            } else {
                c.to_string()
            });
            i += run;
        }
        match self.zero_count {
            0 => {}
            1 => items.push("0".into()),
            k => items.push(format!("0^{k}")),
        }
        format!("diag({})", items.join(","))
    }
}

impl fmt::Debug for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ p={}", self.to_dsl(), self.ctx.p())
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

pub fn invariants(f: &DiagonalForm) -> FormInvariants {
    f.invariants()
}

pub fn equivalent(f1: &DiagonalForm, f2: &DiagonalForm) -> bool {
    f1.equivalent(f2)
}

pub fn direct_sum(f1: &DiagonalForm, f2: &DiagonalForm) -> DiagonalForm {
    f1.direct_sum(f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SquareClass::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn d(c: &PrimeContext, cls: &[SquareClass]) -> DiagonalForm {
        DiagonalForm::nondegenerate(c, cls.to_vec())
    }

    #[test]
    fn invariant_examples() {
        let c = ctx(5);
        let inv = d(&c, &[One, Lambda]).invariants();
        assert_eq!((inv.disc, inv.hasse), (Lambda, 1));

        // (λ,p)(λ,λp)(p,λp) with each factor -1
        let inv = d(&c, &[Lambda, P, LambdaP]).invariants();
        assert_eq!(
            hilbert(Lambda, P, &c) * hilbert(Lambda, LambdaP, &c) * hilbert(P, LambdaP, &c),
            -1
        );
        assert_eq!((inv.disc, inv.hasse), (One, -1));

        for p in [3u64, 5, 7] {
            let inv = d(&ctx(p), &[P]).invariants();
            assert_eq!((inv.disc, inv.hasse), (P, 1));
        }
    }

    #[test]
    fn degenerate_part_only_adds_dimension() {
        let c = ctx(7);
        let f = DiagonalForm::new(&c, 3, vec![P, P]);
        let inv = f.invariants();
        assert_eq!((inv.dim, inv.rank, inv.disc, inv.hasse), (5, 2, One, -1));
        assert_eq!(DiagonalForm::zeros(&c, 4).invariants().hasse, 1);
    }

    #[test]
    fn equivalence_examples() {
        let c5 = ctx(5);
        assert!(d(&c5, &[One, One]).equivalent(&d(&c5, &[Lambda, Lambda])));
        let c7 = ctx(7);
        assert!(!d(&c7, &[One, One]).equivalent(&d(&c7, &[P, P])));
        let f = DiagonalForm::new(&c7, 2, vec![Lambda, P]);
        assert!(f.equivalent(&f));
        assert!(!f.equivalent(&DiagonalForm::new(&c7, 1, vec![Lambda, P])));
    }

    #[test]
    fn direct_sum_examples() {
        let c = ctx(13);
        let s = DiagonalForm::zeros(&c, 2).direct_sum(&d(&c, &[P]));
        assert_eq!((s.zero_count(), s.classes()), (2, &[P][..]));
        let s = d(&c, &[One]).direct_sum(&d(&c, &[Lambda]));
        assert_eq!(s, d(&c, &[One, Lambda]));
    }

    #[test]
    fn dsl_rendering() {
        let c = ctx(3);
        let f = DiagonalForm::new(&c, 3, vec![One, One, LambdaP, P]);
        assert_eq!(f.to_dsl(), "diag(1^2,lp,p,0^3)");
        assert_eq!(DiagonalForm::zeros(&c, 1).to_dsl(), "diag(0)");
        assert_eq!(DiagonalForm::zeros(&c, 0).to_dsl(), "diag()");
    }
}
