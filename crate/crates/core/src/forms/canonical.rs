//! Canonical representatives of nondegenerate classes.
//!
//! Rank 2 and rank 3 use fixed lists (one per residue class of p mod 4);
//! a form of rank r > 3 is `diag(1^{r-3}) ⊕ Q'` with Q' canonical of rank 3.

use crate::padic::PrimeContext;
use crate::symbols::SquareClass::{self, *};

use super::DiagonalForm;

const RANK2_P1: [[SquareClass; 2]; 7] = [
    [One, One],
    [One, Lambda],
    [One, P],
    [One, LambdaP],
    [Lambda, P],
    [Lambda, LambdaP],
    [P, LambdaP],
];

const RANK2_P3: [[SquareClass; 2]; 7] = [
    [One, One],
    [P, P],
    [One, Lambda],
    [One, P],
    [One, LambdaP],
    [Lambda, P],
    [Lambda, LambdaP],
];

const RANK3_P1: [[SquareClass; 3]; 8] = [
    [One, One, One],
    [Lambda, P, LambdaP],
    [One, One, Lambda],
    [One, One, P],
    [One, One, LambdaP],
    [One, Lambda, P],
    [One, Lambda, LambdaP],
    [One, P, LambdaP],
];

const RANK3_P3: [[SquareClass; 3]; 8] = [
    [One, One, One],
    [One, P, P],
    [One, One, P],
    [P, P, P],
    [One, Lambda, P],
    [One, One, LambdaP],
    [P, P, Lambda],
    [One, P, LambdaP],
];

/// The canonical forms of rank 1, 2 or 3, in list order.
pub fn canonical_list(ctx: &PrimeContext, rank: usize) -> Vec<DiagonalForm> {
    let p1 = ctx.residue_mod4() == 1;
    let mk = |c: &[SquareClass]| DiagonalForm::nondegenerate(ctx, c.to_vec());
    match (rank, p1) {
        (1, _) => SquareClass::ALL.iter().map(|&c| mk(&[c])).collect(),
        (2, true) => RANK2_P1.iter().map(|c| mk(c)).collect(),
        (2, false) => RANK2_P3.iter().map(|c| mk(c)).collect(),
        (3, true) => RANK3_P1.iter().map(|c| mk(c)).collect(),
        (3, false) => RANK3_P3.iter().map(|c| mk(c)).collect(),
        _ => panic!("canonical lists exist for rank 1..=3, got {rank}"),
    }
}

fn lookup(ctx: &PrimeContext, rank: usize, disc: SquareClass, hasse: i8) -> Option<DiagonalForm> {
    canonical_list(ctx, rank).into_iter().find(|f| {
        let inv = f.invariants();
        inv.disc == disc && inv.hasse == hasse
    })
}

/// The rank-3 canonical form with the given discriminant and Hasse invariant.
pub fn canonical_rank3(ctx: &PrimeContext, disc: SquareClass, hasse: i8) -> DiagonalForm {
    lookup(ctx, 3, disc, hasse).expect("every (disc, hasse) pair occurs in rank 3")
}

/// The canonical nondegenerate form of the given rank and invariants, if one
/// exists.
pub fn canonical_with_invariants(
    ctx: &PrimeContext,
    rank: usize,
    disc: SquareClass,
    hasse: i8,
) -> Option<DiagonalForm> {
    match rank {
        0 => (disc == One && hasse == 1).then(|| DiagonalForm::nondegenerate(ctx, Vec::new())),
        1..=3 => lookup(ctx, rank, disc, hasse),
        r => {
            let mut out = DiagonalForm::ones(ctx, r - 3);
            out = out.direct_sum(&canonical_rank3(ctx, disc, hasse));
            Some(out)
        }
    }
}

/// The unique canonical representative with the same zero count and
/// invariants as `f`.
pub fn canonical(f: &DiagonalForm) -> DiagonalForm {
    let inv = f.invariants();
    let nd = canonical_with_invariants(f.ctx(), inv.rank, inv.disc, inv.hasse)
        .expect("invariants of an existing form are realizable");
    DiagonalForm::zeros(f.ctx(), f.zero_count()).direct_sum(&nd)
}
