//! Square classes of Q_p^x and the Hilbert symbol.
//!
//! For odd p the group Q_p^x / (Q_p^x)^2 has four elements, represented by
//! `1`, `λ`, `p` and `λp` where λ is the least positive nonresidue mod p.
//! The Hilbert symbol on these representatives is a fixed 4x4 table that
//! depends only on p mod 4.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::padic::{legendre, split_p, PAdic, PrimeContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("zero has no square class")]
pub struct ZeroHasNoClass;

/// One of the four square classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "l")]
    Lambda,
    #[serde(rename = "p")]
    P,
    #[serde(rename = "lp")]
    LambdaP,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [
        SquareClass::One,
        SquareClass::Lambda,
        SquareClass::P,
        SquareClass::LambdaP,
    ];

    /// Builds a class from (valuation parity, Legendre sign of the unit).
    pub fn from_parts(odd_valuation: bool, unit_is_residue: bool) -> Self {
        match (odd_valuation, unit_is_residue) {
            (false, true) => SquareClass::One,
            (false, false) => SquareClass::Lambda,
            (true, true) => SquareClass::P,
            (true, false) => SquareClass::LambdaP,
        }
    }

    pub fn odd_valuation(self) -> bool {
        matches!(self, SquareClass::P | SquareClass::LambdaP)
    }

    pub fn nonresidue_unit(self) -> bool {
        matches!(self, SquareClass::Lambda | SquareClass::LambdaP)
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Group law: (Z/2)^2 on (valuation parity, unit sign).
    pub fn mul(self, other: SquareClass) -> SquareClass {
        SquareClass::from_parts(
            self.odd_valuation() ^ other.odd_valuation(),
            self.nonresidue_unit() == other.nonresidue_unit(),
        )
    }

    /// The integer representative: 1, λ, p or λp.
    pub fn representative(self, ctx: &PrimeContext) -> BigInt {
        let l = BigInt::from(ctx.lambda());
        let p = ctx.p_big().clone();
        match self {
            SquareClass::One => BigInt::from(1),
            SquareClass::Lambda => l,
            SquareClass::P => p,
            SquareClass::LambdaP => l * p,
        }
    }

    pub fn representative_rational(self, ctx: &PrimeContext) -> BigRational {
        BigRational::from_integer(self.representative(ctx))
    }

    /// Class of -1: trivial when p ≡ 1 mod 4, λ when p ≡ 3 mod 4.
    pub fn minus_one(ctx: &PrimeContext) -> SquareClass {
        if ctx.residue_mod4() == 1 {
            SquareClass::One
        } else {
            SquareClass::Lambda
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SquareClass::One => "1",
            SquareClass::Lambda => "l",
            SquareClass::P => "p",
            SquareClass::LambdaP => "lp",
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SquareClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(SquareClass::One),
            "l" => Ok(SquareClass::Lambda),
            "p" => Ok(SquareClass::P),
            "lp" => Ok(SquareClass::LambdaP),
            _ => Err(format!("unknown square class `{s}`")),
        }
    }
}

/// Hilbert symbol table over class representatives, indexed in the order
/// `1, λ, p, λp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertTable {
    pub residue_class: u8,
    pub entries: [[i8; 4]; 4],
}

/// p ≡ 1 mod 4.
pub const HILBERT_TABLE_1: HilbertTable = HilbertTable {
    residue_class: 1,
    entries: [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
};

/// p ≡ 3 mod 4.
pub const HILBERT_TABLE_3: HilbertTable = HilbertTable {
    residue_class: 3,
    entries: [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, -1, 1],
        [1, -1, 1, -1],
    ],
};

impl HilbertTable {
    pub fn for_context(ctx: &PrimeContext) -> &'static HilbertTable {
        if ctx.residue_mod4() == 1 {
            &HILBERT_TABLE_1
        } else {
            &HILBERT_TABLE_3
        }
    }

    #[inline]
    pub fn get(&self, a: SquareClass, b: SquareClass) -> i8 {
        self.entries[a.index()][b.index()]
    }
}

/// Square class of a nonzero rational.
pub fn classify_rational(x: &BigRational, ctx: &PrimeContext) -> Result<SquareClass, ZeroHasNoClass> {
    if x.is_zero() {
        return Err(ZeroHasNoClass);
    }
    let p = ctx.p_big();
    let (a, n) = split_p(x.numer(), p);
    let (b, d) = split_p(x.denom(), p);
    let odd = (a + b) % 2 == 1;
    // legendre(n/d) = legendre(n * d)
    Ok(SquareClass::from_parts(odd, legendre(&(n * d), ctx) == 1))
}

/// Square class of a nonzero p-adic number.
pub fn classify(x: &PAdic) -> Result<SquareClass, ZeroHasNoClass> {
    let v = x.valuation().ok_or(ZeroHasNoClass)?;
    let lead = x.leading_digit().ok_or(ZeroHasNoClass)?;
    Ok(SquareClass::from_parts(
        v.rem_euclid(2) == 1,
        legendre(&BigInt::from(lead), x.ctx()) == 1,
    ))
}

/// Hilbert symbol of two classes.
pub fn hilbert(a: SquareClass, b: SquareClass, ctx: &PrimeContext) -> i8 {
    HilbertTable::for_context(ctx).get(a, b)
}

/// Hilbert symbol of two nonzero rationals.
pub fn hilbert_general(
    a: &BigRational,
    b: &BigRational,
    ctx: &PrimeContext,
) -> Result<i8, ZeroHasNoClass> {
    Ok(hilbert(
        classify_rational(a, ctx)?,
        classify_rational(b, ctx)?,
        ctx,
    ))
}
