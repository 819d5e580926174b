//! Finite-precision arithmetic in Q_p for odd primes.
//!
//! Numbers carry a certified valuation and a unit known modulo `p^N`.
//! Every operation either returns a value whose valuation is correct or
//! fails with [`PadicError::PrecisionExhausted`].

mod context;
mod hensel;
mod number;
mod text;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub use context::{is_prime, PrimeContext, DEFAULT_PRECISION, MAX_PRIME};
pub use hensel::{hensel_lift, IntPoly};
pub use number::PAdic;
pub use text::parse_rational;

pub(crate) use hensel::square_minus;
pub(crate) use number::{inv_mod, mod_pos, split_p, sqrt_mod_prime};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("precision {0} is below the minimum of 4 digits")]
    InvalidPrecision(u32),
    #[error("cancellation exhausted all known digits (value is 0 mod p^{absolute_precision})")]
    PrecisionExhausted { absolute_precision: i64 },
    #[error("value is not a square in Q_p")]
    NotASquare,
    #[error("x0 is not a simple root modulo p")]
    NotASimpleRoot,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined for zero")]
    ZeroValue,
    #[error("residue is divisible by p")]
    NotAUnit,
    #[error("value is not a p-adic integer")]
    NotIntegral,
    #[error("cannot parse p-adic value `{0}`")]
    Parse(String),
}

/// Legendre symbol (u/p) by Euler's criterion: 0 if p | u, else ±1.
pub fn legendre(u: &BigInt, ctx: &PrimeContext) -> i8 {
    let p = ctx.p_big();
    let r = u.mod_floor(p);
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    let s = r.modpow(&e, p);
    if s.to_u64() == Some(1) {
        1
    } else {
        -1
    }
}
