use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::PadicError;

/// Default number of stored unit digits.
pub const DEFAULT_PRECISION: u32 = 32;

/// Largest prime accepted by [`PrimeContext::new`].
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[derive(Debug)]
struct Inner {
    p: u64,
    lambda: u64,
    default_precision: u32,
    p_big: BigInt,
}

/// An odd prime together with its canonical nonresidue and working precision.
///
/// Cloning is cheap; the context is immutable and shared by every number built
/// from it.
#[derive(Clone)]
pub struct PrimeContext(Arc<Inner>);

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self, PadicError> {
        Self::with_precision(p, DEFAULT_PRECISION)
    }

    pub fn with_precision(p: u64, default_precision: u32) -> Result<Self, PadicError> {
        if p == 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(PadicError::InvalidPrime(p));
        }
        if default_precision < 4 {
            return Err(PadicError::InvalidPrecision(default_precision));
        }
        let lambda = least_nonresidue(p);
        Ok(PrimeContext(Arc::new(Inner {
            p,
            lambda,
            default_precision,
            p_big: BigInt::from(p),
        })))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p
    }

    #[inline]
    pub fn p_big(&self) -> &BigInt {
        &self.0.p_big
    }

    /// Least positive quadratic nonresidue modulo p.
    #[inline]
    pub fn lambda(&self) -> u64 {
        self.0.lambda
    }

    #[inline]
    pub fn default_precision(&self) -> u32 {
        self.0.default_precision
    }

    /// p mod 4, either 1 or 3.
    #[inline]
    pub fn residue_mod4(&self) -> u8 {
        (self.0.p % 4) as u8
    }

    pub fn p_pow(&self, e: u32) -> BigInt {
        num_traits::pow(self.0.p_big.clone(), e as usize)
    }

    /// Same prime, different default precision.
    pub fn with_default_precision(&self, default_precision: u32) -> Result<Self, PadicError> {
        Self::with_precision(self.0.p, default_precision)
    }
}

impl PartialEq for PrimeContext {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
    }
}

impl Eq for PrimeContext {}

impl fmt::Debug for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeContext")
            .field("p", &self.0.p)
            .field("lambda", &self.0.lambda)
            .field("default_precision", &self.0.default_precision)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| pow_mod_u64(a, (p - 1) / 2, p) == p - 1)
        .expect("every odd prime has a nonresidue")
}
