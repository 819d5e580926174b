//! Brute-force reference implementations for tests.
//!
//! Everything here is decided by searching for zeros of diagonal forms
//! modulo `p^m`, with no use of the Hilbert tables or Euler's criterion:
//!
//! * a primitive integer vector `x` with `v(f(x)) > 2e`, `e` the least
//!   valuation of a partial derivative, lifts to a true zero (Hensel), so
//!   the form is isotropic;
//! * if no primitive vector satisfies `f(x) ≡ 0 mod p^r` for some `r ≤ m`,
//!   the form is anisotropic;
//! * otherwise the answer is `Inconclusive`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::forms::{DiagonalForm, FormInvariants};
use crate::padic::PrimeContext;
use crate::symbols::SquareClass;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("no certificate and no refutation modulo p^{0}")]
    Inconclusive(u32),
    #[error("oracle needs a nonzero input")]
    Zero,
    #[error("search space too large for p = {0}")]
    TooLarge(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Search depth m: solutions are sought modulo `p^m`.
    pub modulus_exponent: u32,
    /// Trials per randomized property.
    pub sample_count: usize,
    pub rng_seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            modulus_exponent: 6,
            sample_count: 200,
            rng_seed: 20_240_601,
        }
    }
}

impl OracleConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.rng_seed)
    }
}

/// Candidate vectors kept per level before giving up.
const MAX_CANDIDATES: usize = 4_000_000;

/// Splits off the power of p: `(v, rest)`.
fn strip(mut n: BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// `p^{0|1} * u` with the same square class as `q`, `u` reduced mod `p^m`.
fn normalize(q: &BigRational, p: &BigInt, pm: &BigInt) -> Result<(bool, i128), OracleError> {
    if q.is_zero() {
        return Err(OracleError::Zero);
    }
    // q = n/d ~ n*d
    let (a, n) = strip(q.numer().clone(), p);
    let (b, d) = strip(q.denom().clone(), p);
    let u = ((n * d) % pm + pm) % pm;
    Ok(((a + b) % 2 == 1, u.to_i128().expect("reduced mod p^m")))
}

struct Search {
    p: i128,
    m: u32,
    coeffs: Vec<i128>,
}

impl Search {
    fn val(&self, mut x: i128) -> u32 {
        if x == 0 {
            return u32::MAX;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn eval(&self, x: &[i128]) -> i128 {
        self.coeffs.iter().zip(x).map(|(a, xi)| a * xi * xi).sum()
    }

    /// Hensel certificate on the integer vector itself.
    fn certified(&self, x: &[i128]) -> bool {
        let fx = self.eval(x);
        if fx == 0 {
            return true;
        }
        let e = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(a, xi)| self.val(2 * a * xi))
            .min()
            .unwrap_or(u32::MAX);
        e != u32::MAX && self.val(fx) > 2 * e
    }

    fn isotropic(&self) -> Result<bool, OracleError> {
        let dim = self.coeffs.len();
        let p = self.p;
        // level 1: primitive vectors mod p with leading nonzero entry 1
        let mut level: Vec<Vec<i128>> = Vec::new();
        for lead in 0..dim {
            let free = dim - lead - 1;
            let total = (p as u128).pow(free as u32);
            for mut idx in 0..total {
                let mut x = vec![0i128; dim];
                x[lead] = 1;
                for xi in x.iter_mut().skip(lead + 1) {
                    *xi = (idx % p as u128) as i128;
                    idx /= p as u128;
                }
                if self.eval(&x).rem_euclid(p) == 0 {
                    if self.certified(&x) {
                        return Ok(true);
                    }
                    level.push(x);
                }
            }
        }
        let mut pr = p;
        for _ in 2..=self.m {
            if level.is_empty() {
                return Ok(false);
            }
            let next_mod = pr * p;
            let mut next = Vec::new();
            for x in &level {
                // the first unit coordinate stays fixed at 1
                let lead = (0..dim).find(|&i| x[i] % p != 0).expect("primitive");
                let free: Vec<usize> = (0..dim).filter(|&i| i != lead).collect();
                let total = (p as u128).pow(free.len() as u32);
                for mut idx in 0..total {
                    let mut y = x.clone();
                    for &i in &free {
                        y[i] += (idx % p as u128) as i128 * pr;
                        idx /= p as u128;
                    }
                    if self.eval(&y).rem_euclid(next_mod) == 0 {
                        if self.certified(&y) {
                            return Ok(true);
                        }
                        next.push(y);
                        if next.len() > MAX_CANDIDATES {
                            return Err(OracleError::Inconclusive(self.m));
                        }
                    }
                }
            }
            level = next;
            pr = next_mod;
        }
        if level.is_empty() {
            Ok(false)
        } else {
            Err(OracleError::Inconclusive(self.m))
        }
    }
}

/// Whether the diagonal form with the given nonzero coefficients has a
/// nontrivial zero over Q_p.
pub fn isotropic_oracle(
    coeffs: &[BigRational],
    ctx: &PrimeContext,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    let p = ctx.p();
    let m = cfg.modulus_exponent.max(2);
    // a x² stays below p^{3m+1}; sums of a few must fit in i128
    let bits = (64 - p.leading_zeros()) * (3 * m + 1) + 8;
    if bits > 120 {
        return Err(OracleError::TooLarge(p));
    }
    let pb = BigInt::from(p);
    let pm = BigInt::from(p).pow(m);
    let mut norm = coeffs
        .iter()
        .map(|q| normalize(q, &pb, &pm))
        .collect::<Result<Vec<_>, _>>()?;
    // a form with every coefficient divisible by p has the zeros of its quotient
    if norm.iter().all(|(odd, _)| *odd) {
        norm.iter_mut().for_each(|(odd, _)| *odd = false);
    }
    let coeffs = norm
        .into_iter()
        .map(|(odd, u)| if odd { u * p as i128 } else { u })
        .collect();
    Search {
        p: p as i128,
        m,
        coeffs,
    }
    .isotropic()
}

/// `(a, b)` is +1 exactly when `a x² + b y² - z²` has a nontrivial zero.
pub fn hilbert_oracle(
    a: &BigRational,
    b: &BigRational,
    ctx: &PrimeContext,
    cfg: &OracleConfig,
) -> Result<i8, OracleError> {
    let minus_one = BigRational::from_integer((-1).into());
    let iso = isotropic_oracle(&[a.clone(), b.clone(), minus_one], ctx, cfg)?;
    Ok(if iso { 1 } else { -1 })
}

/// Whether the nondegenerate `f` represents `value`: the same as
/// `f ⊕ ⟨-value⟩` being isotropic.
pub fn represents_oracle(
    f: &DiagonalForm,
    value: &BigRational,
    ctx: &PrimeContext,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    if value.is_zero() {
        return Err(OracleError::Zero);
    }
    let mut coeffs: Vec<BigRational> = f
        .classes()
        .iter()
        .map(|c| c.representative_rational(ctx))
        .collect();
    coeffs.push(-value.clone());
    isotropic_oracle(&coeffs, ctx, cfg)
}

/// Squares mod p by enumeration.
fn is_square_mod_p(u: &BigInt, p: u64) -> bool {
    let r = (u % p + BigInt::from(p)) % p;
    let r = r.to_u64().unwrap();
    (1..p).any(|x| x * x % p == r)
}

/// Invariants recomputed from the representatives: the determinant's
/// valuation parity and residue for the discriminant, `hilbert_oracle` on
/// every pair for the Hasse invariant.
pub fn invariants_oracle(f: &DiagonalForm, cfg: &OracleConfig) -> Result<FormInvariants, OracleError> {
    let ctx = f.ctx();
    let reps: Vec<BigInt> = f.classes().iter().map(|c| c.representative(ctx)).collect();
    let det: BigInt = reps.iter().product();
    let pb = ctx.p_big();
    let (v, unit) = strip(det, pb);
    let disc = SquareClass::from_parts(v % 2 == 1, is_square_mod_p(&unit, ctx.p()));
    let mut hasse = 1i8;
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            hasse *= hilbert_oracle(
                &BigRational::from_integer(reps[i].clone()),
                &BigRational::from_integer(reps[j].clone()),
                ctx,
                cfg,
            )?;
        }
    }
    Ok(FormInvariants {
        dim: f.dim(),
        rank: f.rank(),
        disc,
        hasse,
    })
}
