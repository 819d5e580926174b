use std::cmp::{max, min};
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{legendre, PadicError, PrimeContext};

/// An element of Q_p known to finite precision.
///
/// A nonzero value is `p^val * unit` where `unit` is a p-adic unit known
/// modulo `p^prec`. The valuation is always certified. Values built from
/// integers stay `exact` for as long as ring operations keep them inside
/// `(-p^prec, p^prec)`; exact values cancel to an exact zero.
#[derive(Clone, PartialEq, Eq)]
pub struct PAdic {
    ctx: PrimeContext,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Zero,
    Value {
        val: i64,
        unit: BigInt,
        prec: u32,
        exact: bool,
    },
}

/// p-adic valuation and cofactor of a nonzero integer.
pub(crate) fn split_p(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let mut v = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

pub(crate) fn mod_pos(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`; `a` must be coprime to `m`.
pub(crate) fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = mod_pos(a, m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    mod_pos(&e.x, m)
}

/// A square root of `a` modulo the odd prime `p`, with `a` a nonzero residue.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    use super::context::pow_mod_u64;
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    if p % 4 == 3 {
        return Some(pow_mod_u64(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| pow_mod_u64(z, (p - 1) / 2, p) == p - 1)
        .unwrap();
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = pow_mod_u64(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

impl PAdic {
    pub fn zero(ctx: &PrimeContext) -> Self {
        PAdic {
            ctx: ctx.clone(),
            repr: Repr::Zero,
        }
    }

    pub fn one(ctx: &PrimeContext) -> Self {
        Self::from_bigint(&BigInt::one(), ctx, ctx.default_precision())
    }

    pub fn from_i64(n: i64, ctx: &PrimeContext, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), ctx, precision)
    }

    pub fn from_bigint(n: &BigInt, ctx: &PrimeContext, precision: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()), ctx, precision)
    }

    /// `num/den` as a p-adic number. Panics if `den` is zero.
    pub fn from_fraction(num: i64, den: i64, ctx: &PrimeContext, precision: u32) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(
            &BigRational::new(BigInt::from(num), BigInt::from(den)),
            ctx,
            precision,
        )
    }

    pub fn from_rational(q: &BigRational, ctx: &PrimeContext, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be positive");
        if q.is_zero() {
            return Self::zero(ctx);
        }
        let p = ctx.p_big();
        let (a, n) = split_p(q.numer(), p);
        let (b, d) = split_p(q.denom(), p);
        let val = a as i64 - b as i64;
        let modulus = ctx.p_pow(precision);
        if d.abs().is_one() {
            let unit = &n * &d;
            if unit.abs() < modulus {
                return Self::raw(ctx, val, unit, precision, true);
            }
        }
        let unit = mod_pos(&(n * inv_mod(&d, &modulus)), &modulus);
        Self::raw(ctx, val, unit, precision, false)
    }

    /// Builds `p^val * unit` from a residue known modulo `p^precision`.
    /// The residue must be a unit.
    pub fn from_unit_residue(
        val: i64,
        unit: &BigInt,
        ctx: &PrimeContext,
        precision: u32,
    ) -> Result<Self, PadicError> {
        let modulus = ctx.p_pow(precision);
        let unit = mod_pos(unit, &modulus);
        if (&unit % ctx.p_big()).is_zero() {
            return Err(PadicError::NotAUnit);
        }
        Ok(Self::raw(ctx, val, unit, precision, false))
    }

    fn raw(ctx: &PrimeContext, val: i64, unit: BigInt, prec: u32, exact: bool) -> Self {
        PAdic {
            ctx: ctx.clone(),
            repr: Repr::Value {
                val,
                unit,
                prec,
                exact,
            },
        }
    }

    #[inline]
    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True when the value is known exactly (integers kept unreduced, exact zero).
    pub fn is_exact(&self) -> bool {
        match self.repr {
            Repr::Zero => true,
            Repr::Value { exact, .. } => exact,
        }
    }

    /// Certified valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero => None,
            Repr::Value { val, .. } => Some(val),
        }
    }

    /// Number of known unit digits; `None` for zero.
    pub fn precision(&self) -> Option<u32> {
        match self.repr {
            Repr::Zero => None,
            Repr::Value { prec, .. } => Some(prec),
        }
    }

    /// Exponent `a` such that the value is known modulo `p^a`; `None` when exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Value {
                val,
                prec,
                exact: false,
                ..
            } => Some(val + prec as i64),
            _ => None,
        }
    }

    /// Unit part reduced into `[0, p^prec)`.
    pub fn unit_residue(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Value { unit, prec, .. } => Some(mod_pos(unit, &self.ctx.p_pow(*prec))),
        }
    }

    /// Base-p unit digits `d_0 .. d_{N-1}`, least significant first.
    pub fn unit_digits(&self) -> Vec<u64> {
        let (Some(mut u), Some(prec)) = (self.unit_residue(), self.precision()) else {
            return Vec::new();
        };
        let p = self.ctx.p_big();
        let mut out = Vec::with_capacity(prec as usize);
        for _ in 0..prec {
            let (q, r) = u.div_rem(p);
            out.push(r.to_u64().unwrap());
            u = q;
        }
        out
    }

    pub fn leading_digit(&self) -> Option<u64> {
        self.unit_residue()
            .map(|u| (u % self.ctx.p_big()).to_u64().unwrap())
    }

    /// The value modulo `p^abs` as an integer in `[0, p^abs)`, if the value
    /// lies in Z_p and is known that far.
    pub fn residue_mod(&self, abs: u32) -> Result<BigInt, PadicError> {
        let m = self.ctx.p_pow(abs);
        match &self.repr {
            Repr::Zero => Ok(BigInt::zero()),
            Repr::Value {
                val,
                unit,
                prec,
                exact,
            } => {
                if *val < 0 {
                    return Err(PadicError::NotIntegral);
                }
                if !exact && val + (*prec as i64) < abs as i64 {
                    return Err(PadicError::PrecisionExhausted {
                        absolute_precision: val + *prec as i64,
                    });
                }
                if *val >= abs as i64 {
                    return Ok(BigInt::zero());
                }
                Ok(mod_pos(&(unit * self.ctx.p_pow(*val as u32)), &m))
            }
        }
    }

    /// Exact rational value, when the number is exact.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Zero => Some(BigRational::zero()),
            Repr::Value {
                val,
                unit,
                exact: true,
                ..
            } => {
                let pv = self.ctx.p_pow(val.unsigned_abs() as u32);
                Some(if *val >= 0 {
                    BigRational::from_integer(unit * pv)
                } else {
                    BigRational::new(unit.clone(), pv)
                })
            }
            _ => None,
        }
    }

    /// The rational `p^v * u` spelled by the known digits. Equals the value
    /// itself when it is exact.
    pub fn approximant(&self) -> BigRational {
        if let Some(q) = self.to_rational() {
            return q;
        }
        let Repr::Value { val, .. } = &self.repr else {
            unreachable!("zero is exact")
        };
        let u = self.unit_residue().expect("nonzero");
        let pv = self.ctx.p_pow(val.unsigned_abs() as u32);
        if *val >= 0 {
            BigRational::from_integer(u * pv)
        } else {
            BigRational::new(u, pv)
        }
    }

    /// Truncates the relative precision to at most `prec` digits.
    pub fn truncated(&self, prec: u32) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Value {
                val,
                unit,
                prec: old,
                exact,
            } => {
                let m = self.ctx.p_pow(prec);
                if *exact && unit.abs() < m {
                    return Self::raw(&self.ctx, *val, unit.clone(), prec, true);
                }
                let new_prec = min(prec, *old);
                let m = self.ctx.p_pow(new_prec);
                Self::raw(&self.ctx, *val, mod_pos(unit, &m), new_prec, false)
            }
        }
    }

    fn check_ctx(&self, other: &Self) {
        assert_eq!(
            self.ctx.p(),
            other.ctx.p(),
            "p-adic numbers from different primes"
        );
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Value {
                val,
                unit,
                prec,
                exact,
            } => {
                if *exact {
                    Self::raw(&self.ctx, *val, -unit, *prec, true)
                } else {
                    let m = self.ctx.p_pow(*prec);
                    Self::raw(&self.ctx, *val, mod_pos(&-unit, &m), *prec, false)
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_ctx(other);
        let (
            Repr::Value {
                val: vx,
                unit: ux,
                prec: px,
                exact: ex,
            },
            Repr::Value {
                val: vy,
                unit: uy,
                prec: py,
                exact: ey,
            },
        ) = (&self.repr, &other.repr)
        else {
            return Ok(if self.is_zero() {
                other.clone()
            } else {
                self.clone()
            });
        };
        let p = self.ctx.p_big();
        let vmin = min(*vx, *vy);
        let shifted = |u: &BigInt, v: i64| u * self.ctx.p_pow((v - vmin) as u32);

        if *ex && *ey {
            let s = shifted(ux, *vx) + shifted(uy, *vy);
            if s.is_zero() {
                return Ok(Self::zero(&self.ctx));
            }
            let (t, u) = split_p(&s, p);
            let prec = max(*px, *py);
            let m = self.ctx.p_pow(prec);
            let val = vmin + t as i64;
            return Ok(if u.abs() < m {
                Self::raw(&self.ctx, val, u, prec, true)
            } else {
                Self::raw(&self.ctx, val, mod_pos(&u, &m), prec, false)
            });
        }

        let abs_x = if *ex { None } else { Some(vx + *px as i64) };
        let abs_y = if *ey { None } else { Some(vy + *py as i64) };
        let abs = match (abs_x, abs_y) {
            (Some(a), Some(b)) => min(a, b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let r = (abs - vmin) as u32;
        let m = self.ctx.p_pow(r);
        let term = |u: &BigInt, v: i64| {
            if v - vmin >= r as i64 {
                BigInt::zero()
            } else {
                shifted(u, v)
            }
        };
        let s = mod_pos(&(term(ux, *vx) + term(uy, *vy)), &m);
        if s.is_zero() {
            return Err(PadicError::PrecisionExhausted {
                absolute_precision: abs,
            });
        }
        let (t, u) = split_p(&s, p);
        let prec = r - t;
        Ok(Self::raw(
            &self.ctx,
            vmin + t as i64,
            mod_pos(&u, &self.ctx.p_pow(prec)),
            prec,
            false,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ctx(other);
        let (
            Repr::Value {
                val: vx,
                unit: ux,
                prec: px,
                exact: ex,
            },
            Repr::Value {
                val: vy,
                unit: uy,
                prec: py,
                exact: ey,
            },
        ) = (&self.repr, &other.repr)
        else {
            return Self::zero(&self.ctx);
        };
        let val = vx + vy;
        let prod = ux * uy;
        match (ex, ey) {
            (true, true) => {
                let prec = max(*px, *py);
                let m = self.ctx.p_pow(prec);
                if prod.abs() < m {
                    Self::raw(&self.ctx, val, prod, prec, true)
                } else {
                    Self::raw(&self.ctx, val, mod_pos(&prod, &m), prec, false)
                }
            }
            _ => {
                let prec = match (ex, ey) {
                    (false, false) => min(*px, *py),
                    (false, true) => *px,
                    _ => *py,
                };
                let m = self.ctx.p_pow(prec);
                Self::raw(&self.ctx, val, mod_pos(&prod, &m), prec, false)
            }
        }
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        match &self.repr {
            Repr::Zero => Err(PadicError::DivisionByZero),
            Repr::Value {
                val,
                unit,
                prec,
                exact,
            } => {
                if *exact && unit.abs().is_one() {
                    return Ok(Self::raw(&self.ctx, -val, unit.clone(), *prec, true));
                }
                let m = self.ctx.p_pow(*prec);
                Ok(Self::raw(&self.ctx, -val, inv_mod(unit, &m), *prec, false))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Value {
                val,
                unit,
                prec,
                exact,
            } => Self::raw(&self.ctx, val + k, unit.clone(), *prec, *exact),
        }
    }

    /// Square test: even valuation and a residue leading digit.
    pub fn is_square(&self) -> Result<bool, PadicError> {
        match &self.repr {
            Repr::Zero => Err(PadicError::ZeroValue),
            Repr::Value { val, unit, .. } => {
                Ok(val % 2 == 0 && legendre(unit, &self.ctx) == 1)
            }
        }
    }

    /// Square root whose leading unit digit is at most (p-1)/2.
    pub fn sqrt(&self) -> Result<Self, PadicError> {
        let Repr::Value {
            val,
            unit,
            prec,
            exact,
        } = &self.repr
        else {
            return Ok(self.clone());
        };
        if !self.is_square()? {
            return Err(PadicError::NotASquare);
        }
        let p = self.ctx.p();
        let half = (p - 1) / 2;
        if *exact && unit.sign() == Sign::Plus {
            let s = unit.sqrt();
            if &(&s * &s) == unit {
                let lead = (&s % self.ctx.p_big()).to_u64().unwrap();
                let s = if lead <= half { s } else { -s };
                return Ok(Self::raw(&self.ctx, val / 2, s, *prec, true));
            }
        }
        let lead = (mod_pos(unit, self.ctx.p_big())).to_u64().unwrap();
        let r0 = sqrt_mod_prime(lead, p).ok_or(PadicError::NotASquare)?;
        let r0 = min(r0, p - r0);
        let u = mod_pos(unit, &self.ctx.p_pow(*prec));
        let mut r = BigInt::from(r0);
        let mut k = 1u32;
        while k < *prec {
            k = min(2 * k, *prec);
            let m = self.ctx.p_pow(k);
            let f = &r * &r - &u;
            let step = f * inv_mod(&(BigInt::from(2) * &r), &m);
            r = mod_pos(&(r - step), &m);
        }
        Ok(Self::raw(&self.ctx, val / 2, r, *prec, false))
    }

    /// True when `self - other` is known to vanish modulo `p^abs`.
    pub fn congruent(&self, other: &Self, abs: i64) -> Result<bool, PadicError> {
        match self.sub(other) {
            Ok(d) => Ok(match d.valuation() {
                None => true,
                Some(v) => v >= abs,
            }),
            Err(PadicError::PrecisionExhausted { absolute_precision }) => {
                if absolute_precision >= abs {
                    Ok(true)
                } else {
                    Err(PadicError::PrecisionExhausted { absolute_precision })
                }
            }
            Err(e) => Err(e),
        }
    }
}

impl fmt::Debug for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_compact_string())
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_series_string())
    }
}
