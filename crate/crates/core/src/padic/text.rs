//! Textual forms of p-adic numbers.
//!
//! Two renderings are produced:
//! - series: `5^2 * (2 + 0*5 + 1*5^2 + ...) [mod 5^6]`
//! - compact: `...1 0 2 (base 5) * 5^2`, most significant digit first.
//!
//! The compact rendering parses back to the same digits and precision.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PAdic, PadicError, PrimeContext};

impl PAdic {
    pub fn to_series_string(&self) -> String {
        let Some(v) = self.valuation() else {
            return "0".to_string();
        };
        let p = self.ctx().p();
        let digits = self.unit_digits();
        let mut s = format!("{p}^{v} * (");
        for (i, d) in digits.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            match i {
                0 => write!(s, "{d}").unwrap(),
                1 => write!(s, "{d}*{p}").unwrap(),
                _ => write!(s, "{d}*{p}^{i}").unwrap(),
            }
        }
        if self.is_exact() {
            s.push_str(") [exact]");
        } else {
            write!(s, " + ...) [mod {p}^{}]", v + digits.len() as i64).unwrap();
        }
        s
    }

    pub fn to_compact_string(&self) -> String {
        let Some(v) = self.valuation() else {
            return "0".to_string();
        };
        let p = self.ctx().p();
        let digits: Vec<String> = self
            .unit_digits()
            .iter()
            .rev()
            .map(|d| d.to_string())
            .collect();
        format!("...{} (base {p}) * {p}^{v}", digits.join(" "))
    }

    /// Parses the compact rendering. The result is inexact with the number of
    /// digits given.
    pub fn parse_compact(s: &str, ctx: &PrimeContext) -> Result<PAdic, PadicError> {
        let err = || PadicError::Parse(s.to_string());
        let t = s.trim();
        if t == "0" {
            return Ok(PAdic::zero(ctx));
        }
        let body = t.strip_prefix("...").ok_or_else(err)?;
        let (digits, rest) = body.split_once("(base").ok_or_else(err)?;
        let (base, rest) = rest.split_once(')').ok_or_else(err)?;
        let base: u64 = base.trim().parse().map_err(|_| err())?;
        if base != ctx.p() {
            return Err(err());
        }
        let rest = rest.trim().strip_prefix('*').ok_or_else(err)?.trim();
        let (pb, v) = rest.split_once('^').ok_or_else(err)?;
        if pb.trim().parse::<u64>().map_err(|_| err())? != base {
            return Err(err());
        }
        let v: i64 = v.trim().parse().map_err(|_| err())?;
        let digits: Vec<u64> = digits
            .split_whitespace()
            .map(|d| d.parse::<u64>().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        if digits.is_empty() || digits.iter().any(|&d| d >= base) {
            return Err(err());
        }
        let pbig = BigInt::from(base);
        let unit = digits
            .iter()
            .fold(BigInt::zero(), |acc, &d| acc * &pbig + BigInt::from(d));
        PAdic::from_unit_residue(v, &unit, ctx, digits.len() as u32)
    }
}

/// Parses an integer, a fraction `a/b`, or a `p^k*u` token (`p` stands for the
/// context prime, `u` may itself be a fraction) into an exact rational.
pub fn parse_rational(s: &str, ctx: &PrimeContext) -> Result<BigRational, PadicError> {
    let err = || PadicError::Parse(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r.to_string()),
        None => (false, t),
    };
    let value = if let Some(rest) = t.strip_prefix('p') {
        let (k, u) = match rest.strip_prefix('^') {
            Some(r) => match r.split_once('*') {
                Some((k, u)) => (k.parse::<i32>().map_err(|_| err())?, Some(u)),
                None => (r.parse::<i32>().map_err(|_| err())?, None),
            },
            None => match rest.strip_prefix('*') {
                Some(u) => (1, Some(u)),
                None if rest.is_empty() => (1, None),
                None => return Err(err()),
            },
        };
        let pk = BigRational::from_integer(ctx.p_big().clone());
        let pk = if k >= 0 {
            num_traits::pow(pk, k as usize)
        } else {
            num_traits::pow(pk, (-k) as usize).recip()
        };
        match u {
            Some(u) => pk * plain_fraction(u).ok_or_else(err)?,
            None => pk,
        }
    } else {
        plain_fraction(&t).ok_or_else(err)?
    };
    Ok(if neg { -value } else { value })
}

fn plain_fraction(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_forms() {
        let ctx = PrimeContext::new(5).unwrap();
        let x = PAdic::from_fraction(1, 3, &ctx, 4);
        assert_eq!(x.to_compact_string(), "...3 1 3 2 (base 5) * 5^0");
        assert_eq!(
            x.to_series_string(),
            "5^0 * (2 + 3*5 + 1*5^2 + 3*5^3 + ...) [mod 5^4]"
        );
        assert_eq!(PAdic::zero(&ctx).to_compact_string(), "0");
    }

    #[test]
    fn compact_round_trip() {
        let ctx = PrimeContext::new(7).unwrap();
        let x = PAdic::from_fraction(-22, 49 * 3, &ctx, 10);
        let back = PAdic::parse_compact(&x.to_compact_string(), &ctx).unwrap();
        assert_eq!(back.unit_digits(), x.unit_digits());
        assert_eq!(back.valuation(), x.valuation());
        assert!(PAdic::parse_compact("...1 9 (base 7) * 7^0", &ctx).is_err());
        assert!(PAdic::parse_compact("...1 2 (base 5) * 5^0", &ctx).is_err());
    }

    #[test]
    fn parses_value_tokens() {
        let ctx = PrimeContext::new(5).unwrap();
        let r = |s: &str| parse_rational(s, &ctx).unwrap();
        assert_eq!(r("12"), BigRational::from_integer(12.into()));
        assert_eq!(r("-3/4"), BigRational::new((-3).into(), 4.into()));
        assert_eq!(r("p^3*2"), BigRational::from_integer(250.into()));
        assert_eq!(r("p"), BigRational::from_integer(5.into()));
        assert_eq!(r("p^-2"), BigRational::new(1.into(), 25.into()));
        assert_eq!(r("p*1/2"), BigRational::new(5.into(), 2.into()));
        assert!(parse_rational("1/0", &ctx).is_err());
        assert!(parse_rational("q^2", &ctx).is_err());
    }
}
