//! Sum-of-squares constants used by the explicit witness bases.
//!
//! For p ≡ 3 mod 4 the constants are built around -1 rather than λ: both are
//! nonresidues, so `a² + b² = -1` lies in the class of λ, and
//! `a² + b² + e² = 0` needs only `e = 1`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::padic::{
    hensel_lift, mod_pos, sqrt_mod_prime, square_minus, PAdic, PadicError, PrimeContext,
};
use crate::symbols::{classify, SquareClass};

/// `a, b, c, d, e` (p ≡ 3 mod 4) with
/// `a²+b² = -1`, `a²+b²+c² = p`, `a²+b²+d² = λp`, `a²+b²+e² = 0`.
#[derive(Clone, Debug)]
pub struct Co3 {
    pub a: PAdic,
    pub b: PAdic,
    pub c: PAdic,
    pub d: PAdic,
    pub e: PAdic,
}

/// `A..H` (p ≡ 1 mod 4) with
/// `A²+B² = λ`, `C²+D² = p`, `E²+F² = λp`, `G²+H² = 0`.
#[derive(Clone, Debug)]
pub struct Co1 {
    pub a: PAdic,
    pub b: PAdic,
    pub c: PAdic,
    pub d: PAdic,
    pub e: PAdic,
    pub f: PAdic,
    pub g: PAdic,
    pub h: PAdic,
}

#[derive(Clone, Debug)]
pub enum HenselConstants {
    Three(Co3),
    One(Co1),
}

/// Name, value pairs for display.
#[derive(Serialize)]
pub struct NamedConstant {
    pub name: &'static str,
    pub digits: String,
}

/// A square root of `target` in Z_p whose residue is a nonzero square, lifted
/// from the smallest root mod p.
fn lifted_sqrt(target: &BigInt, ctx: &PrimeContext, precision: u32) -> Option<PAdic> {
    let p = ctx.p();
    let r = mod_pos(target, ctx.p_big()).to_u64().expect("residue below p");
    if r == 0 {
        return None;
    }
    let r0 = sqrt_mod_prime(r, p)?;
    hensel_lift(&square_minus(target), &BigInt::from(r0.min(p - r0)), ctx, precision).ok()
}

/// Finds `x, y` with `x² + y² = target`: `x` is the least residue for which
/// `target - x²` is a nonzero square mod p, `y` is lifted by Hensel.
fn two_squares(target: &BigInt, ctx: &PrimeContext, precision: u32) -> (PAdic, PAdic) {
    for x in 0..ctx.p() as i64 {
        let rest = target - BigInt::from(x * x);
        if let Some(y) = lifted_sqrt(&rest, ctx, precision) {
            return (PAdic::from_i64(x, ctx, precision), y);
        }
    }
    unreachable!("every residue is a sum of two squares mod an odd prime")
}

pub fn hensel_constants(ctx: &PrimeContext, precision: u32) -> HenselConstants {
    let p = ctx.p_big().clone();
    let l = BigInt::from(ctx.lambda());
    let sqrt = |t: &BigInt| lifted_sqrt(t, ctx, precision).expect("residue is a square");
    if ctx.residue_mod4() == 3 {
        let (a, b) = two_squares(&BigInt::from(-1), ctx, precision);
        HenselConstants::Three(Co3 {
            a,
            b,
            // c² = p + 1, d² = λp + 1, e² = 1
            c: sqrt(&(&p + 1)),
            d: sqrt(&(&l * &p + 1)),
            e: PAdic::from_i64(1, ctx, precision),
        })
    } else {
        let (a, b) = two_squares(&l, ctx, precision);
        let (c, d) = two_squares(&p, ctx, precision);
        let (e, f) = two_squares(&(&l * &p), ctx, precision);
        // G = i·H with H = 1
        let h = PAdic::from_i64(1, ctx, precision);
        let g = sqrt(&BigInt::from(-1));
        HenselConstants::One(Co1 {
            a,
            b,
            c,
            d,
            e,
            f,
            g,
            h,
        })
    }
}

fn sq_sum(xs: &[&PAdic]) -> Result<PAdic, PadicError> {
    let ctx = xs[0].ctx();
    xs.iter()
        .try_fold(PAdic::zero(ctx), |acc, x| acc.add(&x.mul(x)))
}

fn holds(xs: &[&PAdic], target: &BigInt, abs: u32) -> bool {
    let ctx = xs[0].ctx();
    let t = PAdic::from_bigint(target, ctx, abs + 4);
    // exhausted cancellation means the sum agrees with the target to all known digits
    let sum = xs.iter().try_fold(t.neg(), |acc, x| acc.add(&x.mul(x)));
    match sum {
        Ok(v) => v.valuation().map_or(true, |v| v >= abs as i64),
        Err(PadicError::PrecisionExhausted { absolute_precision }) => absolute_precision >= abs as i64,
        Err(_) => false,
    }
}

impl HenselConstants {
    /// Checks every defining identity modulo `p^abs`. Returns the names of the
    /// identities that fail.
    pub fn failures(&self, abs: u32) -> Vec<&'static str> {
        let mut bad = Vec::new();
        match self {
            HenselConstants::Three(k) => {
                let ctx = k.a.ctx();
                let p = ctx.p_big().clone();
                let lp = BigInt::from(ctx.lambda()) * &p;
                let checks: [(&'static str, Vec<&PAdic>, BigInt); 4] = [
                    ("a^2+b^2=-1", vec![&k.a, &k.b], BigInt::from(-1)),
                    ("a^2+b^2+c^2=p", vec![&k.a, &k.b, &k.c], p),
                    ("a^2+b^2+d^2=lp", vec![&k.a, &k.b, &k.d], lp),
                    ("a^2+b^2+e^2=0", vec![&k.a, &k.b, &k.e], BigInt::from(0)),
                ];
                for (name, xs, t) in checks {
                    if !holds(&xs, &t, abs) {
                        bad.push(name);
                    }
                }
                // the first identity holds in the class of λ
                let class = sq_sum(&[&k.a, &k.b]).ok().and_then(|s| classify(&s).ok());
                if class != Some(SquareClass::Lambda) {
                    bad.push("class(a^2+b^2)=l");
                }
            }
            HenselConstants::One(k) => {
                let ctx = k.a.ctx();
                let p = ctx.p_big().clone();
                let l = BigInt::from(ctx.lambda());
                let checks: [(&'static str, [&PAdic; 2], BigInt); 4] = [
                    ("A^2+B^2=l", [&k.a, &k.b], l.clone()),
                    ("C^2+D^2=p", [&k.c, &k.d], p.clone()),
                    ("E^2+F^2=lp", [&k.e, &k.f], l * p),
                    ("G^2+H^2=0", [&k.g, &k.h], BigInt::from(0)),
                ];
                for (name, xs, t) in checks {
                    if !holds(&xs, &t, abs) {
                        bad.push(name);
                    }
                }
            }
        }
        bad
    }

    pub fn named(&self) -> Vec<(&'static str, &PAdic)> {
        match self {
            HenselConstants::Three(k) => vec![
                ("a", &k.a),
                ("b", &k.b),
                ("c", &k.c),
                ("d", &k.d),
                ("e", &k.e),
            ],
            HenselConstants::One(k) => vec![
                ("A", &k.a),
                ("B", &k.b),
                ("C", &k.c),
                ("D", &k.d),
                ("E", &k.e),
                ("F", &k.f),
                ("G", &k.g),
                ("H", &k.h),
            ],
        }
    }

    pub fn to_named(&self) -> Vec<NamedConstant> {
        self.named()
            .into_iter()
            .map(|(name, v)| NamedConstant {
                name,
                digits: v.to_compact_string(),
            })
            .collect()
    }
}
