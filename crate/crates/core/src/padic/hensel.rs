use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{inv_mod, mod_pos, PAdic, PadicError, PrimeContext};

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn new<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        IntPoly(coeffs.into_iter().map(BigInt::from).collect())
    }

    pub fn from_big(coeffs: Vec<BigInt>) -> Self {
        IntPoly(coeffs)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }
}

/// Lifts a simple root `x0` of `f` modulo p to the unique root in Z_p congruent
/// to it, known modulo `p^precision`. Newton iteration with precision doubling.
pub fn hensel_lift(
    f: &IntPoly,
    x0: &BigInt,
    ctx: &PrimeContext,
    precision: u32,
) -> Result<PAdic, PadicError> {
    let p = ctx.p_big();
    let df = f.derivative();
    if !mod_pos(&f.eval(x0), p).is_zero() || mod_pos(&df.eval(x0), p).is_zero() {
        return Err(PadicError::NotASimpleRoot);
    }
    let mut r = mod_pos(x0, p);
    let mut k = 1u32;
    while k < precision {
        k = (2 * k).min(precision);
        let m = ctx.p_pow(k);
        let step = f.eval(&r) * inv_mod(&df.eval(&r), &m);
        r = mod_pos(&(r - step), &m);
    }

    let full = ctx.p_pow(precision);
    let half = &full / 2;
    let symmetric = if r > half { &r - &full } else { r.clone() };
    if f.eval(&symmetric).is_zero() {
        return Ok(PAdic::from_bigint(&symmetric, ctx, precision));
    }
    if r.is_zero() {
        // a root divisible by p^precision that is not exactly zero
        return Err(PadicError::PrecisionExhausted {
            absolute_precision: precision as i64,
        });
    }
    let (v, u) = super::split_p(&r, p);
    PAdic::from_unit_residue(v as i64, &u, ctx, precision - v)
}

/// Convenience: `x^2 - a`.
pub(crate) fn square_minus(a: &BigInt) -> IntPoly {
    IntPoly(vec![-a, BigInt::zero(), BigInt::one()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_root_stays_exact() {
        let ctx = PrimeContext::new(7).unwrap();
        let r = hensel_lift(&IntPoly::new([-1, 0, 1]), &BigInt::from(1), &ctx, 20).unwrap();
        assert!(r.is_exact());
        assert_eq!(r, PAdic::from_i64(1, &ctx, 20));
    }

    #[test]
    fn rejects_non_simple_roots() {
        let ctx = PrimeContext::new(5).unwrap();
        // x^2 at 0: derivative vanishes
        let f = IntPoly::new([0, 0, 1]);
        assert_eq!(
            hensel_lift(&f, &BigInt::from(0), &ctx, 8),
            Err(PadicError::NotASimpleRoot)
        );
        // not a root at all
        let f = IntPoly::new([-2, 0, 1]);
        assert_eq!(
            hensel_lift(&f, &BigInt::from(1), &ctx, 8),
            Err(PadicError::NotASimpleRoot)
        );
    }

    #[test]
    fn lifts_sum_of_three_squares_to_p() {
        // p = 7: a^2 + b^2 = -1 mod 7 has a = 2, b = 3 (4 + 9 = 13 = -1 mod 7)
        let p = 7i64;
        let ctx = PrimeContext::new(p as u64).unwrap();
        let (a, b) = (2i64, 3i64);
        assert_eq!((a * a + b * b + 1).rem_euclid(p), 0);
        let f = IntPoly::new([a * a + b * b - p, 0, 1]);
        let c = hensel_lift(&f, &BigInt::from(1), &ctx, 4).unwrap();
        let m = p.pow(4);
        let oracle: Vec<i64> = (0..m)
            .filter(|x| x % p == 1 && (a * a + b * b + x * x - p).rem_euclid(m) == 0)
            .collect();
        assert_eq!(oracle.len(), 1);
        assert_eq!(c.residue_mod(4).unwrap(), BigInt::from(oracle[0]));
    }

    #[test]
    fn agrees_with_sqrt() {
        let ctx = PrimeContext::new(5).unwrap();
        let f = square_minus(&BigInt::from(6));
        let r = hensel_lift(&f, &BigInt::from(1), &ctx, 12).unwrap();
        let s = PAdic::from_i64(6, &ctx, 12).sqrt().unwrap();
        assert_eq!(r, s);
    }

    #[test]
    fn result_is_a_root_mod_p_n() {
        for p in [3u64, 5, 7, 11, 13] {
            let ctx = PrimeContext::new(p).unwrap();
            // x^3 - x - 1 style polynomials with simple roots mod p
            for c0 in -5i64..5 {
                let f = IntPoly::new([c0, -3, 0, 1]);
                let df = f.derivative();
                for x0 in 0..p as i64 {
                    let x0b = BigInt::from(x0);
                    let pb = BigInt::from(p);
                    if !mod_pos(&f.eval(&x0b), &pb).is_zero()
                        || mod_pos(&df.eval(&x0b), &pb).is_zero()
                    {
                        continue;
                    }
                    let r = hensel_lift(&f, &x0b, &ctx, 24).unwrap();
                    let m = ctx.p_pow(24);
                    let rr = r.residue_mod(24).unwrap();
                    assert!(mod_pos(&f.eval(&rr), &m).is_zero());
                    assert_eq!(mod_pos(&rr, &pb), mod_pos(&x0b, &pb));
                }
            }
        }
    }
}
