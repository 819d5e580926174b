//! Explicit embeddings: coordinate vectors in the target whose pairwise
//! products reproduce the source Gram matrix modulo `p^N`.
//!
//! The general construction represents the source values one at a time. For
//! `0^k ⊕ diag(c_1..c_r)` it embeds `diag(c_1..c_r) ⊕ H^k` with H = diag(1,-1)
//! and turns each hyperbolic pair `(u, w)` into the isotropic vector `u + w`.
//! Each value `d` is found in the current orthogonal block `diag(g_1..g_m)`
//! by drawing all but one coordinate at random and solving the last by a
//! square root; the block is then replaced by the orthogonal complement of
//! the new vector and rediagonalized.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::DiagonalForm;
use crate::padic::{inv_mod, legendre, mod_pos, split_p, PAdic, PrimeContext};

use super::{decide, hensel_constants, max_isotropic_dim, EmbedError, Family, HenselConstants, TargetSpace};

pub const DEFAULT_WITNESS_PRECISION: u32 = 20;
pub const DEFAULT_WITNESS_SEED: u64 = 0x9e37_79b9_7f4a_7c15;
/// Attempts per value before giving up.
pub const RETRY_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessOptions {
    pub precision: u32,
    pub seed: u64,
    pub retry_budget: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            precision: DEFAULT_WITNESS_PRECISION,
            seed: DEFAULT_WITNESS_SEED,
            retry_budget: RETRY_BUDGET,
        }
    }
}

/// One row per basis vector of the source, isotropic rows first. The Gram
/// identity holds modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub vectors: Vec<Vec<PAdic>>,
    pub precision: u32,
}

impl Witness {
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.vectors
            .iter()
            .map(|r| r.iter().map(PAdic::to_compact_string).collect())
            .collect()
    }

    pub fn from_strings(
        rows: &[Vec<String>],
        ctx: &PrimeContext,
        precision: u32,
    ) -> Result<Self, crate::padic::PadicError> {
        let vectors = rows
            .iter()
            .map(|r| r.iter().map(|s| PAdic::parse_compact(s, ctx)).collect())
            .collect::<Result<_, _>>()?;
        Ok(Witness { vectors, precision })
    }
}

/// Fixed relative precision arithmetic: `p^v * u` with `u` a unit mod `p^w`.
/// No error tracking; the finished witness is verified exactly.
#[derive(Clone, Debug)]
struct Fx {
    v: i64,
    u: BigInt,
}

struct Arith {
    ctx: PrimeContext,
    p: BigInt,
    pw: BigInt,
    w: u32,
}

impl Arith {
    fn new(ctx: &PrimeContext, w: u32) -> Self {
        Arith {
            ctx: ctx.clone(),
            p: ctx.p_big().clone(),
            pw: ctx.p_pow(w),
            w,
        }
    }

    fn zero() -> Fx {
        Fx {
            v: 0,
            u: BigInt::zero(),
        }
    }

    fn norm(&self, v: i64, x: BigInt) -> Fx {
        if x.is_zero() {
            return Self::zero();
        }
        let (t, u) = split_p(&x, &self.p);
        let u = mod_pos(&u, &self.pw);
        if u.is_zero() {
            return Self::zero();
        }
        Fx { v: v + t as i64, u }
    }

    fn int(&self, n: i64) -> Fx {
        self.norm(0, BigInt::from(n))
    }

    fn pow(&self, e: i64) -> Fx {
        Fx {
            v: e,
            u: BigInt::one(),
        }
    }

    fn add(&self, a: &Fx, b: &Fx) -> Fx {
        if a.u.is_zero() {
            return b.clone();
        }
        if b.u.is_zero() {
            return a.clone();
        }
        let (lo, hi) = if a.v <= b.v { (a, b) } else { (b, a) };
        let gap = (hi.v - lo.v) as u32;
        if gap >= self.w {
            return lo.clone();
        }
        self.norm(lo.v, &lo.u + &hi.u * self.ctx.p_pow(gap))
    }

    fn neg(&self, a: &Fx) -> Fx {
        if a.u.is_zero() {
            return a.clone();
        }
        Fx {
            v: a.v,
            u: &self.pw - &a.u,
        }
    }

    fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        if a.u.is_zero() || b.u.is_zero() {
            return Self::zero();
        }
        Fx {
            v: a.v + b.v,
            u: (&a.u * &b.u) % &self.pw,
        }
    }

    fn div(&self, a: &Fx, b: &Fx) -> Fx {
        assert!(!b.u.is_zero(), "division by zero in witness search");
        if a.u.is_zero() {
            return Self::zero();
        }
        Fx {
            v: a.v - b.v,
            u: (&a.u * inv_mod(&b.u, &self.pw)) % &self.pw,
        }
    }

    fn val(a: &Fx) -> Option<i64> {
        (!a.u.is_zero()).then_some(a.v)
    }

    fn sqrt(&self, a: &Fx) -> Option<Fx> {
        if a.u.is_zero() {
            return Some(Self::zero());
        }
        if a.v % 2 != 0 || legendre(&a.u, &self.ctx) != 1 {
            return None;
        }
        let x = PAdic::from_unit_residue(a.v, &a.u, &self.ctx, self.w).ok()?;
        let r = x.sqrt().ok()?;
        Some(self.norm(r.valuation()?, r.unit_residue()?))
    }

    fn to_padic(&self, a: &Fx) -> PAdic {
        if a.u.is_zero() {
            PAdic::zero(&self.ctx)
        } else {
            PAdic::from_unit_residue(a.v, &a.u, &self.ctx, self.w).expect("unit residue")
        }
    }

    /// `Σ t_i a_i b_i`.
    fn bilinear(&self, t: &[Fx], a: &[Fx], b: &[Fx]) -> Fx {
        let mut acc = Self::zero();
        for i in 0..t.len() {
            if a[i].u.is_zero() || b[i].u.is_zero() {
                continue;
            }
            acc = self.add(&acc, &self.mul(&t[i], &self.mul(&a[i], &b[i])));
        }
        acc
    }

    fn axpy(&self, y: &[Fx], c: &Fx, x: &[Fx]) -> Vec<Fx> {
        y.iter()
            .zip(x)
            .map(|(yi, xi)| self.add(yi, &self.mul(c, xi)))
            .collect()
    }

    fn scale(&self, c: &Fx, x: &[Fx]) -> Vec<Fx> {
        x.iter().map(|xi| self.mul(c, xi)).collect()
    }
}

enum StepError {
    Budget(usize),
    Numerical,
}

struct Search<'a> {
    ar: Arith,
    t: Vec<Fx>,
    rng: &'a mut ChaCha8Rng,
    budget: usize,
}

impl Search<'_> {
    fn random_coord(&mut self) -> Fx {
        if self.rng.gen_range(0..4) == 0 {
            return Arith::zero();
        }
        let p = self.ar.ctx.p();
        let e = [-1i64, 0, 0, 0, 1][self.rng.gen_range(0..5)];
        let mut u = self.rng.gen_range(1..(p * p).min(1 << 40));
        if u % p == 0 {
            u += 1;
        }
        let x = self.ar.mul(&self.ar.pow(e), &self.ar.int(u as i64));
        if self.rng.gen_bool(0.5) {
            self.ar.neg(&x)
        } else {
            x
        }
    }

    /// Coefficients `x` with `Σ g_i x_i² = d`.
    fn represent(&mut self, g: &[Fx], d: &Fx, step: usize) -> Result<Vec<Fx>, StepError> {
        let m = g.len();
        if m == 0 {
            return Err(StepError::Numerical);
        }
        let attempts = if m == 1 { 1 } else { self.budget };
        for _ in 0..attempts {
            let mut x: Vec<Fx> = (0..m).map(|_| self.random_coord()).collect();
            let terms: Vec<Fx> = g
                .iter()
                .zip(&x)
                .map(|(gi, xi)| self.ar.mul(gi, &self.ar.mul(xi, xi)))
                .collect();
            let total = terms.iter().fold(Arith::zero(), |a, b| self.ar.add(&a, b));
            // any coordinate may be the one solved for
            for j in 0..m {
                let rest = self.ar.add(&self.ar.sub(d, &total), &terms[j]);
                let q = self.ar.div(&rest, &g[j]);
                if q.u.is_zero() && (0..m).all(|i| i == j || x[i].u.is_zero()) {
                    continue;
                }
                if let Some(r) = self.ar.sqrt(&q) {
                    x[j] = r;
                    return Ok(x);
                }
            }
        }
        Err(StepError::Budget(step))
    }

    /// Orthogonal basis of span(vecs) with valuations of the values in {0, 1}.
    fn diagonalize(&self, mut vecs: Vec<Vec<Fx>>) -> Result<(Vec<Vec<Fx>>, Vec<Fx>), StepError> {
        let ar = &self.ar;
        let m = vecs.len();
        let mut gram: Vec<Vec<Fx>> = (0..m)
            .map(|i| (0..m).map(|j| ar.bilinear(&self.t, &vecs[i], &vecs[j])).collect())
            .collect();
        let mut active: Vec<usize> = (0..m).collect();
        let mut out_v = Vec::with_capacity(m);
        let mut out_g = Vec::with_capacity(m);
        while !active.is_empty() {
            let mut best: Option<(i64, usize, usize)> = None;
            for (a, &i) in active.iter().enumerate() {
                for &j in &active[a..] {
                    if let Some(v) = Arith::val(&gram[i][j]) {
                        // diagonal entries win ties
                        let better = match best {
                            None => true,
                            Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                        };
                        if better {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let (_, i, j) = best.ok_or(StepError::Numerical)?;
            if i != j {
                // b_i <- b_i + b_j; the new diagonal has the off-diagonal valuation
                vecs[i] = ar.axpy(&vecs[i], &ar.int(1), &vecs[j].clone());
                for &r in &active {
                    gram[i][r] = ar.bilinear(&self.t, &vecs[i], &vecs[r]);
                    gram[r][i] = gram[i][r].clone();
                }
            }
            active.retain(|&r| r != i);
            let d = gram[i][i].clone();
            for &r in &active {
                if gram[r][i].u.is_zero() {
                    continue;
                }
                let c = ar.neg(&ar.div(&gram[r][i], &d));
                vecs[r] = ar.axpy(&vecs[r], &c, &vecs[i].clone());
            }
            for &r in &active {
                for &s in &active {
                    if s >= r {
                        gram[r][s] = ar.bilinear(&self.t, &vecs[r], &vecs[s]);
                        gram[s][r] = gram[r][s].clone();
                    }
                }
            }
            // scale so that the value has valuation 0 or 1
            let h = d.v.div_euclid(2);
            out_v.push(ar.scale(&ar.pow(-h), &vecs[i]));
            out_g.push(ar.mul(&ar.pow(-2 * h), &d));
        }
        Ok((out_v, out_g))
    }

    fn run(&mut self, values: &[Fx]) -> Result<Vec<Vec<Fx>>, StepError> {
        let n = self.t.len();
        let mut basis: Vec<Vec<Fx>> = (0..n)
            .map(|i| (0..n).map(|j| self.ar.int((i == j) as i64)).collect())
            .collect();
        let mut g = self.t.clone();
        let mut found = Vec::with_capacity(values.len());
        for (step, d) in values.iter().enumerate() {
            let x = self.represent(&g, d, step)?;
            let mut y = vec![Arith::zero(); n];
            for (xi, fi) in x.iter().zip(&basis) {
                y = self.ar.axpy(&y, xi, fi);
            }
            found.push(y.clone());
            if step + 1 == values.len() {
                break;
            }
            // pivot on the largest contribution g_l x_l²
            let l = (0..x.len())
                .filter(|&i| !x[i].u.is_zero())
                .min_by_key(|&i| 2 * x[i].v + g[i].v)
                .ok_or(StepError::Numerical)?;
            let rest: Vec<Vec<Fx>> = (0..basis.len())
                .filter(|&i| i != l)
                .map(|i| {
                    let c = self.ar.neg(&self.ar.div(&self.ar.mul(&g[i], &x[i]), d));
                    self.ar.axpy(&basis[i], &c, &y)
                })
                .collect();
            let (b, gg) = self.diagonalize(rest)?;
            basis = b;
            g = gg;
        }
        Ok(found)
    }
}

pub fn witness(f: &DiagonalForm, t: TargetSpace) -> Result<Witness, EmbedError> {
    witness_with(f, t, WitnessOptions::default())
}

pub fn witness_with(
    f: &DiagonalForm,
    t: TargetSpace,
    opts: WitnessOptions,
) -> Result<Witness, EmbedError> {
    let ctx = f.ctx();
    let d = decide(f, t);
    if !d.embeds {
        return Err(EmbedError::NotEmbeddable {
            form: f.to_dsl(),
            target: t,
            reason: d.reason,
        });
    }
    if f.rank() == 0 {
        return isotropic_witness(ctx, t, f.zero_count(), opts.precision);
    }
    let k = f.zero_count();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let count = f.rank() + 2 * k;
    let mut w = 2 * opts.precision + 8 + 2 * count as u32;
    let mut last = String::new();
    for _ in 0..4 {
        let ar = Arith::new(ctx, w);
        let mut values: Vec<Fx> = f
            .classes()
            .iter()
            .map(|c| ar.norm(0, c.representative(ctx)))
            .collect();
        for _ in 0..k {
            values.push(ar.int(1));
            values.push(ar.int(-1));
        }
        let t_coef: Vec<Fx> = t.coefficients(ctx).into_iter().map(|c| ar.int(c)).collect();
        let mut search = Search {
            ar,
            t: t_coef,
            rng: &mut rng,
            budget: opts.retry_budget,
        };
        match search.run(&values) {
            Ok(rows) => {
                let ar = &search.ar;
                let r = f.rank();
                let mut out: Vec<Vec<PAdic>> = (0..k)
                    .map(|i| {
                        let z = ar.axpy(&rows[r + 2 * i], &ar.int(1), &rows[r + 2 * i + 1]);
                        z.iter().map(|x| ar.to_padic(x)).collect()
                    })
                    .collect();
                out.extend(rows[..r].iter().map(|y| y.iter().map(|x| ar.to_padic(x)).collect()));
                let wit = Witness {
                    vectors: out,
                    precision: opts.precision,
                };
                match verify_witness(&wit, f, t) {
                    Ok(()) => return Ok(wit),
                    Err(e) => last = e.to_string(),
                }
            }
            Err(StepError::Budget(step)) => {
                return Err(EmbedError::RetryBudgetExhausted {
                    step,
                    attempts: opts.retry_budget,
                })
            }
            Err(StepError::Numerical) => last = "lost precision during elimination".into(),
        }
        w *= 2;
    }
    Err(EmbedError::VerificationFailed(last))
}

/// Totally isotropic rows from the fixed sum-of-squares patterns:
/// `(G,H)` pairs for p ≡ 1 mod 4; for p ≡ 3 mod 4 the blocks
/// `(a,b,e,0), (-b,a,0,e)`, a trailing `(a,b,e)`, or in the Lorentzian case
/// `e_j + s⁻¹ e_n` with `s² = -λ`.
pub fn isotropic_witness(
    ctx: &PrimeContext,
    t: TargetSpace,
    k: usize,
    precision: u32,
) -> Result<Witness, EmbedError> {
    let bound = max_isotropic_dim(t, ctx);
    if k > bound {
        return Err(EmbedError::NotEmbeddable {
            form: DiagonalForm::zeros(ctx, k).to_dsl(),
            target: t,
            reason: super::Reason::IsotropicBoundExceeded,
        });
    }
    let wp = precision + 4;
    let n = t.n;
    let free = if t.family == Family::Lorentzian { n - 1 } else { n };
    let zero = PAdic::zero(ctx);
    let mut rows: Vec<Vec<PAdic>> = Vec::with_capacity(k);
    let row = |entries: &[(usize, &PAdic)]| {
        let mut r = vec![zero.clone(); n];
        for (i, x) in entries {
            r[*i] = (*x).clone();
        }
        r
    };
    match hensel_constants(ctx, wp) {
        HenselConstants::One(c) => {
            for i in 0..k {
                rows.push(row(&[(2 * i, &c.g), (2 * i + 1, &c.h)]));
            }
        }
        HenselConstants::Three(c) => {
            let blocks = (k / 2).min(free / 4);
            let nb = c.b.neg();
            for b in 0..blocks {
                let o = 4 * b;
                rows.push(row(&[(o, &c.a), (o + 1, &c.b), (o + 2, &c.e)]));
                rows.push(row(&[(o, &nb), (o + 1, &c.a), (o + 3, &c.e)]));
            }
            let used = 4 * blocks;
            match k - 2 * blocks {
                0 => {}
                1 if free - used >= 3 => {
                    rows.push(row(&[(used, &c.a), (used + 1, &c.b), (used + 2, &c.e)]));
                }
                1 if t.family == Family::Lorentzian && free > used => {
                    let l = PAdic::from_i64(-(ctx.lambda() as i64), ctx, wp);
                    let s_inv = l.sqrt().and_then(|s| s.inv()).expect("-λ is a square");
                    let one = PAdic::from_i64(1, ctx, wp);
                    rows.push(row(&[(used, &one), (n - 1, &s_inv)]));
                }
                _ => {
                    return Err(EmbedError::VerificationFailed(format!(
                        "no isotropic pattern for k={k} in {t}"
                    )))
                }
            }
        }
    }
    let wit = Witness {
        vectors: rows,
        precision,
    };
    verify_witness(&wit, &DiagonalForm::zeros(ctx, k), t)?;
    Ok(wit)
}

fn qval(x: &BigRational, p: &BigInt) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (a, _) = split_p(x.numer(), p);
    let (b, _) = split_p(x.denom(), p);
    Some(a as i64 - b as i64)
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

/// Checks the Gram identity modulo `p^N` and linear independence.
///
/// Each coordinate is taken as the rational its digits spell, and the known
/// digits bound the error: a product of two entries known to absolute
/// precisions `a_x, a_y` is known to `min(v_x + a_y, v_y + a_x, a_x + a_y)`.
pub fn verify_witness(w: &Witness, f: &DiagonalForm, t: TargetSpace) -> Result<(), EmbedError> {
    let ctx = f.ctx();
    let p = ctx.p_big();
    let fail = |m: String| Err(EmbedError::VerificationFailed(m));
    let k = f.zero_count();
    let m = f.dim();
    if w.vectors.len() != m || w.vectors.iter().any(|r| r.len() != t.n) {
        return fail(format!("expected {m} rows of length {}", t.n));
    }
    let q: Vec<Vec<BigRational>> = w
        .vectors
        .iter()
        .map(|r| r.iter().map(PAdic::approximant).collect())
        .collect();
    let vals: Vec<Vec<Option<i64>>> = q.iter().map(|r| r.iter().map(|x| qval(x, p)).collect()).collect();
    let abs: Vec<Vec<Option<i64>>> = w
        .vectors
        .iter()
        .map(|r| r.iter().map(PAdic::absolute_precision).collect())
        .collect();
    let coef: Vec<BigRational> = t
        .coefficients(ctx)
        .into_iter()
        .map(|c| BigRational::from_integer(c.into()))
        .collect();
    let n_abs = w.precision as i64;
    for i in 0..m {
        for j in i..m {
            let mut s = BigRational::zero();
            let mut known: Option<i64> = None;
            for c in 0..t.n {
                s += &coef[c] * &q[i][c] * &q[j][c];
                let e = min_opt(
                    min_opt(add_opt(vals[i][c], abs[j][c]), add_opt(vals[j][c], abs[i][c])),
                    add_opt(abs[i][c], abs[j][c]),
                );
                known = min_opt(known, e);
            }
            let want = if i == j && i >= k {
                f.classes()[i - k].representative_rational(ctx)
            } else {
                BigRational::zero()
            };
            if known.is_some_and(|a| a < n_abs) {
                return fail(format!("entry ({i},{j}) known only mod p^{}", known.unwrap()));
            }
            if qval(&(s - want), p).is_some_and(|v| v < n_abs) {
                return fail(format!("Gram entry ({i},{j}) differs mod p^{n_abs}"));
            }
        }
    }
    certify_independent(p, &q, &vals, &abs).map_err(EmbedError::VerificationFailed)
}

/// Finds a nonzero maximal minor of the rational rows and checks that its
/// valuation is below what the unknown digits could disturb.
fn certify_independent(
    p: &BigInt,
    q: &[Vec<BigRational>],
    vals: &[Vec<Option<i64>>],
    abs: &[Vec<Option<i64>>],
) -> Result<(), String> {
    let m = q.len();
    if m == 0 {
        return Ok(());
    }
    let n = q[0].len();
    let mut a: Vec<Vec<BigRational>> = q.to_vec();
    let mut cols = Vec::with_capacity(m);
    let mut det = BigRational::one();
    let mut row = 0;
    for c in 0..n {
        if row == m {
            break;
        }
        let Some(piv) = (row..m).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        let pv = a[row][c].clone();
        det *= &pv;
        for r in row + 1..m {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pv;
            for cc in c..n {
                let t = &f * &a[row][cc];
                a[r][cc] -= t;
            }
        }
        cols.push(c);
        row += 1;
    }
    if row < m {
        return Err(format!("rows have rank {row} < {m}"));
    }
    let v_min = cols
        .iter()
        .flat_map(|&c| vals.iter().map(move |r| r[c]))
        .flatten()
        .min()
        .unwrap_or(0)
        .min(0);
    let a_min = cols
        .iter()
        .flat_map(|&c| abs.iter().map(move |r| r[c]))
        .flatten()
        .min();
    let Some(a_min) = a_min else {
        return Ok(()); // exact entries: the rational minor is the minor
    };
    let limit = a_min + (m as i64 - 1) * v_min;
    let dv = qval(&det, p).expect("nonzero minor");
    if dv < limit {
        Ok(())
    } else {
        Err(format!("minor valuation {dv} not below error bound {limit}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;
    use crate::symbols::SquareClass;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn small_examples() {
        let c5 = ctx(5);
        let w = witness(&parse_form("diag(1)", &c5).unwrap(), TargetSpace::euclidean(2)).unwrap();
        assert_eq!(w.vectors.len(), 1);
        let c7 = ctx(7);
        let f = parse_form("diag(l)", &c7).unwrap();
        assert!(witness(&f, TargetSpace::euclidean(2)).is_ok());
        let f = parse_form("diag(p)", &c7).unwrap();
        assert!(matches!(
            witness(&f, TargetSpace::euclidean(2)),
            Err(EmbedError::NotEmbeddable { .. })
        ));
    }

    #[test]
    fn every_small_embedding_has_a_witness() {
        for p in [3u64, 5, 7, 13] {
            let c = ctx(p);
            let mut forms = vec![];
            for a in SquareClass::ALL {
                forms.push(vec![a]);
                for b in SquareClass::ALL {
                    forms.push(vec![a, b]);
                    for d in SquareClass::ALL {
                        forms.push(vec![a, b, d]);
                    }
                }
            }
            for cls in forms {
                for k in 0..=2 {
                    let f = DiagonalForm::new(&c, k, cls.clone());
                    for n in f.dim()..=f.dim() + 3 {
                        for t in [TargetSpace::euclidean(n), TargetSpace::lorentzian(n)] {
                            if decide(&f, t).embeds {
                                let w = witness(&f, t)
                                    .unwrap_or_else(|e| panic!("{f:?} into {t}: {e}"));
                                verify_witness(&w, &f, t).unwrap();
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn isotropic_patterns_reach_the_bound() {
        for p in [3u64, 7, 5, 13] {
            let c = ctx(p);
            for n in 1..=14 {
                for t in [TargetSpace::euclidean(n), TargetSpace::lorentzian(n)] {
                    let k = max_isotropic_dim(t, &c);
                    for j in 0..=k {
                        isotropic_witness(&c, t, j, 20).unwrap();
                    }
                    assert!(isotropic_witness(&c, t, k + 1, 20).is_err());
                }
            }
        }
    }

    #[test]
    fn tampering_is_detected() {
        let c = ctx(5);
        let f = parse_form("diag(l,p)", &c).unwrap();
        let t = TargetSpace::euclidean(4);
        let mut w = witness(&f, t).unwrap();
        let x = &w.vectors[0][0];
        w.vectors[0][0] = x
            .add(&PAdic::from_i64(1, &c, 30).shift(10))
            .unwrap();
        assert!(verify_witness(&w, &f, t).is_err());
    }

    #[test]
    fn seeds_are_reproducible() {
        let c = ctx(13);
        let f = parse_form("diag(1,l,p,0)", &c).unwrap();
        let t = TargetSpace::lorentzian(8);
        let a = witness(&f, t).unwrap();
        let b = witness(&f, t).unwrap();
        assert_eq!(a, b);
        let other = WitnessOptions {
            seed: 7,
            ..Default::default()
        };
        verify_witness(&witness_with(&f, t, other).unwrap(), &f, t).unwrap();
    }

    #[test]
    fn strings_round_trip() {
        let c = ctx(7);
        let f = parse_form("diag(p,0)", &c).unwrap();
        let t = TargetSpace::euclidean(5);
        let w = witness(&f, t).unwrap();
        let back = Witness::from_strings(&w.to_strings(), &c, w.precision).unwrap();
        assert_eq!(back, w);
    }
}
