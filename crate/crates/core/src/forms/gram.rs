use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::padic::{parse_rational, PrimeContext};
use crate::symbols::classify_rational;

use super::{DiagonalForm, FormError};

/// A quadratic space given by a symmetric Gram matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    ctx: PrimeContext,
    matrix: Vec<Vec<BigRational>>,
}

/// Result of congruence diagonalization: `basis[i]` are the columns of P with
/// `Pᵀ M P = diag(entries)`. Zero entries come last and their basis vectors
/// span the radical.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub entries: Vec<BigRational>,
    pub basis: Vec<Vec<BigRational>>,
    pub rank: usize,
}

impl Diagonalization {
    pub fn radical(&self) -> &[Vec<BigRational>] {
        &self.basis[self.rank..]
    }
}

impl GramForm {
    pub fn new(ctx: &PrimeContext, matrix: Vec<Vec<BigRational>>) -> Result<Self, FormError> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(FormError::BadShape(n));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(FormError::NotSymmetric(i, j));
                }
            }
        }
        Ok(GramForm {
            ctx: ctx.clone(),
            matrix,
        })
    }

    pub fn from_integers(ctx: &PrimeContext, rows: &[Vec<i64>]) -> Result<Self, FormError> {
        let m = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::new(ctx, m)
    }

    /// Parses `{"n":3,"m":[[...],...]}`. Entries are JSON integers or strings
    /// holding integers, fractions or `p^k*u` tokens.
    pub fn from_json(ctx: &PrimeContext, text: &str) -> Result<Self, FormError> {
        let v: Value = serde_json::from_str(text).map_err(|e| FormError::Json(e.to_string()))?;
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| FormError::Json("missing integer field `n`".into()))? as usize;
        let rows = v
            .get("m")
            .and_then(Value::as_array)
            .ok_or_else(|| FormError::Json("missing array field `m`".into()))?;
        if rows.len() != n {
            return Err(FormError::BadShape(n));
        }
        let mut matrix = Vec::with_capacity(n);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| FormError::Json("rows must be arrays".into()))?;
            let parsed = row
                .iter()
                .map(|e| entry(e, ctx))
                .collect::<Result<Vec<_>, _>>()?;
            matrix.push(parsed);
        }
        Self::new(ctx, matrix)
    }

    pub fn to_json(&self) -> String {
        let m: Vec<Vec<Value>> = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        if x.is_integer() {
                            match i64::try_from(x.numer()) {
                                Ok(i) => Value::from(i),
                                Err(_) => Value::from(x.to_string()),
                            }
                        } else {
                            Value::from(x.to_string())
                        }
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "n": self.dim(), "m": m }).to_string()
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<BigRational>] {
        &self.matrix
    }

    /// B(u, v) = uᵀ M v.
    pub fn bilinear(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, row) in self.matrix.iter().enumerate() {
            if u[i].is_zero() {
                continue;
            }
            let mut s = BigRational::zero();
            for (j, m) in row.iter().enumerate() {
                if !v[j].is_zero() && !m.is_zero() {
                    s += m * &v[j];
                }
            }
            acc += &u[i] * s;
        }
        acc
    }

    /// Pᵀ M P where `cols` are the columns of P.
    pub fn congruent(&self, cols: &[Vec<BigRational>]) -> GramForm {
        let k = cols.len();
        let mut m = vec![vec![BigRational::zero(); k]; k];
        for i in 0..k {
            for j in i..k {
                let b = self.bilinear(&cols[i], &cols[j]);
                m[j][i] = b.clone();
                m[i][j] = b;
            }
        }
        GramForm {
            ctx: self.ctx.clone(),
            matrix: m,
        }
    }

    pub fn diagonalize(&self) -> DiagonalForm {
        diagonalize(self)
    }
}

fn entry(v: &Value, ctx: &PrimeContext) -> Result<BigRational, FormError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| FormError::Json(format!("non-integer number {n}; use a string \"a/b\""))),
        Value::String(s) => {
            parse_rational(s, ctx).map_err(|_| FormError::Json(format!("bad entry `{s}`")))
        }
        other => Err(FormError::Json(format!("bad entry {other}"))),
    }
}

/// Symmetric Gaussian elimination over Q.
///
/// Pivots on the first nonzero diagonal entry of the remaining block; when the
/// block has zero diagonal but a nonzero entry at (i, j), replaces basis
/// vector i by `b_i + b_j` first. Stops when the remaining block vanishes;
/// the vectors left over span the radical.
pub fn diagonalize_exact(g: &GramForm) -> Diagonalization {
    let n = g.dim();
    let mut m = g.matrix.clone();
    let mut basis: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut entries = Vec::new();

    while !active.is_empty() {
        let pivot = match active.iter().position(|&i| !m[i][i].is_zero()) {
            Some(pos) => pos,
            None => {
                let pair = active.iter().enumerate().find_map(|(a, &i)| {
                    active[a + 1..]
                        .iter()
                        .find(|&&j| !m[i][j].is_zero())
                        .map(|&j| (a, i, j))
                });
                let Some((a, i, j)) = pair else { break };
                // b_i <- b_i + b_j
                for r in 0..n {
                    let t = m[j][r].clone();
                    m[i][r] += t;
                }
                for r in 0..n {
                    let t = m[r][j].clone();
                    m[r][i] += t;
                }
                for r in 0..n {
                    let t = basis[j][r].clone();
                    basis[i][r] += t;
                }
                a
            }
        };
        let i = active.remove(pivot);
        let d = m[i][i].clone();
        for &j in &active {
            if m[j][i].is_zero() {
                continue;
            }
            let f = &m[j][i] / &d;
            for r in 0..n {
                let t = &f * &m[i][r];
                m[j][r] -= t;
            }
            for r in 0..n {
                let t = &f * &m[r][i];
                m[r][j] -= t;
            }
            for r in 0..n {
                let t = &f * &basis[i][r];
                basis[j][r] -= t;
            }
        }
        entries.push(d);
        pivots.push(i);
    }
    let rank = entries.len();
    let mut ordered: Vec<Vec<BigRational>> = pivots.iter().map(|&i| basis[i].clone()).collect();
    for &i in &active {
        ordered.push(basis[i].clone());
        entries.push(BigRational::zero());
    }
    Diagonalization {
        entries,
        basis: ordered,
        rank,
    }
}

/// Diagonal model of a Gram form: radical dimension plus the square classes
/// of a diagonalized complement.
pub fn diagonalize(g: &GramForm) -> DiagonalForm {
    let d = diagonalize_exact(g);
    let classes = d.entries[..d.rank]
        .iter()
        .map(|e| classify_rational(e, g.ctx()).expect("pivots are nonzero"))
        .collect();
    DiagonalForm::new(g.ctx(), g.dim() - d.rank, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SquareClass::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let c = ctx(5);
        let g = GramForm::from_integers(&c, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let f = g.diagonalize();
        assert_eq!((f.zero_count(), f.classes()), (0, &[One, One, One][..]));
        let g = GramForm::from_integers(&c, &[vec![0, 0], vec![0, 0]]).unwrap();
        let f = g.diagonalize();
        assert_eq!((f.zero_count(), f.rank()), (2, 0));
    }

    #[test]
    fn hyperbolic_plane() {
        // b_0 + b_1 gives diag(2, -1/2) ~ diag(1, -1); -1 is a square for p ≡ 1 mod 4
        let squares5: Vec<u64> = (1..5).map(|x| x * x % 5).collect();
        assert!(squares5.contains(&4));
        for p in [5u64, 13] {
            let g = GramForm::from_integers(&ctx(p), &[vec![0, 1], vec![1, 0]]).unwrap();
            let f = g.diagonalize();
            assert!(f.equivalent(&DiagonalForm::ones(&ctx(p), 2)));
        }
        let g = GramForm::from_integers(&ctx(7), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(g
            .diagonalize()
            .equivalent(&DiagonalForm::nondegenerate(&ctx(7), vec![One, Lambda])));
    }

    #[test]
    fn radical_vectors_are_in_the_kernel() {
        let c = ctx(7);
        let g = GramForm::from_integers(
            &c,
            &[vec![1, 2, 3], vec![2, 4, 6], vec![3, 6, 9]],
        )
        .unwrap();
        let d = diagonalize_exact(&g);
        assert_eq!(d.rank, 1);
        for v in d.radical() {
            for row in g.matrix() {
                let s: BigRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
        // Pᵀ M P is the diagonal
        let back = g.congruent(&d.basis);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d.entries[i].clone() } else { BigRational::zero() };
                assert_eq!(back.matrix()[i][j], expect);
            }
        }
    }

    #[test]
    fn rejects_asymmetric_and_bad_json() {
        let c = ctx(3);
        assert_eq!(
            GramForm::from_integers(&c, &[vec![1, 2], vec![3, 1]]).unwrap_err(),
            FormError::NotSymmetric(1, 0)
        );
        assert!(GramForm::from_json(&c, r#"{"n":2,"m":[[1,0]]}"#).is_err());
        assert!(GramForm::from_json(&c, r#"{"n":1,"m":[[0.5]]}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = ctx(5);
        let g = GramForm::from_json(&c, r#"{"n":2,"m":[[1,"1/2"],["1/2","p^2*3"]]}"#).unwrap();
        assert_eq!(g.matrix()[1][1], BigRational::from_integer(75.into()));
        let again = GramForm::from_json(&c, &g.to_json()).unwrap();
        assert_eq!(again, g);
    }
}
