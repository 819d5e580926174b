//! `diag(1,l,p,lp,0^2)` style form descriptions.
//!
//! Items are class tokens `1 | l | p | lp | 0` or rational literals
//! (`-2`, `3/4`), each optionally followed by `^k` for repetition. Rational
//! literals are classified on parse; zero entries count toward the radical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::padic::PrimeContext;
use crate::symbols::{classify_rational, SquareClass};

use super::{DiagonalForm, FormError};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormError> {
        Err(FormError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FormError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += self.peek().unwrap().len_utf8();
        }
        &self.src[start..self.pos]
    }
}

enum Item {
    Zero,
    Class(SquareClass),
}

fn parse_item(cur: &mut Cursor<'_>, ctx: &PrimeContext) -> Result<Item, FormError> {
    cur.skip_ws();
    let start = cur.pos;
    match cur.peek() {
        Some('l') => {
            cur.pos += 1;
            if cur.peek() == Some('p') {
                cur.pos += 1;
                Ok(Item::Class(SquareClass::LambdaP))
            } else {
                Ok(Item::Class(SquareClass::Lambda))
            }
        }
        Some('p') => {
            cur.pos += 1;
            Ok(Item::Class(SquareClass::P))
        }
        Some(c) if c == '-' || c.is_ascii_digit() => {
            if c == '-' {
                cur.pos += 1;
            }
            let num = cur.take_while(|c| c.is_ascii_digit());
            if num.is_empty() {
                cur.pos = start;
                return cur.err("expected a number");
            }
            let mut value = BigRational::from_integer(
                cur.src[start..cur.pos]
                    .parse::<BigInt>()
                    .expect("digits parse"),
            );
            if cur.peek() == Some('/') {
                cur.pos += 1;
                let den_pos = cur.pos;
                let den = cur.take_while(|c| c.is_ascii_digit());
                let den: BigInt = match den.parse() {
                    Ok(d) => d,
                    Err(_) => {
                        cur.pos = den_pos;
                        return cur.err("expected a denominator");
                    }
                };
                if den.is_zero() {
                    cur.pos = den_pos;
                    return cur.err("zero denominator");
                }
                value /= BigRational::from_integer(den);
            }
            if value.is_zero() {
                Ok(Item::Zero)
            } else {
                Ok(Item::Class(classify_rational(&value, ctx).expect("nonzero")))
            }
        }
        Some(_) => cur.err("expected 1, l, p, lp, 0 or a rational entry"),
        None => cur.err("unexpected end of input"),
    }
}

/// Parses the form DSL. Error positions are byte offsets into `src`.
pub fn parse_form(src: &str, ctx: &PrimeContext) -> Result<DiagonalForm, FormError> {
    let mut cur = Cursor { src, pos: 0 };
    cur.skip_ws();
    if !src[cur.pos..].starts_with("diag") {
        return cur.err("expected `diag(`");
    }
    cur.pos += 4;
    cur.expect('(')?;
    let mut zeros = 0usize;
    let mut classes = Vec::new();
    if !cur.eat(')') {
        loop {
            let item = parse_item(&mut cur, ctx)?;
            let mut reps = 1usize;
            if cur.eat('^') {
                cur.skip_ws();
                let at = cur.pos;
                let k = cur.take_while(|c| c.is_ascii_digit());
                reps = match k.parse() {
                    Ok(k) => k,
                    Err(_) => {
                        cur.pos = at;
                        return cur.err("expected a repetition count");
                    }
                };
            }
            match item {
                Item::Zero => zeros += reps,
                Item::Class(c) => classes.extend(std::iter::repeat(c).take(reps)),
            }
            if cur.eat(')') {
                break;
            }
            cur.expect(',')?;
        }
    }
    cur.skip_ws();
    if cur.pos != src.len() {
        return cur.err("trailing input");
    }
    Ok(DiagonalForm::new(ctx, zeros, classes))
}
