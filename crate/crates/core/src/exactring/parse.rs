//! Text grammar shared by every input file.
//!
//! Integer coefficients; variables `u`, `v`, `L` (= `u*v`), `T`, `T1`..`Tr`,
//! `t`, `q`, `s`, `w`; operators `+ - * ^` and parentheses. Exponents are
//! integers or parenthesised rationals such as `u^(2/3)`. Juxtaposition is
//! read as multiplication, so `2uv` and `6(1+s)` both parse. Whitespace is
//! insignificant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Monomial: variable name → nonzero rational exponent.
pub type Monomial = BTreeMap<String, Rational64>;

/// Sparse multivariate Laurent polynomial with rational exponents, the raw
/// output of the parser. Typed views (EPoly, UniPoly) are built from it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn constant(c: BigInt) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::new(), c);
        }
        p
    }

    pub fn var(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(name.to_string(), Rational64::one());
        let mut p = Poly::default();
        p.terms.insert(m, BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let vanished = {
            let e = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c;
            e.is_zero()
        };
        if vanished {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(mul_monomials(m1, m2), c1 * c2);
            }
        }
        r
    }

    fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn pow(&self, e: Rational64) -> Result<Poly> {
        if e.is_integer() && !e.is_negative() {
            let n = e.to_integer();
            let mut r = Poly::constant(BigInt::one());
            for _ in 0..n {
                r = r.mul(self);
            }
            return Ok(r);
        }
        // Fractional or negative powers only make sense for unit monomials.
        match self.as_monomial() {
            Some((m, c)) if c.is_one() => {
                let mut mm = Monomial::new();
                for (v, x) in m {
                    let y = *x * e;
                    if !y.is_zero() {
                        mm.insert(v.clone(), y);
                    }
                }
                let mut p = Poly::default();
                p.terms.insert(mm, BigInt::one());
                Ok(p)
            }
            Some((m, c)) if m.is_empty() && (c == &BigInt::from(-1)) && e.is_integer() => {
                let n = e.to_integer();
                Ok(Poly::constant(if n % 2 == 0 { BigInt::one() } else { -BigInt::one() }))
            }
            _ => Err(Error::Parse(format!(
                "exponent {e} is only allowed on a monomial with coefficient 1"
            ))),
        }
    }
}

pub(crate) fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut r = a.clone();
    for (v, e) in b {
        let x = r.entry(v.clone()).or_insert_with(Rational64::zero);
        *x += e;
        if x.is_zero() {
            r.remove(v);
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Num(s.parse().expect("digits"))));
                continue;
            }
            'T' => {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Var(chars[start..i].iter().collect())));
                continue;
            }
            'u' | 'v' | 'L' | 't' | 'q' | 's' | 'w' => out.push((start, Tok::Var(c.to_string()))),
            '+' => out.push((start, Tok::Plus)),
            '-' | '−' => out.push((start, Tok::Minus)),
            '*' | '·' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character '{other}' at column {}",
                    start + 1
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| c + 1).unwrap_or(0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        let col = self.col();
        match self.bump() {
            Some(ref x) if *x == t => Ok(()),
            other => Err(Error::Parse(format!(
                "expected {t:?} at column {col}, found {other:?}"
            ))),
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = self.exponent()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rational64> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Rational64::from_integer(big_to_i64(&n)?)),
            Some(Tok::Minus) => match self.bump() {
                Some(Tok::Num(n)) => Ok(-Rational64::from_integer(big_to_i64(&n)?)),
                _ => Err(Error::Parse(format!("bad exponent at column {col}"))),
            },
            Some(Tok::LParen) => {
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.bump();
                    true
                } else {
                    false
                };
                let num = match self.bump() {
                    Some(Tok::Num(n)) => big_to_i64(&n)?,
                    _ => return Err(Error::Parse(format!("bad exponent at column {col}"))),
                };
                let mut e = Rational64::from_integer(num);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let den = match self.bump() {
                        Some(Tok::Num(n)) => big_to_i64(&n)?,
                        _ => return Err(Error::Parse(format!("bad exponent at column {col}"))),
                    };
                    if den == 0 {
                        return Err(Error::Parse(format!("zero denominator at column {col}")));
                    }
                    e = Rational64::new(num, den);
                }
                self.expect(Tok::RParen)?;
                Ok(if neg { -e } else { e })
            }
            other => Err(Error::Parse(format!(
                "bad exponent at column {col}: {other:?}"
            ))),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Poly::constant(n)),
            Some(Tok::Var(v)) if v == "L" => Ok(Poly::var("u").mul(&Poly::var("v"))),
            Some(Tok::Var(v)) => Ok(Poly::var(&v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Minus) => Ok(self.power()?.neg()),
            other => Err(Error::Parse(format!(
                "unexpected token at column {col}: {other:?}"
            ))),
        }
    }
}

fn big_to_i64(n: &BigInt) -> Result<i64> {
    n.to_i64()
        .filter(|x| x.abs() < (1 << 40))
        .ok_or_else(|| Error::Parse(format!("exponent {n} out of range")))
}

/// Parses a polynomial expression.
pub fn parse_poly(src: &str) -> Result<Poly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let r = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at column {} in \"{src}\"",
            p.col()
        )));
    }
    Ok(r)
}

/// Parses a character string ("0", "1/2", "2/3") into a reduced fraction
/// in [0, 1). Unreduced or out-of-range fractions are rejected.
pub fn parse_character(src: &str) -> Result<Rational64> {
    let s = src.trim();
    let bad = || Error::Parse(format!("malformed character key \"{src}\""));
    let (a, n) = match s.split_once('/') {
        Some((a, n)) => (
            a.trim().parse::<i64>().map_err(|_| bad())?,
            n.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (s.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if n <= 0 || a < 0 || a >= n {
        return Err(bad());
    }
    if num_integer::gcd(a, n) != 1 {
        return Err(Error::Parse(format!(
            "character key \"{src}\" is not a reduced fraction"
        )));
    }
    Ok(Rational64::new(a, n))
}

/// Parses a rational number such as `"2/3"`, `"-1"` or `"5"`.
pub fn parse_rational(src: &str) -> Result<Rational64> {
    let s = src.trim();
    let bad = || Error::Parse(format!("malformed rational \"{src}\""));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
