//! Text form of scalars and small denominator elements.
//!
//! ```text
//! (w^2 + w + 6)/(1 + w)        6/(1 + w)^2        1/2+3/4√2
//! ((1+√2)*w1 - w2)/(√2 + w2)^3/(1-√2 + w1 - w2)
//! ```
//! Variables are `w` when `d = 1` and `w1..wd` otherwise (`ω` is accepted on
//! input). Each denominator factor is a resonance form `(c + J·w)^k`, divided out one
//! at a time and sorted by its integer vector `J`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::field::ExactScalar;
use super::frequency::{primitive, FrequencyVector, LinearForm};
use super::poly::OmegaPoly;
use super::sd::SdElement;
use crate::error::{Error, Result};

fn var_name(d: usize, i: usize) -> String {
    if d == 1 {
        "w".to_string()
    } else {
        format!("w{}", i + 1)
    }
}

fn monomial_text(e: &[u32]) -> String {
    let d = e.len();
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { var_name(d, i) } else { format!("{}^{}", var_name(d, i), k) })
        .collect::<Vec<_>>()
        .join("*")
}

fn term_text(e: &[u32], c: &ExactScalar) -> String {
    let m = monomial_text(e);
    if m.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        return m;
    }
    if (-c).is_one() {
        return format!("-{m}");
    }
    if c.is_compound() {
        format!("({c})*{m}")
    } else {
        format!("{c}*{m}")
    }
}

fn join_terms(parts: Vec<String>) -> String {
    let mut out = String::new();
    for (k, t) in parts.into_iter().enumerate() {
        if k == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

impl fmt::Display for OmegaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        write!(f, "{}", join_terms(terms.into_iter().map(|(e, c)| term_text(e, c)).collect()))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let mut parts = vec![self.constant().to_string()];
        for (i, &k) in self.j().iter().enumerate() {
            if k == 0 {
                continue;
            }
            let v = var_name(d, i);
            parts.push(match k {
                1 => v,
                -1 => format!("-{v}"),
                _ => format!("{k}*{v}"),
            });
        }
        write!(f, "{}", join_terms(parts))
    }
}

impl fmt::Display for SdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator().to_string();
        if self.denominator().is_empty() {
            return write!(f, "{num}");
        }
        let simple =
            self.numerator().terms().len() == 1 && !self.numerator().terms().values().next().unwrap().is_compound();
        if simple {
            write!(f, "{num}")?;
        } else {
            write!(f, "({num})")?;
        }
        for (form, &k) in self.denominator() {
            if k == 1 {
                write!(f, "/({form})")?;
            } else {
                write!(f, "/({form})^{k}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str, d: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = chars[start..i].iter().collect();
                out.push(Tok::Num(txt.parse().map_err(|_| Error::Parse(txt.clone()))?));
            }
            'w' | 'ω' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let idx = if start == i {
                    if d != 1 {
                        return Err(Error::Parse(format!("bare variable w needs d = 1, have d = {d}")));
                    }
                    0
                } else {
                    let n: usize = chars[start..i].iter().collect::<String>().parse().unwrap();
                    if n == 0 || n > d {
                        return Err(Error::Parse(format!("variable w{n} out of range for d = {d}")));
                    }
                    n - 1
                };
                out.push(Tok::Var(idx));
            }
            '√' => {
                out.push(Tok::Sqrt);
                i += 1;
            }
            's' if chars[i..].iter().take(4).collect::<String>() == "sqrt" => {
                out.push(Tok::Sqrt);
                i += 4;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            c => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    d: usize,
    alpha: Option<&'a FrequencyVector>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.bump() {
            Some(ref x) if *x == t => Ok(()),
            other => Err(Error::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        match self.bump() {
            Some(Tok::Num(n)) => n.clone().try_into().map_err(|_| Error::Parse(format!("{n} too large"))),
            other => Err(Error::Parse(format!("expected integer, found {other:?}"))),
        }
    }

    fn finish(&self, s: &str) -> Result<()> {
        if self.pos != self.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<SdElement> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                neg = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if neg { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SdElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = self.divide(acc)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// Division is only defined by nonzero constants and powers of resonance forms.
    fn divide(&mut self, acc: SdElement) -> Result<SdElement> {
        let base = self.atom()?;
        let mut k = 1;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            k = self.small_int()?;
        }
        if let Some(c) = base.as_scalar() {
            return acc.div_scalar(&c.pow(k));
        }
        if !base.denominator().is_empty() {
            return Err(Error::Parse(format!("cannot divide by {base}")));
        }
        let (g, form) = form_from_poly(base.numerator())?;
        if let Some(a) = self.alpha {
            if a.pair(form.j())? != *form.constant() {
                return Err(Error::Parse(format!("form ({form}) is not (alpha + w, J)")));
            }
        }
        Ok(acc.div_scalar(&g.pow(k))?.div_form(&form, k))
    }

    fn factor(&mut self) -> Result<SdElement> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let k = self.small_int()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn sqrt_part(&mut self) -> Result<ExactScalar> {
        self.expect(Tok::Sqrt)?;
        let m = self.small_int()?;
        ExactScalar::sqrt(m)
    }

    fn atom(&mut self) -> Result<SdElement> {
        let d = self.d;
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut r = BigRational::from_integer(n);
                if let (Some(Tok::Slash), Some(Tok::Num(_))) = (self.peek(), self.peek_at(1)) {
                    self.bump();
                    if let Some(Tok::Num(den)) = self.bump() {
                        if den == BigInt::from(0) {
                            return Err(Error::DivisionByZero);
                        }
                        r /= BigRational::from_integer(den);
                    }
                }
                let mut c = ExactScalar::from_rational(r);
                if let Some(Tok::Sqrt) = self.peek() {
                    c = &c * &self.sqrt_part()?;
                }
                Ok(SdElement::constant(d, c))
            }
            Some(Tok::Sqrt) => {
                self.pos -= 1;
                Ok(SdElement::constant(d, self.sqrt_part()?))
            }
            Some(Tok::Var(i)) => Ok(SdElement::omega(d, i)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn form_from_poly(p: &OmegaPoly) -> Result<(ExactScalar, LinearForm)> {
    let d = p.nvars();
    if p.degree() > 1 {
        return Err(Error::Parse(format!("denominator factor {p} is not linear")));
    }
    let mut j = vec![0i64; d];
    for (e, c) in p.terms() {
        if let Some(i) = e.iter().position(|&k| k == 1) {
            let r = c
                .as_rational()
                .filter(|r| r.denom().is_one())
                .ok_or_else(|| Error::Parse(format!("non-integer coefficient {c} in form")))?;
            j[i] = r.numer().try_into().map_err(|_| Error::Parse("coefficient too large".into()))?;
        }
    }
    let (g, jp) = primitive(&j);
    if g == 0 {
        return Err(Error::Parse(format!("denominator factor {p} has no w dependence")));
    }
    let g = ExactScalar::from_integer(g);
    let constant = p.constant_term().checked_div(&g)?;
    Ok((g, LinearForm::from_parts(jp, constant)?))
}

/// Parses an element of the small denominator ring in `d` variables. When
/// `alpha` is given, every denominator form must be `(alpha + w, J)`.
pub fn parse_sd(s: &str, d: usize, alpha: Option<&FrequencyVector>) -> Result<SdElement> {
    let mut p = Parser { toks: tokenize(s, d)?, pos: 0, d, alpha };
    let x = p.expr()?;
    p.finish(s)?;
    Ok(x)
}

/// Parses `3`, `-3/2`, `√2`, `1/2+3/4√2`, `2-sqrt2`.
pub fn parse_scalar(s: &str) -> Result<ExactScalar> {
    let mut p = Parser { toks: tokenize(s, 1)?, pos: 0, d: 1, alpha: None };
    let e = p.expr()?;
    p.finish(s)?;
    e.as_scalar().ok_or_else(|| Error::Parse(format!("{s:?} is not a constant")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha1() -> FrequencyVector {
        FrequencyVector::from_integers(&[1]).unwrap()
    }

    #[test]
    fn scalars_round_trip() {
        for s in ["3", "-3/2", "√2", "-√2", "1/2+3/4√2", "2-√2", "0"] {
            assert_eq!(parse_scalar(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_scalar("2 - sqrt2").unwrap().to_string(), "2-√2");
        assert!(parse_scalar("w").is_err());
    }

    #[test]
    fn sd_rendering() {
        let x = parse_sd("w + 6/(1 + w)", 1, Some(&alpha1())).unwrap();
        assert_eq!(x.to_string(), "(w^2 + w + 6)/(1 + w)");
        let y = parse_sd("(w^2 + w + 6)/(1 + w)", 1, Some(&alpha1())).unwrap();
        assert_eq!(x, y);
        let z = parse_sd("-3/(1 + w)^5", 1, None).unwrap();
        assert_eq!(z.to_string(), "-3/(1 + w)^5");
    }

    #[test]
    fn nonprimitive_forms_are_normalized() {
        // 1/(3 + 3w) = (1/3)/(1 + w)
        let x = parse_sd("1/(3 + 3*w)", 1, Some(&alpha1())).unwrap();
        assert_eq!(x.to_string(), "1/3/(1 + w)");
        let again = parse_sd(&x.to_string(), 1, Some(&alpha1())).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn two_variables() {
        let a = FrequencyVector::new(vec![ExactScalar::one(), ExactScalar::sqrt(2).unwrap()]).unwrap();
        let s = "((1+√2)*w1 - w2)/(√2 + w2)^3/(1-√2 + w1 - w2)";
        let x = parse_sd(s, 2, Some(&a)).unwrap();
        assert_eq!(x.to_string(), s);
        let back = parse_sd(&x.to_string(), 2, Some(&a)).unwrap();
        assert_eq!(x, back);
        assert!(parse_sd("1/(2 + w1)", 2, Some(&a)).is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_sd("1/(w^2 + 1)", 1, None).is_err());
        assert!(parse_sd("1/(0)", 1, None).is_err());
        assert!(parse_sd("w3", 2, None).is_err());
        assert!(parse_sd("1 +", 1, None).is_err());
    }
}
