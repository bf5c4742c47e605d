//! Class expressions: sums of terms `coeff * t^k * monomial`, e.g.
//! `-1/2*t^2 + 3*t*h + h^2`. Powers of `t` may be negative.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{format_rational, parse_rational, GradedRing, Rational, RationalFunctionT, RingClass};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                out.push(Token::Num(chars[start..i].iter().collect()));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(Error::Config(format!("unexpected character {c:?} in {s:?}"))),
        }
    }
    Ok(out)
}

/// Parses a class expression over `ring`, whose generator names are the
/// admissible monomial symbols.
pub fn parse_class(s: &str, ring: &Arc<GradedRing>) -> Result<RingClass> {
    let bad = |msg: &str| Error::Config(format!("class expression {s:?}: {msg}"));
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(bad("empty"));
    }
    let ng = ring.generators().len();
    let mut pos = 0;
    let mut result = RingClass::zero(ring);
    while pos < tokens.len() {
        let mut sign = Rational::one();
        while let Some(tok @ (Token::Plus | Token::Minus)) = tokens.get(pos) {
            if *tok == Token::Minus {
                sign = -sign;
            }
            pos += 1;
        }
        let mut coeff = sign;
        let mut tpow: i64 = 0;
        let mut exps = vec![0u32; ng];
        loop {
            let read_pow = |pos: &mut usize| -> Result<i64> {
                if tokens.get(*pos) != Some(&Token::Caret) {
                    return Ok(1);
                }
                *pos += 1;
                let neg = if tokens.get(*pos) == Some(&Token::Minus) {
                    *pos += 1;
                    true
                } else {
                    false
                };
                match tokens.get(*pos) {
                    Some(Token::Num(n)) => {
                        *pos += 1;
                        let v: i64 = n.parse().map_err(|_| bad("bad exponent"))?;
                        Ok(if neg { -v } else { v })
                    }
                    _ => Err(bad("missing exponent")),
                }
            };
            match tokens.get(pos) {
                Some(Token::Num(n)) => {
                    pos += 1;
                    coeff *= parse_rational(n)?;
                }
                Some(Token::Ident(name)) if name == "t" => {
                    pos += 1;
                    tpow += read_pow(&mut pos)?;
                }
                Some(Token::Ident(name)) => {
                    pos += 1;
                    let g = ring
                        .generators()
                        .iter()
                        .position(|(n, _)| n == name)
                        .ok_or_else(|| bad(&format!("unknown generator {name}")))?;
                    let e = read_pow(&mut pos)?;
                    if e < 0 {
                        return Err(bad("negative generator power"));
                    }
                    exps[g] += e as u32;
                }
                _ => return Err(bad("expected a factor")),
            }
            if tokens.get(pos) == Some(&Token::Star) {
                pos += 1;
                continue;
            }
            break;
        }
        if !matches!(tokens.get(pos), None | Some(Token::Plus | Token::Minus)) {
            return Err(bad("expected + or -"));
        }
        let term = monomial_class(ring, &exps)?.scale(&RationalFunctionT::monomial(coeff, tpow));
        result = result.add(&term)?;
    }
    Ok(result)
}

/// The class of an arbitrary monomial, reduced through the table.
fn monomial_class(ring: &Arc<GradedRing>, exps: &[u32]) -> Result<RingClass> {
    if let Some(i) = ring.index_of(exps) {
        return Ok(RingClass::basis(ring, i));
    }
    let mut acc = RingClass::one(ring);
    for (g, &e) in exps.iter().enumerate() {
        let mut unit = vec![0u32; exps.len()];
        unit[g] = 1;
        let gen = match ring.index_of(&unit) {
            Some(i) => RingClass::basis(ring, i),
            None if e == 0 => continue,
            None => return Ok(RingClass::zero(ring)),
        };
        acc = acc.mul(&gen.pow(e))?;
    }
    Ok(acc)
}

/// Serializes a class whose coefficients are Laurent polynomials in `t`.
pub fn format_class(c: &RingClass) -> Result<String> {
    let ring = c.ring();
    let mut terms: Vec<String> = Vec::new();
    for (i, f) in c.coeffs().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let den = f.denominator();
        if !den.is_monomial() || !den.leading().is_some_and(|l| l.is_one()) {
            return Err(Error::Invalid(format!("coefficient {f} is not a Laurent polynomial")));
        }
        let shift = den.degree().unwrap() as i64;
        let mono: Vec<String> = ring.basis()[i]
            .iter()
            .zip(ring.generators())
            .filter(|(e, _)| **e > 0)
            .map(|(e, (g, _))| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
            .collect();
        for (k, q) in f.numerator().coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let mut parts = vec![format_rational(q)];
            let p = k as i64 - shift;
            if p != 0 {
                parts.push(format!("t^{p}"));
            }
            parts.extend(mono.iter().cloned());
            terms.push(parts.join("*"));
        }
    }
    if terms.is_empty() {
        return Ok("0".into());
    }
    Ok(terms.join(" + ").replace("+ -", "- "))
}
