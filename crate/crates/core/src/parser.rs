//! Polynomial expression parser.
//!
//! Grammar (identical to the canonical printer's output):
//!
//! ```text
//! expr     := ('+' | '-')? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' nat)?
//! atom     := rational | ident | '(' expr ')'
//! rational := nat ('/' nat)?
//! ```
//!
//! Identifiers are resolved against the ring context, including context
//! aliases such as `t^-1` for the Rees variable u.

use crate::error::Error;
use crate::poly::Polynomial;
use crate::ring::RingContext;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(u64),
    Ident(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax { position, message: message.into() }
}

fn tokenize(input: &str, ctx: &RingContext) -> Result<Vec<(usize, Token)>> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        // context aliases (e.g. "t^-1") take precedence over single tokens
        for (alias, index) in ctx.aliases() {
            if input[i..].starts_with(alias.as_str()) {
                let end = i + alias.len();
                let boundary = bytes
                    .get(end)
                    .map_or(true, |b| !(b.is_ascii_alphanumeric() || *b == b'_'));
                if boundary {
                    tokens.push((i, Token::Ident(*index)));
                    i = end;
                    continue 'outer;
                }
            }
        }
        match c {
            '+' => tokens.push((i, Token::Plus)),
            '-' => tokens.push((i, Token::Minus)),
            '*' => tokens.push((i, Token::Star)),
            '^' => tokens.push((i, Token::Caret)),
            '/' => tokens.push((i, Token::Slash)),
            '(' => tokens.push((i, Token::LParen)),
            ')' => tokens.push((i, Token::RParen)),
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value: u64 = input[start..i]
                    .parse()
                    .map_err(|_| syntax(start, "integer literal too large"))?;
                tokens.push((start, Token::Number(value)));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &input[start..i];
                let index = ctx
                    .var_index(name)
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                tokens.push((start, Token::Ident(index)));
                continue;
            }
            _ => return Err(syntax(i, format!("unexpected character `{c}`"))),
        }
        i += 1;
    }
    Ok(tokens)
}

struct Parser<'a> {
    ctx: &'a RingContext,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                self.term()?.neg()
            }
            Some(Token::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Token::Number(e)) => {
                    let exp = u32::try_from(e).map_err(|_| syntax(at, "exponent too large"))?;
                    return Ok(base.pow(exp));
                }
                _ => return Err(syntax(at, "expected a natural-number exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.here();
        match self.bump() {
            Some(Token::Number(n)) => {
                if self.peek() == Some(&Token::Slash) {
                    self.bump();
                    let at_den = self.here();
                    match self.bump() {
                        Some(Token::Number(d)) => {
                            if d == 0 {
                                return Err(syntax(at_den, "division by zero"));
                            }
                            let c = self.ctx.field().from_fraction(n, d)?;
                            Ok(Polynomial::constant(self.ctx, c))
                        }
                        _ => Err(syntax(at_den, "expected a denominator")),
                    }
                } else {
                    let c = self.ctx.field().from_fraction(n, 1)?;
                    Ok(Polynomial::constant(self.ctx, c))
                }
            }
            Some(Token::Ident(index)) => Ok(Polynomial::var(self.ctx, index)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                let at_close = self.here();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(syntax(at_close, "expected `)`")),
                }
            }
            Some(t) => Err(syntax(at, format!("unexpected token {t:?}"))),
            None => Err(syntax(at, "unexpected end of expression")),
        }
    }
}

/// Parses `text` as a polynomial over `ctx`; the result is canonical.
pub fn parse_polynomial(text: &str, ctx: &RingContext) -> Result<Polynomial> {
    let tokens = tokenize(text, ctx)?;
    if tokens.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut parser = Parser { ctx, tokens, pos: 0, end: text.len() };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(syntax(parser.here(), "trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FieldSpec, MonomialOrder};

    fn weighted_ctx() -> RingContext {
        RingContext::new(
            FieldSpec::Rational,
            vec![
                ("x".into(), 0),
                ("y".into(), 0),
                ("v".into(), 1),
                ("u".into(), -1),
            ],
            MonomialOrder::GrevLex,
        )
        .unwrap()
    }

    #[test]
    fn two_term_canonical_polynomial() {
        let ctx = weighted_ctx();
        let p = parse_polynomial("x^2*y - 3/2*v*u", &ctx).unwrap();
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.to_string(), "x^2*y - 3/2*v*u");
    }

    #[test]
    fn binomial_expansion() {
        let ctx = weighted_ctx();
        let p = parse_polynomial("(x+y)^2", &ctx).unwrap();
        assert_eq!(p.to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn incomplete_expression_is_a_syntax_error() {
        let ctx = weighted_ctx();
        assert!(matches!(
            parse_polynomial("x +", &ctx),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("x ^ y", &ctx),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("(x", &ctx),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn unknown_variable() {
        let ctx = weighted_ctx();
        assert!(matches!(
            parse_polynomial("x + z", &ctx),
            Err(Error::UnknownVariable(name)) if name == "z"
        ));
    }

    #[test]
    fn alias_is_accepted_as_synonym() {
        let ctx = weighted_ctx().with_alias("t^-1", 3);
        let via_alias = parse_polynomial("v*t^-1 - x", &ctx).unwrap();
        let direct = parse_polynomial("v*u - x", &ctx).unwrap();
        assert_eq!(via_alias, direct);
        // plain `t` stays unknown, and `t^-1` does not swallow `t^2`
        assert!(parse_polynomial("t^2", &ctx).is_err());
    }

    #[test]
    fn negative_leading_coefficient_round_trips() {
        let ctx = weighted_ctx();
        let p = parse_polynomial("-x - 1/3", &ctx).unwrap();
        assert_eq!(p.to_string(), "-x - 1/3");
        assert_eq!(parse_polynomial(&p.to_string(), &ctx).unwrap(), p);
    }

    #[test]
    fn fp_coefficients_reduce() {
        let ctx = RingContext::new(
            FieldSpec::prime(7).unwrap(),
            vec![("x".into(), 0)],
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let p = parse_polynomial("10*x + 1/2", &ctx).unwrap();
        assert_eq!(p.to_string(), "3*x + 4");
        assert!(matches!(
            parse_polynomial("1/7*x", &ctx),
            Err(Error::ZeroCharacteristicDivision { .. })
        ));
        // division only appears inside rational literals
        assert!(matches!(
            parse_polynomial("x/7", &ctx),
            Err(Error::Syntax { .. })
        ));
    }
}
