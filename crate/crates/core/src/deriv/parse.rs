//! Text syntax for derivations: a sum of summands, each a polynomial factor
//! followed by one of `dx`, `dy`, `dt`, `du`.
//!
//! ```text
//! derivation := term (("+" | "-") term)*
//! term       := factor* DIFF                  -- empty factor list means 1
//! factor     := rational | var power? | "(" polynomial ")"
//! polynomial := monomial (("+" | "-") monomial)*
//! monomial   := rational? (var power?)*
//! power      := "^" "-"? digits               -- negative only for u
//! rational   := digits ("/" digits)?
//! var        := "x" | "y" | "t" | "u";  DIFF := "d" var
//! ```
//!
//! Juxtaposition multiplies; `*` is accepted and ignored. `x`/`y` terms and
//! `dx`/`dy` markers select `Q[x,y]`; `t`/`u` select `Q[t,u,u^-1]`; mixing
//! the two alphabets is an error.

use num::{BigInt, BigRational, One};

use super::{DerivError, PolyDerivation};
use crate::exactmath::{Poly2, RingKind};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(BigRational),
    Var(char),
    Diff(char),
    Plus,
    Minus,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<Token>, DerivError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    let err = |msg: String| DerivError::Parse(msg);
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '*' => i += 1, // explicit multiplication, same as juxtaposition
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("bad integer".into()))?;
                // a slash directly after a number is a rational constant
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(err("missing denominator after '/'".into()));
                    }
                    let den: BigInt = chars[dstart..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err("bad denominator".into()))?;
                    if den == BigInt::from(0) {
                        return Err(err("zero denominator".into()));
                    }
                    tokens.push(Token::Number(BigRational::new(num, den)));
                } else {
                    tokens.push(Token::Number(BigRational::from_integer(num)));
                }
            }
            'd' => {
                let next = chars.get(i + 1).copied();
                match next {
                    Some(v @ ('x' | 'y' | 't' | 'u')) => {
                        tokens.push(Token::Diff(v));
                        i += 2;
                    }
                    _ => return Err(err("'d' must be followed by a variable".into())),
                }
            }
            'x' | 'y' | 't' | 'u' => {
                tokens.push(Token::Var(c));
                i += 1;
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    ring: Option<RingKind>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: &str) -> DerivError {
        DerivError::Parse(format!("{msg} (at token {})", self.pos))
    }

    fn ring_for(&mut self, var: char) -> Result<RingKind, DerivError> {
        let kind = match var {
            'x' | 'y' => RingKind::Xy,
            't' | 'u' => RingKind::Laurent,
            _ => unreachable!(),
        };
        match self.ring {
            None => {
                self.ring = Some(kind);
                Ok(kind)
            }
            Some(k) if k == kind => Ok(kind),
            Some(_) => Err(self.err("cannot mix x,y with t,u")),
        }
    }

    /// `var power?` as a monomial.
    fn var_factor(&mut self, var: char) -> Result<Poly2, DerivError> {
        let ring = self.ring_for(var)?;
        let mut exp: i64 = 1;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let negative = if self.peek() == Some(&Token::Minus) {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Some(Token::Number(n)) if n.denom().is_one() => {
                    exp = i64::try_from(&n.to_integer()).map_err(|_| self.err("huge exponent"))?;
                    if negative {
                        exp = -exp;
                    }
                }
                _ => return Err(self.err("expected integer exponent after '^'")),
            }
        }
        let second = var == 'y' || var == 'u';
        if !second && exp < 0 {
            return Err(self.err("negative exponent only allowed on u"));
        }
        let (a, b) = if second {
            (0u32, exp)
        } else {
            let a = u32::try_from(exp).map_err(|_| self.err("huge exponent"))?;
            (a, 0i64)
        };
        Poly2::try_monomial(ring, a, b, BigRational::one())
            .ok_or_else(|| self.err("negative exponent only allowed on u"))
    }

    /// A product of factors; stops before `+`, `-`, `)`, a `d?` marker, or
    /// the end. Empty products are the constant 1.
    fn product(&mut self, ring_hint: RingKind) -> Result<Poly2, DerivError> {
        let mut acc = Poly2::one(self.ring.unwrap_or(ring_hint));
        loop {
            match self.peek() {
                Some(Token::Number(_)) => {
                    let Some(Token::Number(n)) = self.bump() else {
                        unreachable!()
                    };
                    acc = acc.scale(&n);
                }
                Some(Token::Var(v)) => {
                    let v = *v;
                    self.bump();
                    let factor = self.var_factor(v)?;
                    acc = retag(&acc, factor.ring());
                    acc = &acc * &factor;
                }
                Some(Token::LParen) => {
                    self.bump();
                    let inner = self.polynomial(ring_hint)?;
                    if self.bump() != Some(Token::RParen) {
                        return Err(self.err("expected ')'"));
                    }
                    acc = retag(&acc, inner.ring());
                    acc = &acc * &inner;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// `monomial (("+"|"-") monomial)*`
    fn polynomial(&mut self, ring_hint: RingKind) -> Result<Poly2, DerivError> {
        let mut acc = Poly2::zero(self.ring.unwrap_or(ring_hint));
        let mut sign = BigRational::one();
        if self.peek() == Some(&Token::Minus) {
            self.bump();
            sign = -sign;
        } else if self.peek() == Some(&Token::Plus) {
            self.bump();
        }
        loop {
            let term = self.product(ring_hint)?;
            acc = retag(&acc, term.ring());
            acc = &acc + &term.scale(&sign);
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    sign = BigRational::one();
                }
                Some(Token::Minus) => {
                    self.bump();
                    sign = -BigRational::one();
                }
                _ => return Ok(acc),
            }
        }
    }
}

/// Rebuild a polynomial in another ring (used while the alphabet is still
/// being inferred; only constants ever actually cross rings).
fn retag(p: &Poly2, ring: RingKind) -> Poly2 {
    if p.ring() == ring {
        return p.clone();
    }
    let mut out = Poly2::zero(ring);
    for (&(a, b), c) in p.terms() {
        out = &out + &Poly2::monomial(ring, a, b, c.clone());
    }
    out
}

/// Parse `"P dx + Q dy"` (or `dt`/`du`) into a derivation.
pub fn parse_derivation(input: &str) -> Result<PolyDerivation, DerivError> {
    let tokens = lex(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        ring: None,
    };
    // each summand must end in a Diff marker; signs distribute over summands
    let mut images: Option<(Poly2, Poly2)> = None;
    let mut sign = BigRational::one();
    let mut first = true;
    loop {
        match parser.peek() {
            None if first => return Err(parser.err("empty derivation")),
            None => break,
            Some(Token::Plus) if !first => {
                parser.bump();
                sign = BigRational::one();
            }
            Some(Token::Minus) if !first => {
                parser.bump();
                sign = -BigRational::one();
            }
            Some(Token::Minus) if first => {
                parser.bump();
                sign = -BigRational::one();
            }
            _ => {}
        }
        first = false;
        let coeff = parser.product(RingKind::Xy)?;
        let Some(Token::Diff(v)) = parser.peek().cloned() else {
            return Err(parser.err("expected a differential marker dx/dy/dt/du"));
        };
        parser.bump();
        let ring = parser.ring_for(v)?;
        let coeff = retag(&coeff, ring).scale(&sign);
        let (mut i1, mut i2) = match images {
            Some((a, b)) => (retag(&a, ring), retag(&b, ring)),
            None => (Poly2::zero(ring), Poly2::zero(ring)),
        };
        if v == 'x' || v == 't' {
            i1 = &i1 + &coeff;
        } else {
            i2 = &i2 + &coeff;
        }
        images = Some((i1, i2));
        sign = BigRational::one();
        if parser.peek().is_none() {
            break;
        }
    }
    let ring = parser.ring.expect("at least one differential seen");
    let (i1, i2) = images.expect("at least one summand");
    Ok(PolyDerivation::new(ring, retag(&i1, ring), retag(&i2, ring)))
}
