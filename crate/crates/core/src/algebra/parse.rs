//! Polynomial front end.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' INT)?
//! primary := INT | INT '/' INT | VAR | '(' expr ')'
//! ```
//!
//! `*` is mandatory between factors. The printer in `mpoly` emits this
//! grammar, so `parse_poly(&p.to_string(), vars) == p`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::mpoly::MPoly;
use super::rational::Rational;
use crate::error::AlgebraError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Rat(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, AlgebraError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, line: tl, column: tc });
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                let ch = chars[i];
                s.push(ch);
                advance(&mut i, &mut line, &mut col, ch);
            }
            let num: BigInt = s.parse().expect("digits");
            // rational literal p/q
            let mut j = i;
            while j < chars.len() && chars[j] == ' ' {
                j += 1;
            }
            if j < chars.len() && chars[j] == '/' {
                let slash_col = col + (j - i);
                col += j - i + 1;
                i = j + 1;
                while i < chars.len() && chars[i] == ' ' {
                    i += 1;
                    col += 1;
                }
                let mut d = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    d.push(chars[i]);
                    i += 1;
                    col += 1;
                }
                if d.is_empty() {
                    return Err(syntax(line, slash_col, "expected denominator after '/'"));
                }
                let den: BigInt = d.parse().expect("digits");
                if den.is_zero() {
                    return Err(syntax(line, slash_col, "zero denominator"));
                }
                out.push(Spanned {
                    tok: Tok::Rat(Rational::new(num, den)),
                    line: tl,
                    column: tc,
                });
            } else {
                out.push(Spanned { tok: Tok::Num(num), line: tl, column: tc });
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                let ch = chars[i];
                s.push(ch);
                advance(&mut i, &mut line, &mut col, ch);
            }
            out.push(Spanned { tok: Tok::Ident(s), line: tl, column: tc });
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character '{c}'")));
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> AlgebraError {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn expr(&mut self) -> Result<MPoly, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, AlgebraError> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        match self.peek().tok {
            Tok::Num(_) | Tok::Rat(_) | Tok::Ident(_) | Tok::LParen => {
                Err(self.err_here("missing '*' between factors"))
            }
            _ => Ok(acc),
        }
    }

    fn unary(&mut self) -> Result<MPoly, AlgebraError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, AlgebraError> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let t = self.bump();
            let k = match t.tok {
                Tok::Num(n) => n
                    .to_u32()
                    .ok_or_else(|| syntax(t.line, t.column, "exponent too large"))?,
                _ => {
                    return Err(syntax(
                        t.line,
                        t.column,
                        "expected a non-negative integer exponent",
                    ))
                }
            };
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MPoly, AlgebraError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(n) => Ok(MPoly::constant(self.vars, Rational::from_integer(n))),
            Tok::Rat(r) => Ok(MPoly::constant(self.vars, r)),
            Tok::Ident(name) => MPoly::var(self.vars, &name),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.err_here("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(syntax(t.line, t.column, "unexpected end of input")),
            other => Err(syntax(t.line, t.column, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `text` as a polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<MPoly, AlgebraError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, vars };
    let out = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac, rat};

    const XY: &[&str] = &["x", "y"];

    #[test]
    fn reads_terms() {
        let p = parse_poly("y^3 + x*y", XY).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&[0, 3]), rat(1));
        assert_eq!(p.coeff(&[1, 1]), rat(1));

        let q = parse_poly("x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6", XY).unwrap();
        assert_eq!(q.num_terms(), 4);

        let r = parse_poly("x^2 - x*y^4", XY).unwrap();
        assert_eq!(r.coeff(&[2, 0]), rat(1));
        assert_eq!(r.coeff(&[1, 4]), rat(-1));
    }

    #[test]
    fn precedence() {
        let p = parse_poly("-x^2 + 3/4*(x + y)^2", XY).unwrap();
        assert_eq!(p.coeff(&[2, 0]), frac(-1, 4));
        assert_eq!(p.coeff(&[1, 1]), frac(3, 2));
        assert_eq!(p.coeff(&[0, 2]), frac(3, 4));
    }

    #[test]
    fn errors_carry_position() {
        match parse_poly("x +\n  2 y", XY) {
            Err(AlgebraError::Syntax { line, column, .. }) => {
                assert_eq!((line, column), (2, 5));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_poly("x + z", XY),
            Err(AlgebraError::UnknownVariable("z".into()))
        );
        assert!(matches!(parse_poly("x^y", XY), Err(AlgebraError::Syntax { .. })));
        assert!(matches!(parse_poly("(x", XY), Err(AlgebraError::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", XY), Err(AlgebraError::Syntax { .. })));
    }

    #[test]
    fn printer_round_trip() {
        for s in ["x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6", "-1/2*x*y + 7/3", "0", "-y"] {
            let p = parse_poly(s, XY).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(parse_poly(&p.to_string(), XY).unwrap(), p);
        }
    }
}
