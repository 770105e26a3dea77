//! Expressions in one variable `x` for config-defined characteristic functions
//! and weights.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := number | 'x' | '(' expr ')' | 'root' '(' expr ',' integer ')'
//! ```
//!
//! `×`, `÷` and `−` are accepted as aliases. `root(e, k)` is the real k-th root;
//! odd k admits negative radicands.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Root(Box<Expr>, u32),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if let Some((pos, tok)) = p.peek_full() {
            return Err(Error::Expr {
                pos,
                msg: format!("unexpected {tok}"),
            });
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d == 0.0 {
                    return Err(Error::domain("expression", format!("division by zero at x = {x}")));
                }
                a.eval(x)? / d
            }
            Expr::Pow(e, k) => {
                let b = e.eval(x)?;
                if b == 0.0 && *k < 0 {
                    return Err(Error::domain("expression", format!("0^{k} at x = {x}")));
                }
                b.powi(*k)
            }
            Expr::Root(e, k) => {
                let b = e.eval(x)?;
                if b < 0.0 {
                    if k % 2 == 0 {
                        return Err(Error::domain(
                            "expression",
                            format!("even root of {b} at x = {x}"),
                        ));
                    }
                    -(-b).powf(1.0 / *k as f64)
                } else if *k == 2 {
                    b.sqrt()
                } else {
                    b.powf(1.0 / *k as f64)
                }
            }
        };
        if !v.is_finite() {
            return Err(Error::domain("expression", format!("non-finite value at x = {x}")));
        }
        Ok(v)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(e, k) => write!(f, "({e})^{k}"),
            Expr::Root(e, k) => write!(f, "root({e}, {k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    X,
    Root,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Int(v) => write!(f, "integer {v}"),
            Tok::X => write!(f, "'x'"),
            Tok::Root => write!(f, "'root'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                it.next();
                continue;
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '×' => Tok::Star,
            '/' | '÷' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            'x' => Tok::X,
            c if c.is_ascii_digit() || c == '.' => {
                let mut end = pos;
                let mut seen_exp = false;
                while let Some(&(i, d)) = it.peek() {
                    let prev = src[..i].chars().last();
                    let ok = d.is_ascii_digit()
                        || d == '.'
                        || ((d == 'e' || d == 'E') && !seen_exp)
                        || ((d == '+' || d == '-') && matches!(prev, Some('e' | 'E')) && seen_exp);
                    if !ok {
                        break;
                    }
                    if d == 'e' || d == 'E' {
                        seen_exp = true;
                    }
                    end = i + d.len_utf8();
                    it.next();
                }
                let text = &src[pos..end];
                let tok = if text.bytes().all(|b| b.is_ascii_digit()) {
                    text.parse::<i64>().map(Tok::Int).ok()
                } else {
                    None
                };
                let tok = match tok {
                    Some(t) => t,
                    None => Tok::Num(text.parse::<f64>().map_err(|_| Error::Expr {
                        pos,
                        msg: format!("bad number {text:?}"),
                    })?),
                };
                out.push((pos, tok));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = pos;
                while let Some(&(i, d)) = it.peek() {
                    if !d.is_ascii_alphanumeric() {
                        break;
                    }
                    end = i + 1;
                    it.next();
                }
                match &src[pos..end] {
                    "root" => out.push((pos, Tok::Root)),
                    "x" => out.push((pos, Tok::X)),
                    word => {
                        return Err(Error::Expr {
                            pos,
                            msg: format!("unknown identifier {word:?}"),
                        })
                    }
                }
                continue;
            }
            other => {
                return Err(Error::Expr {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((pos, tok));
        it.next();
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn peek_full(&self) -> Option<(usize, &Tok)> {
        self.tokens.get(self.pos).map(|(p, t)| (*p, t))
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or_else(|| self.tokens.last().map(|(p, _)| p + 1).unwrap_or(0))
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(Error::Expr {
                pos: self.here(),
                msg: format!("expected {want}, found {t}"),
            }),
            None => Err(Error::Expr {
                pos: self.here(),
                msg: format!("expected {want}, found end of input"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Minus) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = self.integer()?;
            let k = i32::try_from(k).map_err(|_| Error::Expr {
                pos: self.here(),
                msg: "exponent too large".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(k)
            }
            Some(t) => Err(Error::Expr {
                pos,
                msg: format!("expected integer, found {t}"),
            }),
            None => Err(Error::Expr {
                pos,
                msg: "expected integer, found end of input".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v as f64))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Root) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::Comma)?;
                let kpos = self.here();
                let k = self.integer()?;
                if k < 1 || k > u32::MAX as i64 {
                    return Err(Error::Expr {
                        pos: kpos,
                        msg: format!("root index must be >= 1, got {k}"),
                    });
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::Root(Box::new(e), k as u32))
            }
            Some(t) => Err(Error::Expr {
                pos,
                msg: format!("unexpected {t}"),
            }),
            None => Err(Error::Expr {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> f64 {
        Expr::parse(s).unwrap().eval(x).unwrap()
    }

    #[test]
    fn catalog_characteristic_functions() {
        assert_eq!(ev("x + 1", 3.0), 4.0);
        assert_eq!(ev("0.5*x + 1", 2.0), 2.0);
        assert!((ev("1/(2 - x)", 0.5) - 2.0 / 3.0).abs() < 1e-16);
        assert!((ev("(1/(2 - root(x, 2)))^2", 0.25) - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(ev("x + 2*root(x,2) + 1", 4.0), 9.0);
        assert!((ev("(1/(2−root(x,3)))^3", 0.125) - 8.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(ev("2 + 3 * x ^ 2", 2.0), 14.0);
        assert_eq!(ev("-x^2", 3.0), -9.0);
        assert_eq!(ev("x^-1", 4.0), 0.25);
        assert_eq!(ev("2 × x ÷ 4", 6.0), 3.0);
        assert_eq!(ev("1e-3 * x", 1000.0), 1.0);
        assert_eq!(ev("root(-8, 3)", 0.0), -2.0);
    }

    #[test]
    fn parse_errors_carry_position() {
        for bad in ["", "x +", "sin(x)", "x ^ 1.5", "root(x)", "(x", "x x", "root(x, 0)"] {
            assert!(matches!(Expr::parse(bad), Err(Error::Expr { .. })), "{bad:?}");
        }
        match Expr::parse("x + y") {
            Err(Error::Expr { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn evaluation_domain_errors() {
        assert!(Expr::parse("1/(2-x)").unwrap().eval(2.0).is_err());
        assert!(Expr::parse("root(x, 2)").unwrap().eval(-1.0).is_err());
        assert!(Expr::parse("x^-2").unwrap().eval(0.0).is_err());
    }

    #[test]
    fn display_reparses_to_same_value() {
        let e = Expr::parse("(1/(2 - root(x, 3)))^3 - x/7").unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        for &x in &[0.0, 0.3, 0.9] {
            assert_eq!(e.eval(x).unwrap(), again.eval(x).unwrap());
        }
    }
}
