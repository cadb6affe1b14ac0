//! A small language for exact constants such as `(1/2)*i*(11+5*sqrt(5))`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := INTEGER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Identifiers are `pi`, `i`, `zeta3`; functions are `sqrt(e)`, `root(e, n)`
//! and `L(k, t)`. Whitespace is ignored.

use std::fmt;

use rug::ops::Pow;
use rug::Assign;

use crate::error::{Error, Result};
use crate::mpnum::{const_pi, const_zeta3, Complex, Integer, PrecisionContext, Rational};
use crate::numtheory::l_value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstExpr {
    Int(Integer),
    Pi,
    I,
    Zeta3,
    Neg(Box<ConstExpr>),
    Add(Box<ConstExpr>, Box<ConstExpr>),
    Sub(Box<ConstExpr>, Box<ConstExpr>),
    Mul(Box<ConstExpr>, Box<ConstExpr>),
    Div(Box<ConstExpr>, Box<ConstExpr>),
    Pow(Box<ConstExpr>, Box<ConstExpr>),
    Sqrt(Box<ConstExpr>),
    Root(Box<ConstExpr>, Box<ConstExpr>),
    L(Box<ConstExpr>, Box<ConstExpr>),
}

impl ConstExpr {
    /// The value as an exact rational, if the expression only combines integers
    /// with + − × ÷ and integer powers.
    pub fn as_rational(&self) -> Option<Rational> {
        use ConstExpr::*;
        Some(match self {
            Int(n) => Rational::from(n),
            Neg(e) => -e.as_rational()?,
            Add(l, r) => l.as_rational()? + r.as_rational()?,
            Sub(l, r) => l.as_rational()? - r.as_rational()?,
            Mul(l, r) => l.as_rational()? * r.as_rational()?,
            Div(l, r) => {
                let d = r.as_rational()?;
                if d == 0 {
                    return None;
                }
                l.as_rational()? / d
            }
            Pow(b, e) => {
                let b = b.as_rational()?;
                let e = e.as_rational()?;
                if *e.denom() != 1 {
                    return None;
                }
                let e = e.numer().to_i32()?;
                if e < 0 && b == 0 {
                    return None;
                }
                let p = b.pow(e.unsigned_abs());
                if e < 0 {
                    p.recip()
                } else {
                    p
                }
            }
            _ => return None,
        })
    }

    fn as_integer(&self) -> Option<Integer> {
        let r = self.as_rational()?;
        (*r.denom() == 1).then(|| r.numer().clone())
    }

    fn precedence(&self) -> u8 {
        use ConstExpr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(..) => 3,
            Pow(..) => 4,
            _ => 5,
        }
    }

    /// Canonical text that parses back to the same tree.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConstExpr::*;
        // Operators are left-associative, so a right operand of equal
        // precedence is bracketed to keep the tree shape.
        let side = |f: &mut fmt::Formatter<'_>, e: &ConstExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Int(n) => write!(f, "{n}"),
            Pi => f.write_str("pi"),
            I => f.write_str("i"),
            Zeta3 => f.write_str("zeta3"),
            Neg(e) => {
                f.write_str("-")?;
                side(f, e, 3)
            }
            Add(l, r) | Sub(l, r) => {
                side(f, l, 1)?;
                f.write_str(if matches!(self, Add(..)) { " + " } else { " - " })?;
                side(f, r, 2)
            }
            Mul(l, r) | Div(l, r) => {
                side(f, l, 2)?;
                f.write_str(if matches!(self, Mul(..)) { "*" } else { "/" })?;
                side(f, r, 3)
            }
            Pow(b, e) => {
                side(f, b, 5)?;
                f.write_str("^")?;
                side(f, e, 5)
            }
            Sqrt(e) => write!(f, "sqrt({e})"),
            Root(e, n) => write!(f, "root({e}, {n})"),
            L(k, t) => write!(f, "L({k}, {t})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn expr(&mut self) -> Result<ConstExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = ConstExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = ConstExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ConstExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = ConstExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = ConstExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ConstExpr> {
        if self.eat(b'-') {
            return Ok(ConstExpr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat(b'^') {
            return Ok(ConstExpr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ConstExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                Ok(ConstExpr::Int(text.parse().expect("digit run parses")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                self.named(name, start)
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn named(&mut self, name: &str, start: usize) -> Result<ConstExpr> {
        let arity = match name {
            "pi" => return Ok(ConstExpr::Pi),
            "i" => return Ok(ConstExpr::I),
            "zeta3" => return Ok(ConstExpr::Zeta3),
            "sqrt" => 1,
            "root" | "L" => 2,
            _ => return Err(Error::UnknownIdentifier { name: name.to_string(), pos: start }),
        };
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        while args.len() < arity {
            self.expect(b',')?;
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        let mut args = args.into_iter().map(Box::new);
        let first = args.next().expect("arity >= 1");
        Ok(match name {
            "sqrt" => ConstExpr::Sqrt(first),
            "root" => ConstExpr::Root(first, args.next().expect("arity 2")),
            _ => ConstExpr::L(first, args.next().expect("arity 2")),
        })
    }
}

pub fn parse_expr(text: &str) -> Result<ConstExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

pub fn eval_expr(e: &ConstExpr, ctx: &PrecisionContext) -> Result<Complex> {
    use ConstExpr::*;
    let bits = ctx.bits();
    let mut v = match e {
        Int(n) => Complex::with_val(bits, n),
        Pi => ctx.complex(const_pi(ctx)),
        I => Complex::with_val(bits, (0, 1)),
        Zeta3 => ctx.complex(const_zeta3(ctx)),
        Neg(e) => -eval_expr(e, ctx)?,
        Add(l, r) => eval_expr(l, ctx)? + eval_expr(r, ctx)?,
        Sub(l, r) => eval_expr(l, ctx)? - eval_expr(r, ctx)?,
        Mul(l, r) => eval_expr(l, ctx)? * eval_expr(r, ctx)?,
        Div(l, r) => {
            let d = eval_expr(r, ctx)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            eval_expr(l, ctx)? / d
        }
        Pow(b, x) => {
            let base = eval_expr(b, ctx)?;
            match x.as_integer().and_then(|n| n.to_i32()) {
                Some(n) => {
                    if n < 0 && base.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    let p = base.pow(n.unsigned_abs());
                    if n < 0 {
                        p.recip()
                    } else {
                        p
                    }
                }
                None => {
                    if base.is_zero() {
                        return Err(Error::Domain("0 raised to a non-integer power".into()));
                    }
                    (base.ln() * eval_expr(x, ctx)?).exp()
                }
            }
        }
        Sqrt(e) => eval_expr(e, ctx)?.sqrt(),
        Root(e, n) => {
            let n = n
                .as_integer()
                .and_then(|n| n.to_u32())
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Domain("root index must be a positive integer".into()))?;
            let v = eval_expr(e, ctx)?;
            if v.imag().is_zero() && !v.real().is_sign_negative() {
                ctx.complex(v.real().clone().root(n))
            } else if v.is_zero() {
                v
            } else {
                (v.ln() / n).exp()
            }
        }
        L(k, t) => {
            let k = k
                .as_integer()
                .and_then(|k| k.to_i64())
                .ok_or_else(|| Error::Domain("L(k, t) needs an integer k".into()))?;
            let t = t
                .as_integer()
                .and_then(|t| t.to_u32())
                .ok_or_else(|| Error::Domain("L(k, t) needs a positive integer t".into()))?;
            ctx.complex(l_value(k, t, ctx)?)
        }
    };
    // −x of a real x carries Im = −0, which would put sqrt and log on the
    // wrong side of their cuts
    if v.imag().is_zero() {
        v.mut_imag().assign(0);
    }
    Ok(v)
}
