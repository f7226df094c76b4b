use super::Expr;
use crate::specialfn::{SpecialFnError, WeierstrassParams};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    DegenerateMobius,
    NonConstantParameter,
    Weierstrass(SpecialFnError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(msg) => write!(f, "syntax error: {msg}"),
            Self::UnknownIdentifier(id) => write!(f, "unknown identifier `{id}`"),
            Self::Arity {
                name,
                expected,
                found,
            } => write!(f, "`{name}` takes {expected} parameters, found {found}"),
            Self::DegenerateMobius => write!(f, "mobius matrix has ad - bc = 0"),
            Self::NonConstantParameter => write!(f, "parameter must not depend on z"),
            Self::Weierstrass(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Byte offset into the source text.
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(position: usize, kind: ParseErrorKind) -> Self {
        Self { position, kind }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let end = t.0 == Tok::End;
            out.push(t);
            if end {
                return Ok(out);
            }
        }
    }

    fn peek_byte(&self, off: usize) -> Option<u8> {
        self.src.as_bytes().get(self.pos + off).copied()
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while matches!(self.peek_byte(0), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(b) = self.peek_byte(0) else {
            return Ok((Tok::End, start));
        };
        if b.is_ascii_digit() || (b == b'.' && matches!(self.peek_byte(1), Some(d) if d.is_ascii_digit())) {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while matches!(self.peek_byte(0), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        if b"+-*/^()[],".contains(&b) {
            self.pos += 1;
            return Ok((Tok::Sym(b as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ParseError::new(
            start,
            ParseErrorKind::Syntax(format!("unexpected character `{ch}`")),
        ))
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let digits = |lx: &mut Self| {
            while matches!(lx.peek_byte(0), Some(c) if c.is_ascii_digit()) {
                lx.pos += 1;
            }
        };
        digits(self);
        if self.peek_byte(0) == Some(b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.peek_byte(0), Some(b'e' | b'E')) {
            let sign = matches!(self.peek_byte(1), Some(b'+' | b'-'));
            let d = self.peek_byte(if sign { 2 } else { 1 });
            if matches!(d, Some(c) if c.is_ascii_digit()) {
                self.pos += if sign { 2 } else { 1 };
                digits(self);
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text.parse().map_err(|_| {
            ParseError::new(start, ParseErrorKind::Syntax(format!("bad number `{text}`")))
        })?;
        if !value.is_finite() {
            return Err(ParseError::new(
                start,
                ParseErrorKind::Syntax(format!("number `{text}` out of range")),
            ));
        }
        // an `i` directly after the digits, not starting a longer identifier
        if self.peek_byte(0) == Some(b'i')
            && !matches!(self.peek_byte(1), Some(c) if c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
            return Ok((Tok::Imag(value), start));
        }
        Ok((Tok::Num(value), start))
    }
}

/// Folds arithmetic on two literal constants so printing is idempotent.
fn fold(e: Expr) -> Expr {
    let v = match &e {
        Expr::Neg(a) => match **a {
            Expr::Const(x) => Some(-x),
            _ => None,
        },
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => match (&**a, &**b) {
            (Expr::Const(x), Expr::Const(y)) => Some(match &e {
                Expr::Add(..) => x + y,
                Expr::Sub(..) => x - y,
                Expr::Mul(..) => x * y,
                _ => x / y,
            }),
            _ => None,
        },
        _ => None,
    };
    match v {
        Some(c) if c.re.is_finite() && c.im.is_finite() => Expr::Const(c),
        _ => e,
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
}

pub(crate) fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, idx: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.err(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Imag(v) => format!("imaginary number {v}i"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn err(&self, msg: String) -> ParseError {
        ParseError::new(self.pos(), ParseErrorKind::Syntax(msg))
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = fold(Expr::Add(Box::new(lhs), Box::new(self.term()?)));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = fold(Expr::Sub(Box::new(lhs), Box::new(self.term()?)));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = fold(Expr::Mul(Box::new(lhs), Box::new(self.unary()?)));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = fold(Expr::Div(Box::new(lhs), Box::new(self.unary()?)));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(fold(Expr::Neg(Box::new(self.unary()?))));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let paren = *self.peek() == Tok::Sym('(');
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Sym('-');
        if neg {
            self.bump();
        }
        let at = self.pos();
        let n = match self.bump() {
            Tok::Num(v) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => v as i32,
            t => {
                return Err(ParseError::new(
                    at,
                    ParseErrorKind::Syntax(format!("exponent must be an integer, found {}", describe(&t))),
                ))
            }
        };
        if paren {
            self.expect(')')?;
        }
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Const(Complex64::new(v, 0.0))),
            Tok::Imag(v) => Ok(Expr::Const(Complex64::new(0.0, v))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name, at),
            t => Err(ParseError::new(
                at,
                ParseErrorKind::Syntax(format!("expected operand, found {}", describe(&t))),
            )),
        }
    }

    fn call_arg(&mut self) -> Result<Box<Expr>, ParseError> {
        self.expect('(')?;
        let e = self.expr()?;
        self.expect(')')?;
        Ok(Box::new(e))
    }

    fn params(&mut self, name: &str, expected: usize, at: usize) -> Result<Vec<Complex64>, ParseError> {
        self.expect('[')?;
        let mut vals = Vec::new();
        loop {
            let p_at = self.pos();
            let e = self.expr()?;
            if e.contains_var() {
                return Err(ParseError::new(p_at, ParseErrorKind::NonConstantParameter));
            }
            let v = super::eval::eval_jet(&e, Complex64::new(0.0, 0.0), 0)
                .ok()
                .filter(|j| !j.pole)
                .map(|j| j.series.value())
                .ok_or_else(|| {
                    ParseError::new(p_at, ParseErrorKind::Syntax("parameter is not a finite constant".into()))
                })?;
            vals.push(v);
            match self.peek() {
                Tok::Sym(',') => {
                    self.bump();
                }
                _ => break,
            }
        }
        self.expect(']')?;
        if vals.len() != expected {
            return Err(ParseError::new(
                at,
                ParseErrorKind::Arity {
                    name: name.to_string(),
                    expected,
                    found: vals.len(),
                },
            ));
        }
        Ok(vals)
    }

    fn ident(&mut self, name: String, at: usize) -> Result<Expr, ParseError> {
        match name.as_str() {
            "z" => Ok(Expr::Var),
            "i" => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
            "exp" => Ok(Expr::Exp(self.call_arg()?)),
            "sin" => Ok(Expr::Sin(self.call_arg()?)),
            "cos" => Ok(Expr::Cos(self.call_arg()?)),
            "wp" | "wp_prime" => {
                let v = self.params(&name, 2, at)?;
                let params = WeierstrassParams::new(v[0], v[1])
                    .map_err(|e| ParseError::new(at, ParseErrorKind::Weierstrass(e)))?;
                let arg = self.call_arg()?;
                let params = Arc::new(params);
                Ok(if name == "wp" {
                    Expr::Wp(params, arg)
                } else {
                    Expr::WpPrime(params, arg)
                })
            }
            "mobius" => {
                let v = self.params(&name, 4, at)?;
                if v[0] * v[3] - v[1] * v[2] == Complex64::new(0.0, 0.0) {
                    return Err(ParseError::new(at, ParseErrorKind::DegenerateMobius));
                }
                let arg = self.call_arg()?;
                Ok(Expr::Mobius([v[0], v[1], v[2], v[3]], arg))
            }
            _ => Err(ParseError::new(at, ParseErrorKind::UnknownIdentifier(name))),
        }
    }
}
