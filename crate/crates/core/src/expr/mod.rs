//! Complex-function expressions: parsing, printing and jet evaluation.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" exponent)?
//! exponent:= ["-"] INT | "(" ["-"] INT ")"
//! atom    := NUMBER ["i"] | "i" | "z" | "(" expr ")"
//!          | ("exp" | "sin" | "cos") "(" expr ")"
//!          | ("wp" | "wp_prime") "[" const "," const "]" "(" expr ")"
//!          | "mobius" "[" const "," const "," const "," const "]" "(" expr ")"
//! const   := expr without "z"
//! NUMBER  := DIGITS ["." DIGITS] [("e" | "E") ["+" | "-"] DIGITS]
//! ```
//!
//! Identifiers are case-sensitive. `wp[g2, g3]` is the Weierstrass function in
//! normal form `(℘')² = 4℘³ - g2 ℘ - g3`; `mobius[a, b, c, d](f)` is
//! `(a f + b) / (c f + d)` and requires `ad - bc ≠ 0`.

mod eval;
mod parse;

pub use eval::EvalError;
pub use parse::{ParseError, ParseErrorKind};

use crate::extended::ExtendedComplex;
use crate::jet::Jet;
use crate::specialfn::WeierstrassParams;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub enum Expr {
    Var,
    Const(Complex64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Wp(Arc<WeierstrassParams>, Box<Expr>),
    WpPrime(Arc<WeierstrassParams>, Box<Expr>),
    Mobius([Complex64; 4], Box<Expr>),
}

impl Expr {
    /// Replaces every occurrence of the variable by `inner`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        use Expr::*;
        let sub = |e: &Expr| Box::new(e.substitute(inner));
        match self {
            Var => inner.clone(),
            Const(c) => Const(*c),
            Neg(a) => Neg(sub(a)),
            Add(a, b) => Add(sub(a), sub(b)),
            Sub(a, b) => Sub(sub(a), sub(b)),
            Mul(a, b) => Mul(sub(a), sub(b)),
            Div(a, b) => Div(sub(a), sub(b)),
            Pow(a, n) => Pow(sub(a), *n),
            Exp(a) => Exp(sub(a)),
            Sin(a) => Sin(sub(a)),
            Cos(a) => Cos(sub(a)),
            Wp(p, a) => Wp(p.clone(), sub(a)),
            WpPrime(p, a) => WpPrime(p.clone(), sub(a)),
            Mobius(m, a) => Mobius(*m, sub(a)),
        }
    }

    pub fn contains_var(&self) -> bool {
        use Expr::*;
        match self {
            Var => true,
            Const(_) => false,
            Neg(a) | Pow(a, _) | Exp(a) | Sin(a) | Cos(a) | Wp(_, a) | WpPrime(_, a) | Mobius(_, a) => {
                a.contains_var()
            }
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.contains_var() || b.contains_var(),
        }
    }
}

fn fmt_const(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im == 0.0 {
        if c.re.is_sign_negative() {
            write!(f, "({:?})", c.re)
        } else {
            write!(f, "{:?}", c.re)
        }
    } else if c.im.is_sign_negative() {
        write!(f, "({:?}-{:?}i)", c.re, -c.im)
    } else {
        write!(f, "({:?}+{:?}i)", c.re, c.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Expr::*;
        match self {
            Var => write!(f, "z"),
            Const(c) => fmt_const(*c, f),
            Neg(a) => write!(f, "(-{a})"),
            Add(a, b) => write!(f, "({a}+{b})"),
            Sub(a, b) => write!(f, "({a}-{b})"),
            Mul(a, b) => write!(f, "({a}*{b})"),
            Div(a, b) => write!(f, "({a}/{b})"),
            Pow(a, n) => write!(f, "({a}^({n}))"),
            Exp(a) => write!(f, "exp({a})"),
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Wp(p, a) | WpPrime(p, a) => {
                let is_wp = matches!(self, Wp(..));
                let shifted = is_wp && p.shift != Complex64::new(0.0, 0.0);
                let name = if is_wp { "wp" } else { "wp_prime" };
                if shifted {
                    write!(f, "(")?;
                }
                write!(f, "{name}[")?;
                fmt_const(p.g2, f)?;
                write!(f, ",")?;
                fmt_const(p.g3, f)?;
                write!(f, "]({a})")?;
                if shifted {
                    write!(f, "-")?;
                    fmt_const(p.shift, f)?;
                    write!(f, ")")?;
                }
                Ok(())
            }
            Mobius(m, a) => {
                write!(f, "mobius[")?;
                for (i, v) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    fmt_const(*v, f)?;
                }
                write!(f, "]({a})")
            }
        }
    }
}

/// A parsed, immutable function of one complex variable.
#[derive(Clone, Debug)]
pub struct FunctionHandle {
    expr: Arc<Expr>,
    source: Arc<str>,
}

impl FunctionHandle {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let expr = parse::parse(text)?;
        Ok(Self {
            expr: Arc::new(expr),
            source: text.into(),
        })
    }

    pub fn from_expr(expr: Expr) -> Self {
        let source = expr.to_string();
        Self {
            expr: Arc::new(expr),
            source: source.into(),
        }
    }

    pub fn identity() -> Self {
        Self::from_expr(Expr::Var)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Text the handle was parsed from, or its printed form when built in code.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Canonical, fully parenthesized text that parses back to the same tree.
    pub fn print(&self) -> String {
        self.expr.to_string()
    }

    pub fn eval_jet(&self, z: Complex64, order: usize) -> Result<Jet, EvalError> {
        eval::eval_jet(&self.expr, z, order)
    }

    pub fn eval_extended(&self, z: Complex64) -> Result<ExtendedComplex, EvalError> {
        let jet = self.eval_jet(z, 0)?;
        if jet.pole {
            Ok(ExtendedComplex::Infinity)
        } else {
            Ok(ExtendedComplex::Finite(jet.series.value()))
        }
    }

    /// `(a f + b) / (c f + d)`.
    pub fn mobius_post(
        &self,
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, ParseError> {
        if a * d - b * c == Complex64::new(0.0, 0.0) {
            return Err(ParseError::new(0, ParseErrorKind::DegenerateMobius));
        }
        Ok(Self::from_expr(Expr::Mobius(
            [a, b, c, d],
            Box::new((*self.expr).clone()),
        )))
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &FunctionHandle) -> Self {
        Self::from_expr(self.expr.substitute(&inner.expr))
    }

    /// `self(a z + b)`.
    pub fn affine(&self, a: Complex64, b: Complex64) -> Self {
        let inner = Expr::Add(
            Box::new(Expr::Mul(Box::new(Expr::Const(a)), Box::new(Expr::Var))),
            Box::new(Expr::Const(b)),
        );
        Self::from_expr(self.expr.substitute(&inner))
    }
}

impl fmt::Display for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}
