//! Expression trees for tensor components, a small parser, a canonical
//! printer and ring-generic evaluation.
//!
//! Grammar, whitespace-insensitive:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := base ('^' exponent)*          right associative
//! exponent := '-'? integer
//! base   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`. A quotient of two
//! integer literals such as `1/4` stays a `Div` node and evaluates exactly
//! over [`Rational`](crate::scalar::Rational).

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::jet::{apply, Elementary};
use crate::scalar::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        self.elementary().name()
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }

    pub fn elementary(self) -> Elementary {
        match self {
            Func::Sin => Elementary::Sin,
            Func::Cos => Elementary::Cos,
            Func::Tan => Elementary::Tan,
            Func::Exp => Elementary::Exp,
            Func::Log => Elementary::Log,
            Func::Sqrt => Elementary::Sqrt,
            Func::Sinh => Elementary::Sinh,
            Func::Cosh => Elementary::Cosh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn elementary(self) -> Elementary {
        match self {
            BinOp::Add => Elementary::Add,
            BinOp::Sub => Elementary::Sub,
            BinOp::Mul => Elementary::Mul,
            BinOp::Div => Elementary::Div,
        }
    }
}

/// Literals are non-negative; negation is always an explicit node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(u64),
    Decimal(f64),
    Const(NamedConst),
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        let lit = Expr::Int(v.unsigned_abs());
        if v < 0 {
            Expr::Neg(Box::new(lit))
        } else {
            lit
        }
    }

    pub fn decimal(v: f64) -> Expr {
        if v.is_sign_negative() && v != 0.0 {
            Expr::Neg(Box::new(Expr::Decimal(-v)))
        } else {
            Expr::Decimal(v)
        }
    }

    /// `p/q` as an exact quotient of literals.
    pub fn ratio(p: i64, q: i64) -> Expr {
        if q == 1 {
            return Expr::int(p);
        }
        let neg = (p < 0) != (q < 0);
        let e = Expr::Bin(
            BinOp::Div,
            Box::new(Expr::Int(p.unsigned_abs())),
            Box::new(Expr::Int(q.unsigned_abs())),
        );
        if neg && p != 0 {
            Expr::Neg(Box::new(e))
        } else {
            e
        }
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn powi(self, k: i32) -> Expr {
        match k {
            0 => Expr::Int(1),
            1 => self,
            _ if self.is_zero() && k > 0 => Expr::Int(0),
            _ => Expr::Pow(Box::new(self), k),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Expr::Int(0) => true,
            Expr::Decimal(v) => *v == 0.0,
            Expr::Neg(a) => a.is_zero(),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Int(1)) || matches!(self, Expr::Decimal(v) if *v == 1.0)
    }

    /// Evaluates with `env[i]` bound to variable `i`.
    pub fn eval<R: Ring>(&self, env: &[R]) -> Result<R> {
        match self {
            Expr::Int(v) => {
                let v = i64::try_from(*v).map_err(|_| Error::Unsupported {
                    ring: R::NAME,
                    op: format!("integer literal {v}"),
                })?;
                Ok(R::from_int(v))
            }
            Expr::Decimal(v) => R::from_decimal(*v),
            Expr::Const(NamedConst::Pi) => R::pi(),
            Expr::Const(NamedConst::E) => R::e(),
            Expr::Var(i) => env
                .get(*i)
                .cloned()
                .ok_or(Error::IndexOutOfRange { index: *i, dim: env.len() }),
            Expr::Neg(a) => Ok(a.eval(env)?.neg()),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                apply(op.elementary(), &[a, b])
            }
            Expr::Pow(a, k) => a.eval(env)?.powi(*k),
            Expr::Call(f, a) => a.eval(env)?.unary(f.elementary()),
        }
    }

    /// Largest variable index used plus one.
    pub fn arity(&self) -> usize {
        let mut n = 0;
        self.visit_vars(&mut |i| n = n.max(i + 1));
        n
    }

    pub fn uses_var(&self, i: usize) -> bool {
        let mut found = false;
        self.visit_vars(&mut |j| found |= i == j);
        found
    }

    fn visit_vars(&self, f: &mut impl FnMut(usize)) {
        match self {
            Expr::Var(i) => f(*i),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.visit_vars(f),
            Expr::Bin(_, a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            _ => {}
        }
    }

    /// Renames variables through `f`.
    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> Expr {
        match self {
            Expr::Var(i) => Expr::Var(f(*i)),
            Expr::Neg(a) => Expr::Neg(Box::new(a.map_vars(f))),
            Expr::Pow(a, k) => Expr::Pow(Box::new(a.map_vars(f)), *k),
            Expr::Call(g, a) => Expr::Call(*g, Box::new(a.map_vars(f))),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            other => other.clone(),
        }
    }

    pub fn shift_vars(&self, by: usize) -> Expr {
        self.map_vars(&|i| i + by)
    }

    /// Canonical text using `coords` for variable names.
    pub fn display<'a>(&'a self, coords: &'a [String]) -> Display<'a> {
        Display { expr: self, coords }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl core::ops::Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        if self.is_zero() {
            o
        } else if o.is_zero() {
            self
        } else {
            Expr::Bin(BinOp::Add, Box::new(self), Box::new(o))
        }
    }
}

impl core::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        if o.is_zero() {
            self
        } else if self.is_zero() {
            -o
        } else {
            Expr::Bin(BinOp::Sub, Box::new(self), Box::new(o))
        }
    }
}

impl core::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        if self.is_zero() || o.is_zero() {
            Expr::Int(0)
        } else if self.is_one() {
            o
        } else if o.is_one() {
            self
        } else {
            Expr::Bin(BinOp::Mul, Box::new(self), Box::new(o))
        }
    }
}

impl core::ops::Div for Expr {
    type Output = Expr;
    fn div(self, o: Expr) -> Expr {
        if self.is_zero() {
            Expr::Int(0)
        } else if o.is_one() {
            self
        } else {
            Expr::Bin(BinOp::Div, Box::new(self), Box::new(o))
        }
    }
}

impl core::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            e if e.is_zero() => Expr::Int(0),
            Expr::Neg(a) => *a,
            e => Expr::Neg(Box::new(e)),
        }
    }
}

pub struct Display<'a> {
    expr: &'a Expr,
    coords: &'a [String],
}

impl Display<'_> {
    fn child(&self, e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = Display { expr: e, coords: self.coords };
        if e.precedence() < min_prec {
            write!(f, "({d})")
        } else {
            write!(f, "{d}")
        }
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Decimal(v) => write!(f, "{v:?}"),
            Expr::Const(NamedConst::Pi) => f.write_str("pi"),
            Expr::Const(NamedConst::E) => f.write_str("e"),
            Expr::Var(i) => match self.coords.get(*i) {
                Some(name) => f.write_str(name),
                None => write!(f, "_{i}"),
            },
            Expr::Neg(a) => {
                f.write_str("-")?;
                self.child(a, 3, f)
            }
            Expr::Bin(op, a, b) => {
                let p = self.expr.precedence();
                self.child(a, p, f)?;
                write!(f, " {} ", op.symbol())?;
                self.child(b, p + 1, f)
            }
            Expr::Pow(a, k) => {
                self.child(a, 5, f)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                self.child(a, 0, f)?;
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Decimal(f64),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut decimal = false;
            if i < bytes.len() && bytes[i] == b'.' {
                decimal = true;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    decimal = true;
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s = &text[start..i];
            let tok = if decimal {
                Tok::Decimal(s.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{s}`"),
                })?)
            } else {
                Tok::Int(s.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("integer `{s}` is too large"),
                })?)
            };
            out.push((start, tok));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*/^(),".contains(&c) {
            out.push((i, Tok::Op(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(Error::Syntax {
                offset: i,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    coords: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(Tok::Int(v)) => format!("`{v}`"),
            Some(Tok::Decimal(v)) => format!("`{v:?}`"),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Op(c)) => format!("`{c}`"),
        };
        Error::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.base()?;
        let mut exps = Vec::new();
        while self.eat('^') {
            exps.push(self.exponent()?);
        }
        let Some((&last, rest)) = exps.split_last() else {
            return Ok(base);
        };
        // a^b^c = a^(b^c); every exponent is an integer literal
        let mut k: i64 = last.1;
        for &(offset, b) in rest.iter().rev() {
            k = int_pow(b, k).ok_or(Error::NonIntegerExponent { offset })?;
        }
        let k = i32::try_from(k).map_err(|_| Error::NonIntegerExponent { offset: exps[0].0 })?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn exponent(&mut self) -> Result<(usize, i64)> {
        let offset = self.offset();
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = i64::try_from(*v).map_err(|_| Error::NonIntegerExponent { offset })?;
                self.pos += 1;
                Ok((offset, if neg { -v } else { v }))
            }
            Some(_) => Err(Error::NonIntegerExponent { offset }),
            None => Err(self.unexpected("an integer exponent")),
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Decimal(v)) => {
                self.pos += 1;
                Ok(Expr::Decimal(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(Error::UnknownIdentifier { name, offset });
                    };
                    let mut args = alloc::vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    if args.len() != 1 {
                        return Err(Error::Arity {
                            name: func.name().into(),
                            expected: 1,
                            got: args.len(),
                        });
                    }
                    let arg = args.pop().unwrap_or(Expr::Int(0));
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if let Some(i) = self.coords.iter().position(|c| *c == name) {
                    Ok(Expr::Var(i))
                } else if name == "pi" {
                    Ok(Expr::Const(NamedConst::Pi))
                } else if name == "e" {
                    Ok(Expr::Const(NamedConst::E))
                } else {
                    Err(Error::UnknownIdentifier { name, offset })
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

fn int_pow(b: i64, k: i64) -> Option<i64> {
    if k < 0 {
        return match b {
            1 => Some(1),
            -1 => Some(if k % 2 == 0 { 1 } else { -1 }),
            _ => None,
        };
    }
    b.checked_pow(u32::try_from(k).ok()?)
}

/// Parses `text` against the coordinate names `coords`.
pub fn parse_expr<S: AsRef<str>>(text: &str, coords: &[S]) -> Result<Expr> {
    let names: Vec<&str> = coords.iter().map(|c| c.as_ref()).collect();
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), coords: &names };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

/// True when `name` can serve as a coordinate name.
pub fn valid_coordinate_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "pi"
        && name != "e"
        && Func::from_name(name).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet2;
    use crate::scalar::{ratio, Rational};
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_examples() {
        let c = ["x", "y", "u", "v", "z"];
        assert_eq!(
            parse_expr("cos(z)^2", &c).unwrap(),
            Expr::Pow(Box::new(Expr::Call(Func::Cos, Box::new(Expr::Var(4)))), 2)
        );
        let c = ["x1", "x2", "y1", "y2", "z"];
        assert_eq!(
            parse_expr("1/4 + x1*x1", &c).unwrap(),
            Expr::Bin(
                BinOp::Add,
                Box::new(Expr::Bin(BinOp::Div, Box::new(Expr::Int(1)), Box::new(Expr::Int(4)))),
                Box::new(Expr::Bin(BinOp::Mul, Box::new(Expr::Var(0)), Box::new(Expr::Var(0)))),
            )
        );
        assert_eq!(
            parse_expr("cos(w)", &["x", "y"]),
            Err(Error::UnknownIdentifier { name: "w".into(), offset: 4 })
        );
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(parse_expr("x^y", &["x", "y"]), Err(Error::NonIntegerExponent { offset: 2 }));
        assert_eq!(parse_expr("x^1.5", &["x"]), Err(Error::NonIntegerExponent { offset: 2 }));
        assert!(matches!(parse_expr("x + ", &["x"]), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse_expr("(x", &["x"]), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("x $ 1", &["x"]), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("x y", &["x", "y"]), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("sin(x, x)", &["x"]), Err(Error::Arity { .. })));
        assert!(matches!(
            parse_expr("foo(x)", &["x"]),
            Err(Error::UnknownIdentifier { offset: 0, .. })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        let c = ["x"];
        let ev = |s: &str, x: f64| parse_expr(s, &c).unwrap().eval(&[x]).unwrap();
        assert_eq!(ev("-x^2", 3.0), -9.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("x^-2", 2.0), 0.25);
        assert_eq!(ev("8 - 3 - 2", 0.0), 3.0);
        assert_eq!(ev("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(ev("2 * -x", 3.0), -6.0);
        assert_eq!(ev("1.5e1 + e - e", 0.0), 15.0);
    }

    #[test]
    fn eval_examples() {
        let e = parse_expr("x^2 + y", &["x", "y"]).unwrap();
        assert_eq!(e.eval(&[3.0, 4.0]).unwrap(), 13.0);

        let e = parse_expr("cos(z)^2", &["z"]).unwrap();
        let j = e.eval(&[Jet2::seed(&[0.0], 0).unwrap()]).unwrap();
        assert_eq!(j.value(), 1.0);
        assert_eq!(j.d(0), 0.0);
        // independent: second central difference of cos^2 at 0
        let h = 1e-4;
        let f = |z: f64| libm::cos(z) * libm::cos(z);
        let fd = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        assert!((j.hessian(0, 0) - fd).abs() < 1e-6);
        assert_eq!(j.hessian(0, 0), -2.0);

        let e = parse_expr("x*y", &["x", "y"]).unwrap();
        assert_eq!(e.eval(&[ratio(1, 2), ratio(1, 3)]).unwrap(), ratio(1, 6));
        let e = parse_expr("3/5 - x", &["x"]).unwrap();
        assert_eq!(e.eval(&[ratio(1, 10)]).unwrap(), ratio(1, 2));
        let e = parse_expr("sin(x)", &["x"]).unwrap();
        assert!(matches!(e.eval(&[Rational::from_integer(1)]), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn builders_fold_zeros() {
        let x = Expr::var(0);
        assert_eq!(x.clone() * Expr::int(0), Expr::Int(0));
        assert_eq!(x.clone() + Expr::int(0), x);
        assert_eq!(Expr::int(0) - x.clone(), Expr::Neg(Box::new(x.clone())));
        assert_eq!(-(-x.clone()), x);
        assert_eq!(Expr::ratio(-1, 2).eval::<Rational>(&[]).unwrap(), ratio(-1, 2));
        assert_eq!(Expr::var(1).shift_vars(2), Expr::var(3));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u64..50).prop_map(Expr::Int),
            (0.0f64..100.0).prop_map(Expr::Decimal),
            prop_oneof![Just(NamedConst::Pi), Just(NamedConst::E)].prop_map(Expr::Const),
            (0usize..3).prop_map(Expr::Var),
        ];
        leaf.prop_recursive(5, 48, 3, |inner| {
            let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (op, inner.clone(), inner.clone())
                    .prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
                (inner.clone(), -3i32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
                (0usize..8, inner).prop_map(|(f, a)| Expr::Call(Func::ALL[f], Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let coords = names(&["x", "y", "t"]);
            let printed = e.display(&coords).to_string();
            let parsed = parse_expr(&printed, &coords).unwrap();
            prop_assert_eq!(&parsed, &e, "{}", printed);
            let reprinted = parsed.display(&coords).to_string();
            prop_assert_eq!(reprinted, printed);
        }

        #[test]
        fn real_eval_equals_jet_value(e in arb_expr(), p in prop::array::uniform3(-2.0f64..2.0)) {
            let real = e.eval::<f64>(&p);
            let jets: Vec<Jet2> = Jet2::seeds(&p).unwrap();
            let jet = e.eval(&jets);
            if let (Ok(r), Ok(j)) = (real, jet) {
                prop_assert!(r.to_bits() == j.value().to_bits() || (r.is_nan() && j.value().is_nan()));
            }
        }
    }

    #[test]
    fn valid_names() {
        assert!(valid_coordinate_name("x1"));
        assert!(!valid_coordinate_name("sin"));
        assert!(!valid_coordinate_name("e"));
        assert!(!valid_coordinate_name("1x"));
        let _ = vec![0];
    }
}
