//! Truncated Taylor scalars for forward-mode differentiation.
//!
//! [`Jet2`] carries value, gradient and Hessian with respect to up to
//! [`MAX_DIM`] coordinates; [`Jet1`] drops the Hessian and is what tensor
//! fields are evaluated in. Storage is dense and inline so jets are `Copy`.
//! A jet built with [`Jet2::constant`] has `n = 0` and mixes with jets of any
//! width, its derivative slots being zero.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Largest chart dimension supported by the jets.
pub const MAX_DIM: usize = 8;

/// Elementary operations understood by [`apply`] and by expression evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    PowInt(i32),
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Elementary {
    pub fn arity(self) -> usize {
        match self {
            Elementary::Add | Elementary::Sub | Elementary::Mul | Elementary::Div => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Add => "add",
            Elementary::Sub => "sub",
            Elementary::Mul => "mul",
            Elementary::Div => "div",
            Elementary::Neg => "neg",
            Elementary::PowInt(_) => "pow",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sqrt => "sqrt",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
        }
    }

    pub fn is_transcendental(self) -> bool {
        matches!(
            self,
            Elementary::Sin
                | Elementary::Cos
                | Elementary::Tan
                | Elementary::Exp
                | Elementary::Log
                | Elementary::Sqrt
                | Elementary::Sinh
                | Elementary::Cosh
        )
    }
}

/// Applies an elementary operation in any scalar ring.
pub fn apply<R: Ring>(f: Elementary, args: &[R]) -> Result<R> {
    if args.len() != f.arity() {
        return Err(Error::Arity {
            name: f.name().into(),
            expected: f.arity(),
            got: args.len(),
        });
    }
    match f {
        Elementary::Add => Ok(args[0].add(&args[1])),
        Elementary::Sub => Ok(args[0].sub(&args[1])),
        Elementary::Mul => Ok(args[0].mul(&args[1])),
        Elementary::Div => args[0].div(&args[1]),
        Elementary::Neg => Ok(args[0].neg()),
        Elementary::PowInt(k) => args[0].powi(k),
        _ => args[0].unary(f),
    }
}

/// `jet_apply`: [`apply`] specialised to second-order jets.
pub fn jet_apply(f: Elementary, args: &[Jet2]) -> Result<Jet2> {
    apply(f, args)
}

/// Value and first two derivatives of a unary elementary function at `x`.
///
/// `differentiable` selects whether a point where the derivative blows up
/// (`sqrt` at zero) is an error.
pub(crate) fn unary_taylor(f: Elementary, x: f64, differentiable: bool) -> Result<(f64, f64, f64)> {
    Ok(match f {
        Elementary::Sin => {
            let (s, c) = (libm::sin(x), libm::cos(x));
            (s, c, -s)
        }
        Elementary::Cos => {
            let (s, c) = (libm::sin(x), libm::cos(x));
            (c, -s, -c)
        }
        Elementary::Tan => {
            let t = libm::tan(x);
            let sec2 = 1.0 + t * t;
            (t, sec2, 2.0 * t * sec2)
        }
        Elementary::Exp => {
            let e = libm::exp(x);
            (e, e, e)
        }
        Elementary::Log => {
            if !(x > 0.0) {
                return Err(Error::Domain { op: "log of non-positive", value: x });
            }
            (libm::log(x), 1.0 / x, -1.0 / (x * x))
        }
        Elementary::Sqrt => {
            if x < 0.0 || (differentiable && x == 0.0) || x.is_nan() {
                return Err(Error::Domain { op: "sqrt of negative", value: x });
            }
            let r = libm::sqrt(x);
            if differentiable {
                (r, 0.5 / r, -0.25 / (r * x))
            } else {
                (r, 0.0, 0.0)
            }
        }
        Elementary::Sinh => {
            let (s, c) = (libm::sinh(x), libm::cosh(x));
            (s, c, s)
        }
        Elementary::Cosh => {
            let (s, c) = (libm::sinh(x), libm::cosh(x));
            (c, s, c)
        }
        Elementary::PowInt(k) => {
            if k < 0 && x == 0.0 {
                return Err(Error::Domain { op: "negative power of zero", value: x });
            }
            let kf = k as f64;
            let v = powi(x, k);
            let d1 = if k == 0 { 0.0 } else { kf * powi(x, k - 1) };
            let d2 = if k == 0 || k == 1 { 0.0 } else { kf * (kf - 1.0) * powi(x, k - 2) };
            (v, d1, d2)
        }
        other => {
            return Err(Error::Unsupported {
                ring: "unary",
                op: other.name().into(),
            })
        }
    })
}

pub(crate) fn powi(x: f64, k: i32) -> f64 {
    let mut base = if k < 0 { 1.0 / x } else { x };
    let mut e = k.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    n: usize,
    value: f64,
    grad: [f64; MAX_DIM],
    hess: [[f64; MAX_DIM]; MAX_DIM],
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Self {
            n: 0,
            value,
            grad: [0.0; MAX_DIM],
            hess: [[0.0; MAX_DIM]; MAX_DIM],
        }
    }

    /// Coordinate seed for variable `i` at point `p`.
    pub fn seed(p: &[f64], i: usize) -> Result<Self> {
        if p.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: p.len(), max: MAX_DIM });
        }
        if i >= p.len() {
            return Err(Error::IndexOutOfRange { index: i, dim: p.len() });
        }
        let mut j = Self::constant(p[i]);
        j.n = p.len();
        j.grad[i] = 1.0;
        Ok(j)
    }

    /// All coordinate seeds at `p`.
    pub fn seeds(p: &[f64]) -> Result<alloc::vec::Vec<Self>> {
        (0..p.len()).map(|i| Self::seed(p, i)).collect()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad[..self.n]
    }

    pub fn d(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn hessian(&self, i: usize, j: usize) -> f64 {
        self.hess[i][j]
    }

    /// Drops the Hessian.
    pub fn first_order(&self) -> Jet1 {
        Jet1 {
            n: self.n,
            value: self.value,
            grad: self.grad,
        }
    }

    /// `∂_i` of this jet as a first-order jet (value `∂_i f`, gradient row `i` of the Hessian).
    pub fn partial(&self, i: usize) -> Jet1 {
        Jet1 {
            n: self.n,
            value: self.grad[i],
            grad: self.hess[i],
        }
    }

    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Self::constant(f0);
        out.n = self.n;
        for i in 0..self.n {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..self.n {
            for j in i..self.n {
                let h = f1 * self.hess[i][j] + f2 * self.grad[i] * self.grad[j];
                out.hess[i][j] = h;
                out.hess[j][i] = h;
            }
        }
        out
    }

    fn zip(&self, other: &Self, value: f64, g: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::constant(value);
        out.n = self.n.max(other.n);
        for i in 0..out.n {
            out.grad[i] = g(self.grad[i], other.grad[i]);
        }
        for i in 0..out.n {
            for j in i..out.n {
                let h = g(self.hess[i][j], other.hess[i][j]);
                out.hess[i][j] = h;
                out.hess[j][i] = h;
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        if self.value == 0.0 {
            return Err(Error::Domain { op: "division by zero", value: 0.0 });
        }
        let v = 1.0 / self.value;
        Ok(self.chain(v, -v * v, 2.0 * v * v * v))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        self.zip(&o, self.value + o.value, |a, b| a + b)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self.zip(&o, self.value - o.value, |a, b| a - b)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.chain(-self.value, -1.0, 0.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let mut out = Jet2::constant(self.value * o.value);
        out.n = self.n.max(o.n);
        for i in 0..out.n {
            out.grad[i] = self.value * o.grad[i] + o.value * self.grad[i];
        }
        for i in 0..out.n {
            for j in i..out.n {
                let h = self.value * o.hess[i][j]
                    + o.value * self.hess[i][j]
                    + self.grad[i] * o.grad[j]
                    + o.grad[i] * self.grad[j];
                out.hess[i][j] = h;
                out.hess[j][i] = h;
            }
        }
        out
    }
}

impl Ring for Jet2 {
    const NAME: &'static str = "jets";

    fn from_int(v: i64) -> Self {
        Jet2::constant(v as f64)
    }
    fn from_decimal(v: f64) -> Result<Self> {
        Ok(Jet2::constant(v))
    }
    fn pi() -> Result<Self> {
        Ok(Jet2::constant(core::f64::consts::PI))
    }
    fn e() -> Result<Self> {
        Ok(Jet2::constant(core::f64::consts::E))
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn div(&self, o: &Self) -> Result<Self> {
        let mut q = *self * o.recip()?;
        q.value = self.value / o.value;
        Ok(q)
    }
    fn powi(&self, k: i32) -> Result<Self> {
        let (f0, f1, f2) = unary_taylor(Elementary::PowInt(k), self.value, true)?;
        Ok(self.chain(f0, f1, f2))
    }
    fn unary(&self, f: Elementary) -> Result<Self> {
        let (f0, f1, f2) = unary_taylor(f, self.value, true)?;
        Ok(self.chain(f0, f1, f2))
    }
    fn real(&self) -> f64 {
        self.value
    }
}

/// First-order jet: value and gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1 {
    n: usize,
    value: f64,
    grad: [f64; MAX_DIM],
}

impl Jet1 {
    pub fn constant(value: f64) -> Self {
        Self { n: 0, value, grad: [0.0; MAX_DIM] }
    }

    pub fn seed(p: &[f64], i: usize) -> Result<Self> {
        Jet2::seed(p, i).map(|j| j.first_order())
    }

    pub fn seeds(p: &[f64]) -> Result<alloc::vec::Vec<Self>> {
        (0..p.len()).map(|i| Self::seed(p, i)).collect()
    }

    /// Builds a jet from a value and explicit gradient.
    pub fn from_parts(value: f64, gradient: &[f64]) -> Result<Self> {
        if gradient.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: gradient.len(), max: MAX_DIM });
        }
        let mut j = Self::constant(value);
        j.n = gradient.len();
        j.grad[..gradient.len()].copy_from_slice(gradient);
        Ok(j)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad[..self.n]
    }

    pub fn d(&self, i: usize) -> f64 {
        self.grad[i]
    }

    /// Directional derivative along `v` (`v[i]` paired with `∂_i`).
    pub fn along(&self, v: &[f64]) -> f64 {
        v.iter().zip(self.grad.iter()).map(|(a, b)| a * b).sum()
    }

    /// Composes with a change of variables: `self` is a jet in variables `y`,
    /// `dy[l]` is the jet of `y_l` in new variables `x`.
    pub fn compose(&self, dy: &[Jet1]) -> Jet1 {
        let mut out = Jet1::constant(self.value);
        for (l, yl) in dy.iter().enumerate().take(self.n) {
            out.n = out.n.max(yl.n);
            for i in 0..yl.n {
                out.grad[i] += self.grad[l] * yl.grad[i];
            }
        }
        out
    }

    fn chain(&self, f0: f64, f1: f64) -> Self {
        let mut out = *self;
        out.value = f0;
        for g in out.grad.iter_mut().take(self.n) {
            *g *= f1;
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        if self.value == 0.0 {
            return Err(Error::Domain { op: "division by zero", value: 0.0 });
        }
        let v = 1.0 / self.value;
        Ok(self.chain(v, -v * v))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.chain(self.value * a, a)
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(mut self, o: Jet1) -> Jet1 {
        self.value += o.value;
        self.n = self.n.max(o.n);
        for i in 0..self.n {
            self.grad[i] += o.grad[i];
        }
        self
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(mut self, o: Jet1) -> Jet1 {
        self.value -= o.value;
        self.n = self.n.max(o.n);
        for i in 0..self.n {
            self.grad[i] -= o.grad[i];
        }
        self
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self.scale(-1.0)
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, o: Jet1) -> Jet1 {
        let mut out = Jet1::constant(self.value * o.value);
        out.n = self.n.max(o.n);
        for i in 0..out.n {
            out.grad[i] = self.value * o.grad[i] + o.value * self.grad[i];
        }
        out
    }
}

/// Unchecked quotient; a zero denominator yields non-finite components.
impl Div for Jet1 {
    type Output = Jet1;
    fn div(self, o: Jet1) -> Jet1 {
        let v = 1.0 / o.value;
        let mut q = self * o.chain(v, -v * v);
        q.value = self.value / o.value;
        q
    }
}

impl Ring for Jet1 {
    const NAME: &'static str = "first-order jets";

    fn from_int(v: i64) -> Self {
        Jet1::constant(v as f64)
    }
    fn from_decimal(v: f64) -> Result<Self> {
        Ok(Jet1::constant(v))
    }
    fn pi() -> Result<Self> {
        Ok(Jet1::constant(core::f64::consts::PI))
    }
    fn e() -> Result<Self> {
        Ok(Jet1::constant(core::f64::consts::E))
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn div(&self, o: &Self) -> Result<Self> {
        let mut q = *self * o.recip()?;
        q.value = self.value / o.value;
        Ok(q)
    }
    fn powi(&self, k: i32) -> Result<Self> {
        let (f0, f1, _) = unary_taylor(Elementary::PowInt(k), self.value, true)?;
        Ok(self.chain(f0, f1))
    }
    fn unary(&self, f: Elementary) -> Result<Self> {
        let (f0, f1, _) = unary_taylor(f, self.value, true)?;
        Ok(self.chain(f0, f1))
    }
    fn real(&self) -> f64 {
        self.value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn eval_f64(f: Elementary, x: &[f64]) -> f64 {
        apply::<f64>(f, x).unwrap()
    }

    const UNARY: [Elementary; 10] = [
        Elementary::Neg,
        Elementary::PowInt(3),
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Tan,
        Elementary::Exp,
        Elementary::Log,
        Elementary::Sqrt,
        Elementary::Sinh,
        Elementary::Cosh,
    ];

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn seed_examples() {
        let j = Jet2::seed(&[2.0, 5.0], 0).unwrap();
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.gradient(), &[1.0, 0.0]);
        assert_eq!(j.hessian(0, 0), 0.0);
        assert_eq!(j.hessian(0, 1), 0.0);
        assert_eq!(j.hessian(1, 1), 0.0);

        let j = Jet2::seed(&[0.0], 0).unwrap();
        assert_eq!((j.value(), j.gradient()), (0.0, &[1.0][..]));
        assert_eq!(j.hessian(0, 0), 0.0);

        let j = Jet2::seed(&[1.0, 1.0, 1.0], 2).unwrap();
        assert_eq!((j.value(), j.gradient()), (1.0, &[0.0, 0.0, 1.0][..]));

        assert_eq!(
            Jet2::seed(&[1.0, 2.0], 2),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        );
    }

    #[test]
    fn apply_examples() {
        let x = Jet2::seed(&[3.0], 0).unwrap();
        let sq = jet_apply(Elementary::Mul, &[x, x]).unwrap();
        assert_eq!((sq.value(), sq.d(0), sq.hessian(0, 0)), (9.0, 6.0, 2.0));

        let x = Jet2::seed(&[0.0], 0).unwrap();
        let s = jet_apply(Elementary::Sin, &[x]).unwrap();
        assert_eq!((s.value(), s.d(0), s.hessian(0, 0)), (0.0, 1.0, 0.0));
        let c = jet_apply(Elementary::Cos, &[x]).unwrap();
        assert_eq!((c.value(), c.d(0), c.hessian(0, 0)), (1.0, 0.0, -1.0));
    }

    #[test]
    fn cos_at_zero_matches_finite_differences() {
        let h = 1e-5;
        let f = |z: f64| libm::cos(z);
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let z = jet_apply(Elementary::Cos, &[Jet2::seed(&[0.0], 0).unwrap()]).unwrap();
        assert!((z.d(0) - d1).abs() <= 1e-6);
        assert!(rel_close(z.hessian(0, 0), d2, 1e-6));
    }

    #[test]
    fn domain_errors() {
        let z = Jet2::seed(&[0.0], 0).unwrap();
        assert!(matches!(jet_apply(Elementary::Div, &[z, z]), Err(Error::Domain { .. })));
        assert!(matches!(jet_apply(Elementary::Log, &[z]), Err(Error::Domain { .. })));
        let neg = Jet2::seed(&[-1.0], 0).unwrap();
        assert!(matches!(jet_apply(Elementary::Sqrt, &[neg]), Err(Error::Domain { .. })));
        assert!(matches!(jet_apply(Elementary::Sin, &[z, z]), Err(Error::Arity { .. })));
        assert!(matches!(
            jet_apply(Elementary::PowInt(-1), &[z]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn first_order_tracks_second_order() {
        let p = [0.4, -1.3];
        let x = Jet2::seed(&p, 0).unwrap();
        let y = Jet2::seed(&p, 1).unwrap();
        let f2 = (x * y).unary(Elementary::Sin).unwrap() + x.unary(Elementary::Exp).unwrap();
        let x1 = Jet1::seed(&p, 0).unwrap();
        let y1 = Jet1::seed(&p, 1).unwrap();
        let f1 = (x1 * y1).unary(Elementary::Sin).unwrap() + x1.unary(Elementary::Exp).unwrap();
        assert_eq!(f1, f2.first_order());
    }

    fn domain_point(f: Elementary, raw: f64) -> f64 {
        match f {
            Elementary::Log | Elementary::Sqrt => 0.2 + raw.abs(),
            Elementary::Tan => raw.clamp(-1.2, 1.2),
            _ => raw,
        }
    }

    proptest! {
        #[test]
        fn unary_rules_match_finite_differences(idx in 0usize..UNARY.len(), raw in -2.0f64..2.0) {
            let f = UNARY[idx];
            let x0 = domain_point(f, raw);
            let h = 1e-5;
            let g = |x: f64| eval_f64(f, &[x]);
            let d1 = (g(x0 + h) - g(x0 - h)) / (2.0 * h);
            let d2 = (g(x0 + h) - 2.0 * g(x0) + g(x0 - h)) / (h * h);
            let j = jet_apply(f, &[Jet2::seed(&[x0], 0).unwrap()]).unwrap();
            prop_assert_eq!(j.value(), g(x0));
            prop_assert!(rel_close(j.d(0), d1, 1e-6), "{:?}: {} vs {}", f, j.d(0), d1);
            // second differences lose ~half the digits; compare against a
            // central difference of the exact first derivative instead
            let jp = jet_apply(f, &[Jet2::seed(&[x0 + h], 0).unwrap()]).unwrap().d(0);
            let jm = jet_apply(f, &[Jet2::seed(&[x0 - h], 0).unwrap()]).unwrap().d(0);
            let d2_from_d1 = (jp - jm) / (2.0 * h);
            prop_assert!(rel_close(j.hessian(0, 0), d2_from_d1, 1e-6), "{:?}: {} vs {}", f, j.hessian(0, 0), d2_from_d1);
            prop_assert!(rel_close(j.hessian(0, 0), d2, 1e-3));
        }

        #[test]
        fn binary_rules_match_finite_differences(
            op in prop::sample::select(vec![Elementary::Add, Elementary::Sub, Elementary::Mul, Elementary::Div]),
            a in -2.0f64..2.0, b in 0.3f64..2.0,
        ) {
            let p = [a, b];
            let h = 1e-5;
            let f = |x: f64, y: f64| eval_f64(op, &[x, y]);
            let jx = Jet2::seed(&p, 0).unwrap();
            let jy = Jet2::seed(&p, 1).unwrap();
            let j = jet_apply(op, &[jx, jy]).unwrap();
            let gx = (f(a + h, b) - f(a - h, b)) / (2.0 * h);
            let gy = (f(a, b + h) - f(a, b - h)) / (2.0 * h);
            prop_assert!(rel_close(j.d(0), gx, 1e-6));
            prop_assert!(rel_close(j.d(1), gy, 1e-6));
            let hxy = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4.0 * h * h);
            prop_assert!((j.hessian(0, 1) - hxy).abs() <= 1e-4 * (1.0 + hxy.abs()));
            prop_assert_eq!(j.hessian(0, 1), j.hessian(1, 0));
        }
    }

    /// f(x, y) = sin(x y) + exp(x) at 100 seeded points against finite differences.
    #[test]
    fn composition_matches_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let f = |x: f64, y: f64| libm::sin(x * y) + libm::exp(x);
        let h = 1e-5;
        for _ in 0..100 {
            let p: Vec<f64> = (0..2).map(|_| rng.random_range(-2.0..2.0)).collect();
            let x = Jet2::seed(&p, 0).unwrap();
            let y = Jet2::seed(&p, 1).unwrap();
            let j = (x * y).unary(Elementary::Sin).unwrap() + x.unary(Elementary::Exp).unwrap();
            let (a, b) = (p[0], p[1]);
            assert_eq!(j.value(), f(a, b));
            let gx = (f(a + h, b) - f(a - h, b)) / (2.0 * h);
            let gy = (f(a, b + h) - f(a, b - h)) / (2.0 * h);
            assert!(rel_close(j.d(0), gx, 1e-6));
            assert!(rel_close(j.d(1), gy, 1e-6));
            // Hessian rows against central differences of the jet gradient
            for i in 0..2 {
                let mut pp = p.clone();
                let mut pm = p.clone();
                pp[i] += h;
                pm[i] -= h;
                let jp = {
                    let x = Jet2::seed(&pp, 0).unwrap();
                    let y = Jet2::seed(&pp, 1).unwrap();
                    (x * y).unary(Elementary::Sin).unwrap() + x.unary(Elementary::Exp).unwrap()
                };
                let jm = {
                    let x = Jet2::seed(&pm, 0).unwrap();
                    let y = Jet2::seed(&pm, 1).unwrap();
                    (x * y).unary(Elementary::Sin).unwrap() + x.unary(Elementary::Exp).unwrap()
                };
                for k in 0..2 {
                    let fd = (jp.d(k) - jm.d(k)) / (2.0 * h);
                    assert!(rel_close(j.hessian(i, k), fd, 1e-6), "{} vs {}", j.hessian(i, k), fd);
                }
            }
        }
    }
}
