//! Scalar rings that expressions and tensors are evaluated over.

use alloc::format;
use core::fmt::Debug;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::{unary_taylor, Elementary};

/// Exact rationals used by the frame engine.
pub type Rational = num_rational::Ratio<i128>;

/// A commutative ring with the partial operations an expression may use.
///
/// Fallible operations return an error either because the argument is outside
/// the domain or because the ring cannot represent the result at all
/// (rationals have no `sin`).
pub trait Ring: Clone + Debug {
    const NAME: &'static str;

    fn from_int(v: i64) -> Self;
    fn from_decimal(v: f64) -> Result<Self>;
    fn pi() -> Result<Self>;
    fn e() -> Result<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn powi(&self, k: i32) -> Result<Self>;
    /// Transcendental functions (everything in [`Elementary`] except the
    /// arithmetic tags).
    fn unary(&self, f: Elementary) -> Result<Self>;
    /// Real value (the value component for jets).
    fn real(&self) -> f64;

    fn zero() -> Self {
        Self::from_int(0)
    }
    fn one() -> Self {
        Self::from_int(1)
    }
}

/// Ordered scalars that tensor residuals are measured in.
pub trait Scalar: Ring + PartialOrd {
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Converts a parameter such as `α` or `κ`; exact rings take the binary
    /// value of the float exactly.
    fn from_real(v: f64) -> Result<Self>;
    /// `Some` for exact rings.
    fn exact(&self) -> Option<Rational> {
        None
    }
}

impl Ring for f64 {
    const NAME: &'static str = "reals";

    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_decimal(v: f64) -> Result<Self> {
        Ok(v)
    }
    fn pi() -> Result<Self> {
        Ok(core::f64::consts::PI)
    }
    fn e() -> Result<Self> {
        Ok(core::f64::consts::E)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if *o == 0.0 {
            return Err(Error::Domain { op: "division by zero", value: 0.0 });
        }
        Ok(self / o)
    }
    fn powi(&self, k: i32) -> Result<Self> {
        unary_taylor(Elementary::PowInt(k), *self, false).map(|t| t.0)
    }
    fn unary(&self, f: Elementary) -> Result<Self> {
        unary_taylor(f, *self, false).map(|t| t.0)
    }
    fn real(&self) -> f64 {
        *self
    }
}

impl Scalar for f64 {
    fn abs(&self) -> Self {
        libm::fabs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_real(v: f64) -> Result<Self> {
        Ok(v)
    }
}

impl Ring for Rational {
    const NAME: &'static str = "rationals";

    fn from_int(v: i64) -> Self {
        Rational::from_integer(v as i128)
    }
    fn from_decimal(v: f64) -> Result<Self> {
        Err(Error::Unsupported {
            ring: Self::NAME,
            op: format!("decimal literal {v:?}"),
        })
    }
    fn pi() -> Result<Self> {
        Err(Error::Unsupported { ring: Self::NAME, op: "pi".into() })
    }
    fn e() -> Result<Self> {
        Err(Error::Unsupported { ring: Self::NAME, op: "e".into() })
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::Domain { op: "division by zero", value: 0.0 });
        }
        Ok(self / o)
    }
    fn powi(&self, k: i32) -> Result<Self> {
        if k < 0 && self.is_zero() {
            return Err(Error::Domain { op: "negative power of zero", value: 0.0 });
        }
        Ok(Rational::pow(self, k))
    }
    fn unary(&self, f: Elementary) -> Result<Self> {
        Err(Error::Unsupported { ring: Self::NAME, op: f.name().into() })
    }
    fn real(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Scalar for Rational {
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_real(v: f64) -> Result<Self> {
        float_to_rational(v).ok_or(Error::Unsupported {
            ring: Self::NAME,
            op: format!("parameter {v:?}"),
        })
    }
    fn exact(&self) -> Option<Rational> {
        Some(*self)
    }
}

/// Exact value of a finite float, when numerator and denominator fit.
pub fn float_to_rational(v: f64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    if v == 0.0 {
        return Some(Rational::from_integer(0));
    }
    let bits = v.to_bits();
    let sign: i128 = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i128;
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1i128 << 52), exp - 1075) };
    if e >= 0 {
        if e > 70 {
            return None;
        }
        let m = mant.checked_mul(1i128 << e)?;
        Some(Rational::from_integer(sign * m))
    } else {
        let shift = u32::try_from(-e).ok()?;
        if shift > 126 {
            return None;
        }
        Some(Rational::new(sign * mant, 1i128 << shift))
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Shorthand for `p/q`.
pub fn ratio(p: i128, q: i128) -> Rational {
    Rational::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rejects_transcendentals() {
        let x = ratio(1, 2);
        assert!(matches!(x.unary(Elementary::Sin), Err(Error::Unsupported { .. })));
        assert!(matches!(Rational::from_decimal(0.5), Err(Error::Unsupported { .. })));
        assert_eq!(x.powi(-2).unwrap(), ratio(4, 1));
        assert!(<Rational as Ring>::zero().powi(-1).is_err());
    }

    #[test]
    fn floats_convert_exactly() {
        assert_eq!(float_to_rational(0.75), Some(ratio(3, 4)));
        assert_eq!(float_to_rational(-2.0), Some(ratio(-2, 1)));
        assert_eq!(float_to_rational(0.0), Some(ratio(0, 1)));
        assert_eq!(float_to_rational(f64::NAN), None);
        let tenth = float_to_rational(0.1).unwrap();
        assert_eq!(rational_to_f64(&tenth), 0.1);
    }

    #[test]
    fn real_division_by_zero_is_an_error() {
        assert!(Ring::div(&1.0f64, &0.0).is_err());
        assert_eq!(Ring::div(&1.0f64, &4.0).unwrap(), 0.25);
    }
}
