//! Rational functions of `q` over the rationals, kept in a canonical reduced form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{LaurentInt, QError};

/// `numerator / denominator` with both in `Z[q, q^-1]`.
///
/// Canonical form: numerator and denominator are coprime in `Z[q]` (integer
/// content included), the denominator has minimal exponent 0 and a positive
/// leading coefficient. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatQ {
    num: LaurentInt,
    den: LaurentInt,
}

impl RatQ {
    pub fn zero() -> Self {
        RatQ { num: LaurentInt::zero(), den: LaurentInt::one() }
    }

    pub fn one() -> Self {
        RatQ { num: LaurentInt::one(), den: LaurentInt::one() }
    }

    pub fn new(num: LaurentInt, den: LaurentInt) -> Result<Self, QError> {
        if den.is_zero() {
            return Err(QError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_integer(c: impl Into<BigInt>) -> Self {
        RatQ { num: LaurentInt::constant(c), den: LaurentInt::one() }
    }

    fn normalize(num: LaurentInt, den: LaurentInt) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let shift = den.min_exp();
        num = num.shift(-shift);
        den = den.shift(-shift);
        if den.leading_coeff().is_negative() {
            num = -num;
            den = -den;
        }
        RatQ { num, den }
    }

    pub fn numerator(&self) -> &LaurentInt {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some` when the value lies in `Z[q, q^-1]`.
    pub fn as_laurent(&self) -> Option<&LaurentInt> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self, QError> {
        if self.is_zero() {
            return Err(QError::ZeroDenominator);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        RatQ {
            num: base.num.pow(n.unsigned_abs()),
            den: base.den.pow(n.unsigned_abs()),
        }
        .renormalized()
    }

    fn renormalized(self) -> Self {
        Self::normalize(self.num, self.den)
    }

    /// Exact value at `q = z`, or `PoleAtZ` when the denominator vanishes there.
    pub fn eval(&self, z: &BigRational) -> Result<BigRational, QError> {
        if z.is_zero() {
            return Err(QError::ZeroSpecialization);
        }
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(QError::PoleAtZ { z: z.to_string() });
        }
        Ok(self.num.eval(z) / d)
    }
}

impl From<LaurentInt> for RatQ {
    fn from(p: LaurentInt) -> Self {
        // q-power and sign normalization are already trivial for a unit denominator
        RatQ { num: p, den: LaurentInt::one() }
    }
}

impl From<i64> for RatQ {
    fn from(c: i64) -> Self {
        Self::from_integer(c)
    }
}

impl Default for RatQ {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    fn add(self, rhs: &RatQ) -> RatQ {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatQ::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RatQ::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    fn sub(self, rhs: &RatQ) -> RatQ {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    fn mul(self, rhs: &RatQ) -> RatQ {
        if self.is_zero() || rhs.is_zero() {
            return RatQ::zero();
        }
        RatQ::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RatQ> for &'a RatQ {
    type Output = RatQ;
    fn div(self, rhs: &RatQ) -> RatQ {
        self * &rhs.inv().expect("division by zero rational function")
    }
}

impl Neg for &RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        RatQ { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatQ {
    type Output = RatQ;
    fn neg(self) -> RatQ {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatQ> for RatQ {
            type Output = RatQ;
            fn $m(self, rhs: RatQ) -> RatQ {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatQ({self})")
    }
}
