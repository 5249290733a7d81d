//! Laurent polynomials in `q` with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element of `Z[q, q^-1]`.
///
/// Stored densely: `coeffs[k]` is the coefficient of `q^(low + k)`. The
/// first and last stored coefficients are nonzero; zero is the empty vector
/// with `low == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentInt {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        Self::from_coeffs(e, vec![c.into()])
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    /// Builds `sum_k coeffs[k] q^(low+k)`, trimming zeros.
    pub fn from_coeffs(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentInt { low, coeffs };
        p.trim();
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Smallest exponent with a nonzero coefficient (0 for the zero element).
    pub fn min_exp(&self) -> i64 {
        self.low
    }

    /// Largest exponent with a nonzero coefficient (0 for the zero element).
    pub fn max_exp(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.low + self.coeffs.len() as i64 - 1
        }
    }

    /// `max_exp - min_exp`: the degree once the `q`-power is stripped.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        if e < self.low {
            return BigInt::zero();
        }
        self.coeffs.get((e - self.low) as usize).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `±q^a` for some `a`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs().is_one()
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentInt { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentInt { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `q -> q^d`.
    pub fn substitute_power(&self, d: i64) -> Self {
        assert!(d > 0, "substitution exponent must be positive");
        Self::from_terms(self.terms().map(|(e, c)| (e * d, c.clone())))
    }

    /// The bar involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c.clone())))
    }

    /// Gcd of the integer coefficients (nonnegative; 0 for the zero element).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact evaluation at a nonzero rational.
    pub fn eval(&self, z: &BigRational) -> BigRational {
        assert!(!z.is_zero() || self.low >= 0, "evaluating a negative power of q at 0");
        if self.is_zero() {
            return BigRational::zero();
        }
        // Horner on the polynomial part, then multiply by z^low.
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + BigRational::from_integer(c.clone());
        }
        acc * rational_pow(z, self.low)
    }

    /// Coefficients of the polynomial part `q^-low * self` (constant term first).
    pub fn poly_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact quotient in `Z[q, q^-1]`, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &LaurentInt) -> Option<LaurentInt> {
        assert!(!divisor.is_zero(), "division by zero Laurent polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (quot, rem) = poly_divrem_exact(&self.coeffs, &divisor.coeffs)?;
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.low - divisor.low, quot))
    }

    /// Gcd in `Z[q]` of the polynomial parts, normalized to a positive leading
    /// coefficient and minimal exponent 0. Integer content is included.
    pub fn gcd(&self, other: &LaurentInt) -> LaurentInt {
        if self.is_zero() {
            return other.normalized_associate();
        }
        if other.is_zero() {
            return self.normalized_associate();
        }
        let g = poly_gcd(&self.coeffs, &other.coeffs);
        Self::from_coeffs(0, g).normalized_associate()
    }

    /// The associate `±q^k * self` with minimal exponent 0 and positive leading coefficient.
    pub fn normalized_associate(&self) -> LaurentInt {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = LaurentInt { low: 0, coeffs: self.coeffs.clone() };
        if out.leading_coeff().is_negative() {
            out = -out;
        }
        out
    }

    /// Divides by the integer content and by the polynomial gcd of nothing else;
    /// the result has content 1 and positive leading coefficient.
    pub fn primitive_part(&self) -> LaurentInt {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        let mut out = LaurentInt {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        };
        if out.leading_coeff().is_negative() {
            out = -out;
        }
        out
    }
}

pub(crate) fn rational_pow(z: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { z.recip() } else { z.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Polynomial long division in `Z[q]` requiring every step to be exact over `Z`.
/// Returns `None` if a leading coefficient does not divide.
fn poly_divrem_exact(num: &[BigInt], den: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len();
    if rem.len() < dn {
        return Some((Vec::new(), rem));
    }
    let lc = den.last().unwrap();
    let mut quot = vec![BigInt::zero(); rem.len() - dn + 1];
    for k in (0..quot.len()).rev() {
        let top = &rem[k + dn - 1];
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= &q * d;
        }
        quot[k] = q;
    }
    rem.truncate(dn - 1);
    Some((quot, rem))
}

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn poly_primitive(p: &[BigInt]) -> Vec<BigInt> {
    let c = poly_content(p);
    if c.is_zero() {
        return Vec::new();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b`: `lc(b)^(deg a - deg b + 1) a mod b`.
fn poly_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lc = b.last().unwrap().clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let top = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lc;
        }
        let off = dr - db;
        for (j, c) in b.iter().enumerate() {
            r[off + j] -= &top * c;
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

/// Gcd in `Z[q]` by the primitive remainder sequence, with content.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let ca = poly_content(a);
    let cb = poly_content(b);
    let c = ca.gcd(&cb);
    let mut x = poly_primitive(a);
    let mut y = poly_primitive(b);
    // Strip the common power of q so the sequence works on polynomials with
    // nonzero constant terms; powers of q are units anyway.
    strip_low_zeros(&mut x);
    strip_low_zeros(&mut y);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            x = vec![BigInt::one()];
            break;
        }
        let r = poly_prem(&x, &y);
        x = y;
        y = poly_primitive(&r);
    }
    let mut g: Vec<BigInt> = x.iter().map(|v| v * &c).collect();
    if g.last().is_some_and(|l| l.is_negative()) {
        for v in g.iter_mut() {
            *v = -v.clone();
        }
    }
    g
}

fn strip_low_zeros(p: &mut Vec<BigInt>) {
    let lead = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..lead);
}

impl Default for LaurentInt {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for LaurentInt {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentInt {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a LaurentInt> for &'a LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.max_exp().max(rhs.max_exp());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + k] += c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - lo) as usize + k] += c;
        }
        LaurentInt::from_coeffs(lo, coeffs)
    }
}

impl<'a> Sub<&'a LaurentInt> for &'a LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentInt> for &'a LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        if self.is_zero() || rhs.is_zero() {
            return LaurentInt::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentInt::from_coeffs(self.low + rhs.low, coeffs)
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentInt> for LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: LaurentInt) -> LaurentInt {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentInt> for LaurentInt {
            type Output = LaurentInt;
            fn $m(self, rhs: &'a LaurentInt) -> LaurentInt {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&LaurentInt> for LaurentInt {
    fn add_assign(&mut self, rhs: &LaurentInt) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&LaurentInt> for LaurentInt {
    fn sub_assign(&mut self, rhs: &LaurentInt) {
        *self = &*self - rhs;
    }
}

impl PartialOrd for LaurentInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary total order (by exponent range, then coefficients) so values can key ordered maps.
impl Ord for LaurentInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.low
            .cmp(&other.low)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = a.is_one();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if !unit {
                        write!(f, "{a}*")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentInt({self})")
    }
}
