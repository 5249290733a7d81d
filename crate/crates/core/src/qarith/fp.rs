//! Laurent polynomials and rational functions over a prime field `F_p`, used
//! for the function-field specialization `q -> t` in `F_p(t)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{LaurentInt, QError, RatQ};

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// An element of `F_p[t, t^-1]`, trimmed like [`LaurentInt`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpLaurent {
    p: u64,
    low: i64,
    coeffs: Vec<u64>,
}

impl FpLaurent {
    pub fn zero(p: u64) -> Self {
        FpLaurent { p, low: 0, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpLaurent { p, low: 0, coeffs: vec![1 % p] }.trimmed()
    }

    /// Reduction of an integer Laurent polynomial modulo `p`.
    pub fn from_laurent(f: &LaurentInt, p: u64) -> Result<Self, QError> {
        if !is_prime(p) {
            return Err(QError::NotPrime(p));
        }
        let pb = BigInt::from(p);
        let coeffs = f
            .poly_coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits in u64"))
            .collect();
        Ok(FpLaurent { p, low: f.min_exp(), coeffs }.trimmed())
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.low += lead as i64;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut out = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpLaurent {
            p: self.p,
            low: self.low + rhs.low,
            coeffs: out.into_iter().map(|c| c as u64).collect(),
        }
        .trimmed()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return FpLaurent {
                p: self.p,
                low: rhs.low,
                coeffs: rhs.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
            }
            .trimmed();
        }
        let lo = self.low.min(rhs.low);
        let hi = (self.low + self.coeffs.len() as i64).max(rhs.low + rhs.coeffs.len() as i64);
        let mut out = vec![0u64; (hi - lo) as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[(self.low - lo) as usize + k] = c;
        }
        for (k, &c) in rhs.coeffs.iter().enumerate() {
            let slot = &mut out[(rhs.low - lo) as usize + k];
            *slot = (*slot + self.p - c) % self.p;
        }
        FpLaurent { p: self.p, low: lo, coeffs: out }.trimmed()
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by zero");
        if self.is_zero() {
            return Some(self.clone());
        }
        let p = self.p;
        let dn = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dn {
            return None;
        }
        let lc_inv = inv_mod(*divisor.coeffs.last().unwrap(), p);
        let mut quot = vec![0u64; rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dn - 1];
            if top == 0 {
                continue;
            }
            let q = (top as u128 * lc_inv as u128 % p as u128) as u64;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let sub = (q as u128 * d as u128 % p as u128) as u64;
                rem[k + j] = (rem[k + j] + p - sub) % p;
            }
            quot[k] = q;
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(FpLaurent { p, low: self.low - divisor.low, coeffs: quot }.trimmed())
    }
}

impl fmt::Display for FpLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, c)| format!("{c}*t^{}", self.low + k as i64))
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}

impl fmt::Debug for FpLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpLaurent({self})")
    }
}

/// An element of `F_p(t)` as an unreduced fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpRat {
    pub num: FpLaurent,
    pub den: FpLaurent,
}

impl FpRat {
    pub fn from_ratq(f: &RatQ, p: u64) -> Result<Self, QError> {
        let num = FpLaurent::from_laurent(f.numerator(), p)?;
        let den = FpLaurent::from_laurent(f.denominator(), p)?;
        if den.is_zero() {
            return Err(QError::PoleAtZ { z: format!("t in F_{p}(t)") });
        }
        Ok(FpRat { num, den })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_division() {
        let f = LaurentInt::from_terms([(2, 6), (0, 1)]); // q^2 + 1 mod 5, no root at -1
        let g = FpLaurent::from_laurent(&f, 5).unwrap();
        let h = FpLaurent::from_laurent(&LaurentInt::from_terms([(1, 1), (0, 1)]), 5).unwrap();
        let prod = g.mul(&h);
        assert_eq!(prod.div_exact(&h).unwrap(), g);
        assert!(g.div_exact(&h).is_none());
        assert!(g.sub(&g).is_zero());
    }

    #[test]
    fn content_divisible_by_p_vanishes() {
        let f = RatQ::new(LaurentInt::one(), LaurentInt::from_terms([(1, 5), (0, 10)])).unwrap();
        assert!(matches!(FpRat::from_ratq(&f, 5), Err(QError::PoleAtZ { .. })));
        assert!(matches!(FpLaurent::from_laurent(&LaurentInt::one(), 6), Err(QError::NotPrime(6))));
    }
}
