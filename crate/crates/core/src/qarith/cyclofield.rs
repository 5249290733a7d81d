//! The cyclotomic field `Q(zeta_n) = Q[x] / Phi_n(x)`, for specializing at a
//! primitive root of unity.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{cyclotomic, LaurentInt, QError};

type RPoly = Vec<BigRational>;

fn trim(p: &mut RPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_sub(a: &RPoly, b: &RPoly) -> RPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] -= c;
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &RPoly, b: &RPoly) -> RPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_divrem(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lc = b.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let q = &rem[k + b.len() - 1] / &lc;
        if q.is_zero() {
            continue;
        }
        for (j, c) in b.iter().enumerate() {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// `Q(zeta_n)`, carrying the reduction modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloField {
    n: u64,
    modulus: Arc<RPoly>,
}

impl CycloField {
    pub fn new(n: u64) -> Result<Self, QError> {
        let phi = cyclotomic(n)?;
        let modulus = phi.poly_coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        Ok(CycloField { n, modulus: Arc::new(modulus) })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    fn reduce(&self, p: RPoly) -> CycloElem {
        let (_, r) = poly_divrem(&p, &self.modulus);
        CycloElem { field: self.clone(), coeffs: r }
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem { field: self.clone(), coeffs: Vec::new() }
    }

    pub fn one(&self) -> CycloElem {
        self.reduce(vec![BigRational::one()])
    }

    /// Image of `f(q)` under `q -> zeta_n`.
    pub fn embed(&self, f: &LaurentInt) -> CycloElem {
        let n = self.n as i64;
        let mut p = vec![BigRational::zero(); self.n as usize];
        for (e, c) in f.terms() {
            p[e.rem_euclid(n) as usize] += BigRational::from_integer(c.clone());
        }
        trim(&mut p);
        self.reduce(p)
    }
}

/// An element of [`CycloField`].
#[derive(Clone, PartialEq, Eq)]
pub struct CycloElem {
    field: CycloField,
    coeffs: RPoly,
}

impl CycloElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let neg: RPoly = rhs.coeffs.iter().map(|c| -c).collect();
        CycloElem { field: self.field.clone(), coeffs: poly_sub(&self.coeffs, &neg) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        CycloElem { field: self.field.clone(), coeffs: poly_sub(&self.coeffs, &rhs.coeffs) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.field.reduce(poly_mul(&self.coeffs, &rhs.coeffs))
    }

    pub fn neg(&self) -> Self {
        CycloElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Inverse by the extended Euclidean algorithm against `Phi_n`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (mut r0, mut r1) = ((*self.field.modulus).clone(), self.coeffs.clone());
        let (mut t0, mut t1): (RPoly, RPoly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let t = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        // r0 is a nonzero constant because Phi_n is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        Some(self.field.reduce(t0.into_iter().map(|x| x * &c).collect()))
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}*z^{k}"))
            .collect();
        write!(f, "CycloElem[{}]({})", self.field.n, terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_two_vanishes_at_fourth_root() {
        let k = CycloField::new(4).unwrap();
        let two = LaurentInt::from_terms([(1, 1), (-1, 1)]);
        assert!(k.embed(&two).is_zero());
        let three = LaurentInt::from_terms([(2, 1), (0, 1), (-2, 1)]);
        assert!(!k.embed(&three).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let k = CycloField::new(5).unwrap();
        let a = k.embed(&LaurentInt::from_terms([(1, 2), (0, 1), (-2, 3)]));
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), k.one());
    }
}
