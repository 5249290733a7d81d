//! Exact arithmetic in `Z[q, q^-1]` and `Q(q)`: quantum integers, cyclotomic
//! polynomials, unit certification and specialization.

mod cyclofield;
mod fp;
mod laurent;
mod ratq;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub use cyclofield::{CycloElem, CycloField};
pub use fp::{FpLaurent, FpRat};
pub use laurent::LaurentInt;
pub use ratq::RatQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("negative argument {0} to a quantum integer")]
    NegativeArgument(i64),
    #[error("cyclotomic index must be positive")]
    ZeroCyclotomicIndex,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not a unit of Z[q, q^-1, (q^n - 1)^-1]: residual factor {residual}")]
    NotAUnit { residual: String },
    #[error("the zero element has no unit certificate")]
    ZeroNotUnit,
    #[error("denominator vanishes at q = {z}")]
    PoleAtZ { z: String },
    #[error("specialization at q = 0 is not allowed")]
    ZeroSpecialization,
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`.
pub fn q_integer(n: i64, d: i64) -> Result<LaurentInt, QError> {
    if n < 0 {
        return Err(QError::NegativeArgument(n));
    }
    assert!(d >= 1, "q-integer base exponent must be positive");
    Ok(LaurentInt::from_terms((0..n).map(|k| (d * (n - 1 - 2 * k), 1))))
}

/// `[n]!_{q^d}`.
pub fn q_factorial(n: i64, d: i64) -> Result<LaurentInt, QError> {
    if n < 0 {
        return Err(QError::NegativeArgument(n));
    }
    let mut acc = LaurentInt::one();
    for k in 1..=n {
        acc = &acc * &q_integer(k, d)?;
    }
    Ok(acc)
}

/// Gaussian binomial `[n choose k]_{q^d}` (zero when `k > n`).
pub fn q_binomial(n: i64, k: i64, d: i64) -> Result<LaurentInt, QError> {
    if n < 0 || k < 0 {
        return Err(QError::NegativeArgument(n.min(k)));
    }
    if k > n {
        return Ok(LaurentInt::zero());
    }
    let num = q_factorial(n, d)?;
    let den = &q_factorial(k, d)? * &q_factorial(n - k, d)?;
    Ok(num.div_exact(&den).expect("Gaussian binomials are Laurent polynomials"))
}

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, LaurentInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, LaurentInt>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `n`-th cyclotomic polynomial `Phi_n(q)`.
pub fn cyclotomic(n: u64) -> Result<LaurentInt, QError> {
    if n == 0 {
        return Err(QError::ZeroCyclotomicIndex);
    }
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return Ok(p.clone());
    }
    // Phi_n = prod_{d | n} (q^d - 1)^{mu(n/d)}
    let mut num = LaurentInt::one();
    let mut den = LaurentInt::one();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let f = LaurentInt::from_terms([(d as i64, 1), (0, -1)]);
        match mobius(n / d) {
            1 => num = &num * &f,
            -1 => den = &den * &f,
            _ => {}
        }
    }
    let phi = num.div_exact(&den).expect("Moebius product is exact");
    cyclotomic_cache().lock().unwrap().insert(n, phi.clone());
    Ok(phi)
}

/// Euler totients of `0..=limit`.
fn totients(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for p in 2..=limit {
        if phi[p] == p as u64 {
            for m in (p..=limit).step_by(p) {
                phi[m] -= phi[m] / p as u64;
            }
        }
    }
    phi
}

/// `±q^a * prod Phi_n^{e_n}`: a certified unit of `Z[q, q^-1, (q^n - 1)^-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnitCertificate {
    pub sign: i8,
    pub q_power: i64,
    /// `(n, e_n)` with `e_n != 0`, ascending in `n`.
    pub factors: Vec<(u64, i64)>,
}

impl UnitCertificate {
    pub fn reconstruct(&self) -> RatQ {
        let mut num = LaurentInt::monomial(self.sign as i64, self.q_power);
        let mut den = LaurentInt::one();
        for &(n, e) in &self.factors {
            let phi = cyclotomic(n).expect("certificate indices are positive");
            let p = phi.pow(e.unsigned_abs() as u32);
            if e > 0 {
                num = &num * &p;
            } else {
                den = &den * &p;
            }
        }
        RatQ::new(num, den).expect("cyclotomic products are nonzero")
    }

    pub fn exponent_of(&self, n: u64) -> i64 {
        self.factors.iter().find(|f| f.0 == n).map_or(0, |f| f.1)
    }

    /// Certificate of a product: exponents add.
    pub fn compose(&self, other: &UnitCertificate) -> UnitCertificate {
        let mut exps: std::collections::BTreeMap<u64, i64> = self.factors.iter().copied().collect();
        for &(n, e) in &other.factors {
            *exps.entry(n).or_default() += e;
        }
        UnitCertificate {
            sign: self.sign * other.sign,
            q_power: self.q_power + other.q_power,
            factors: exps.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    /// `n^e` pairs separated by commas, `-` when empty.
    pub fn factor_list(&self) -> String {
        if self.factors.is_empty() {
            return "-".to_string();
        }
        self.factors
            .iter()
            .map(|(n, e)| format!("{n}^{e}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for UnitCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}q^{}", if self.sign < 0 { "-" } else { "" }, self.q_power)?;
        for (n, e) in &self.factors {
            write!(f, " Phi{n}^{e}")?;
        }
        Ok(())
    }
}

/// Strips every cyclotomic factor from `p` (polynomial with nonzero constant
/// term). Returns the residue and the exponents found.
fn strip_cyclotomics(mut p: LaurentInt, candidates: &[u64], exps: &mut HashMap<u64, i64>, sign: i64) -> LaurentInt {
    for &n in candidates {
        if p.span() == 0 {
            break;
        }
        let phi = cyclotomic(n).unwrap();
        if phi.span() > p.span() {
            continue;
        }
        while let Some(q) = p.div_exact(&phi) {
            p = q;
            *exps.entry(n).or_default() += sign;
        }
    }
    p
}

/// Certifies `f` as `±q^a * prod Phi_n^{e_n}`.
///
/// The q-power is stripped, then numerator and denominator are trial-divided
/// by every `Phi_n` with `phi(n)` at most the combined degree. A residue other
/// than `±1` is a `NotAUnit` error.
pub fn certify_unit(f: &RatQ) -> Result<UnitCertificate, QError> {
    if f.is_zero() {
        return Err(QError::ZeroNotUnit);
    }
    let num = f.numerator();
    let den = f.denominator();
    let q_power = num.min_exp() - den.min_exp();
    let bound = num.span() + den.span();
    let candidates: Vec<u64> = if bound == 0 {
        Vec::new()
    } else {
        // phi(n) >= sqrt(n/2), so no n beyond 2*bound^2 can qualify
        let limit = 2 * bound * bound + 2;
        let phi = totients(limit);
        (1..=limit).filter(|&n| phi[n] as usize <= bound).map(|n| n as u64).collect()
    };
    let mut exps = HashMap::new();
    let num_res = strip_cyclotomics(num.shift(-num.min_exp()), &candidates, &mut exps, 1);
    let den_res = strip_cyclotomics(den.shift(-den.min_exp()), &candidates, &mut exps, -1);
    let unit = |p: &LaurentInt| p.span() == 0 && p.leading_coeff().abs().is_one();
    if !unit(&num_res) || !unit(&den_res) {
        let residual = RatQ::new(num_res, den_res).expect("nonzero residual denominator");
        return Err(QError::NotAUnit { residual: residual.to_string() });
    }
    let sign = if num_res.leading_coeff().is_negative() != den_res.leading_coeff().is_negative() {
        -1
    } else {
        1
    };
    let mut factors: Vec<(u64, i64)> = exps.into_iter().filter(|&(_, e)| e != 0).collect();
    factors.sort_unstable();
    Ok(UnitCertificate { sign, q_power, factors })
}

/// Result of a specialization `q -> z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialized {
    pub value: BigRational,
    /// `z` is `±1`, a root of unity, where the pairing may degenerate.
    pub root_of_unity: bool,
}

/// The only rational roots of unity are `1` and `-1`.
pub fn is_root_of_unity(z: &BigRational) -> bool {
    z.abs().is_one()
}

/// Exact evaluation of `f` at `q = z`.
pub fn specialize(f: &RatQ, z: &BigRational) -> Result<Specialized, QError> {
    let value = f.eval(z)?;
    Ok(Specialized { value, root_of_unity: is_root_of_unity(z) })
}

/// Image of `f` in `F_p(t)` under `q -> t`.
pub fn specialize_function_field(f: &RatQ, p: u64) -> Result<FpRat, QError> {
    FpRat::from_ratq(f, p)
}

/// Parses `a`, `-a`, or `a/b` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}
