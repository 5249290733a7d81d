//! Truncated arithmetic in the character ring: the denominator, multiplicity
//! extraction, Weyl-Kac and Verma characters, and the identity checks that
//! live on a height box.
//!
//! A series is anchored at a weight `lambda`; the coefficient stored at
//! `gamma` belongs to `e(lambda - gamma)`. Only `gamma` in `Q^+` with
//! `ht(gamma) <= H` is kept.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rootdata::{CartanDatum, RootError, RootVec, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("constant term {0} is not a unit")]
    NonUnitConstantTerm(BigInt),
    #[error("negative multiplicity {value} extracted at {gamma}")]
    NegativeMultiplicity { gamma: RootVec, value: BigInt },
    #[error("negative character coefficient {value} at {gamma}")]
    NegativeCoefficient { gamma: RootVec, value: BigInt },
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A character truncated to the height box `ht(gamma) <= height`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSeries {
    anchor: Weight,
    height: i64,
    coeffs: BTreeMap<RootVec, BigInt>,
}

impl CharSeries {
    pub fn zero(anchor: Weight, height: i64) -> Self {
        CharSeries { anchor, height, coeffs: BTreeMap::new() }
    }

    /// `e(anchor)`.
    pub fn one(anchor: Weight, height: i64) -> Self {
        let rank = anchor.0.len();
        let mut s = Self::zero(anchor, height);
        s.set(RootVec::zero(rank), BigInt::one());
        s
    }

    pub fn anchor(&self) -> &Weight {
        &self.anchor
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn rank(&self) -> usize {
        self.anchor.0.len()
    }

    /// Sets a coefficient; entries outside the box are discarded.
    pub fn set(&mut self, gamma: RootVec, c: BigInt) {
        if gamma.height() > self.height || !gamma.is_nonneg() {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&gamma);
        } else {
            self.coeffs.insert(gamma, c);
        }
    }

    pub fn add_to(&mut self, gamma: RootVec, c: &BigInt) {
        let cur = self.get(&gamma);
        self.set(gamma, cur + c);
    }

    pub fn get(&self, gamma: &RootVec) -> BigInt {
        self.coeffs.get(gamma).cloned().unwrap_or_default()
    }

    /// Nonzero coefficients in output order (height, then coordinates descending).
    pub fn terms(&self) -> Vec<(&RootVec, &BigInt)> {
        let mut v: Vec<_> = self.coeffs.iter().collect();
        v.sort_by(|a, b| a.0.display_cmp(b.0));
        v
    }

    pub fn with_height(&self, height: i64) -> CharSeries {
        let mut out = CharSeries::zero(self.anchor.clone(), height);
        for (g, c) in &self.coeffs {
            out.set(g.clone(), c.clone());
        }
        out
    }

    /// Truncated convolution; the box is the smaller of the two, anchors add.
    pub fn mul(&self, other: &CharSeries) -> CharSeries {
        let height = self.height.min(other.height);
        let anchor = Weight(self.anchor.0.iter().zip(&other.anchor.0).map(|(a, b)| a + b).collect());
        let mut out = CharSeries::zero(anchor, height);
        for (g1, c1) in &self.coeffs {
            let h1 = g1.height();
            if h1 > height {
                continue;
            }
            for (g2, c2) in &other.coeffs {
                if h1 + g2.height() > height {
                    continue;
                }
                out.add_to(g1.add(g2), &(c1 * c2));
            }
        }
        out
    }

    pub fn neg(&self) -> CharSeries {
        CharSeries {
            anchor: self.anchor.clone(),
            height: self.height,
            coeffs: self.coeffs.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }

    /// Truncated multiplicative inverse; the constant term must be `±1`.
    /// The anchor of the inverse is the negated anchor.
    pub fn invert(&self) -> Result<CharSeries, CharError> {
        let rank = self.rank();
        let c0 = self.get(&RootVec::zero(rank));
        if !c0.abs().is_one() {
            return Err(CharError::NonUnitConstantTerm(c0));
        }
        let anchor = Weight(self.anchor.0.iter().map(|a| -a).collect());
        let mut inv = CharSeries::zero(anchor, self.height);
        inv.set(RootVec::zero(rank), c0.clone());
        let mut boxed: Vec<RootVec> = (1..=self.height).flat_map(|h| crate::rootdata::compositions(rank, h)).collect();
        boxed.sort_by_key(|g| g.height());
        for g in boxed {
            // c0 * inv[g] + sum_{0 < d <= g} self[d] inv[g - d] = 0
            let mut acc = BigInt::zero();
            for (d, c) in &self.coeffs {
                if d.is_zero() || !g.dominates(d) {
                    continue;
                }
                acc += c * inv.get(&g.sub(d));
            }
            inv.set(g, -(acc * &c0));
        }
        Ok(inv)
    }

    /// `true` when every coefficient on `window` agrees with `other`.
    pub fn agrees_on<'a>(&self, other: &CharSeries, window: impl IntoIterator<Item = &'a RootVec>) -> Vec<RootVec> {
        window.into_iter().filter(|g| self.get(g) != other.get(g)).cloned().collect()
    }

    /// TSV rows: coordinates then coefficient, in output order, zeros included
    /// across the whole box.
    pub fn to_tsv(&self, datum: &CartanDatum) -> String {
        let mut out = String::new();
        let mut boxed = vec![RootVec::zero(self.rank())];
        boxed.extend(datum.positive_box(self.height));
        for g in boxed {
            out.push_str(&format!("{}\t{}\n", g.tsv(), self.get(&g)));
        }
        out
    }
}

/// Recovers `m_alpha` from `D = invert(dim_series)` by height induction.
pub fn extract_multiplicities(dim_series: &CharSeries) -> Result<BTreeMap<RootVec, u64>, CharError> {
    let rank = dim_series.rank();
    let height = dim_series.height();
    let denom = dim_series.invert()?;
    let mut mults: BTreeMap<RootVec, u64> = BTreeMap::new();
    let mut partial = CharSeries::one(Weight::zero(rank), height);
    for h in 1..=height {
        // remaining = D / prod_{ht alpha < h} (1 - e(-alpha))^{m_alpha}
        //           = 1 - sum_{ht alpha = h} m_alpha e(-alpha) + higher
        let remaining = denom.mul(&partial.invert()?);
        for g in crate::rootdata::compositions(rank, h) {
            let m = -remaining.get(&g);
            if m.is_negative() {
                return Err(CharError::NegativeMultiplicity { gamma: g, value: m });
            }
            if !m.is_zero() {
                let m = m.to_u64().expect("multiplicity fits in u64");
                partial = partial.mul(&one_minus_power(rank, &g, m, height));
                mults.insert(g, m);
            }
        }
    }
    Ok(mults)
}

/// `(1 - e(-alpha))^m` truncated.
fn one_minus_power(rank: usize, alpha: &RootVec, m: u64, height: i64) -> CharSeries {
    let mut s = CharSeries::one(Weight::zero(rank), height);
    let mut binom = BigInt::one();
    for k in 1..=m {
        binom = binom * BigInt::from(m - k + 1) / BigInt::from(k);
        let c = if k % 2 == 1 { -binom.clone() } else { binom.clone() };
        s.set(alpha.scaled(k as i64), c);
    }
    s
}

/// `D = prod (1 - e(-alpha))^{m_alpha}` truncated to `height`.
pub fn denominator(rank: usize, mults: &BTreeMap<RootVec, u64>, height: i64) -> CharSeries {
    mults
        .iter()
        .filter(|(a, _)| a.height() <= height)
        .fold(CharSeries::one(Weight::zero(rank), height), |acc, (a, &m)| {
            acc.mul(&one_minus_power(rank, a, m, height))
        })
}

/// The alternating sum `sum_w sgn(w) e(w o lambda)` truncated, anchored at `lambda`.
pub fn numerator(datum: &CartanDatum, lambda: &Weight, height: i64) -> Result<CharSeries, CharError> {
    let mut s = CharSeries::zero(lambda.clone(), height);
    for (g, sign) in datum.orbit_numerator(lambda, height)? {
        s.set(g, BigInt::from(sign));
    }
    Ok(s)
}

/// `ch V(lambda) = D^{-1} sum_w sgn(w) e(w o lambda)`, anchored at `lambda`.
pub fn weyl_kac(datum: &CartanDatum, lambda: &Weight, denom: &CharSeries) -> Result<CharSeries, CharError> {
    lambda.check_dominant()?;
    let num = numerator(datum, lambda, denom.height())?;
    let ch = num.mul(&denom.invert()?);
    for (g, c) in ch.terms() {
        if c.is_negative() {
            return Err(CharError::NegativeCoefficient { gamma: g.clone(), value: c.clone() });
        }
    }
    Ok(ch)
}

/// `ch M(lambda) = e(lambda) D^{-1}`.
pub fn verma_char(lambda: &Weight, denom: &CharSeries) -> Result<CharSeries, CharError> {
    Ok(CharSeries::one(lambda.clone(), denom.height()).mul(&denom.invert()?))
}

/// Outcome of an identity check restricted to a verification window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub pass: bool,
    /// Window size (number of root-lattice points compared).
    pub window: usize,
    /// Largest height `k` such that the whole sub-box `ht <= k` lies in the window.
    pub full_height: i64,
    pub mismatches: Vec<RootVec>,
}

/// Compares `s_i o D` with `-D`.
///
/// The coefficient of `s_i o D` at `gamma'` comes from `D` at the preimage
/// `gamma = s_i gamma' + alpha_i`. A point is in the window iff that preimage is
/// outside `Q^+` (coefficient known to be 0) or inside the box.
pub fn skew_invariance_check(datum: &CartanDatum, i: usize, denom: &CharSeries) -> WindowReport {
    let rank = datum.rank();
    let height = denom.height();
    let mut boxed = vec![RootVec::zero(rank)];
    boxed.extend(datum.positive_box(height));
    let mut window = 0;
    let mut mismatches = Vec::new();
    let mut full_height = height;
    for g in &boxed {
        let pre = datum.dot_reflect_offset(i, g);
        let known = !pre.is_nonneg() || pre.height() <= height;
        if !known {
            full_height = full_height.min(g.height() - 1);
            continue;
        }
        window += 1;
        let transformed = if pre.is_nonneg() { denom.get(&pre) } else { BigInt::zero() };
        if transformed != -denom.get(g) {
            mismatches.push(g.clone());
        }
    }
    WindowReport { pass: mismatches.is_empty(), window, full_height, mismatches }
}

/// `(sum_w sgn(w) e(w o 0)) * dim_series == 1` on the box. The truncated
/// product is exact on the whole box because both factors only contribute
/// terms of height at most the target height.
pub fn denominator_identity_check(datum: &CartanDatum, dim_series: &CharSeries) -> Result<WindowReport, CharError> {
    let rank = datum.rank();
    let height = dim_series.height();
    let num = numerator(datum, &Weight::zero(rank), height)?;
    let prod = num.mul(dim_series);
    let one = CharSeries::one(Weight::zero(rank), height);
    let mut boxed = vec![RootVec::zero(rank)];
    boxed.extend(datum.positive_box(height));
    let mismatches = prod.agrees_on(&one, &boxed);
    Ok(WindowReport { pass: mismatches.is_empty(), window: boxed.len(), full_height: height, mismatches })
}

/// `coefficient(mu) == coefficient(s_i mu)` for every weight in the box whose
/// reflection stays in the box. Returns the mismatching offsets.
pub fn weyl_symmetry_mismatches(datum: &CartanDatum, ch: &CharSeries) -> Vec<RootVec> {
    let rank = datum.rank();
    let lambda = ch.anchor().clone();
    let mut boxed = vec![RootVec::zero(rank)];
    boxed.extend(datum.positive_box(ch.height()));
    let mut bad = Vec::new();
    for g in &boxed {
        let mu = datum.weight_minus(&lambda, g);
        for i in 0..rank {
            // s_i mu = mu - <mu, h_i> alpha_i, so the offset gains <mu, h_i> alpha_i
            let img = g.plus_simple(i, mu.0[i]);
            if img.is_nonneg() && img.height() <= ch.height() && ch.get(g) != ch.get(&img) {
                bad.push(g.clone());
            }
        }
    }
    bad
}
