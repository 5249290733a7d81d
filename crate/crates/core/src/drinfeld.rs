//! The Drinfeld pairing between the positive and negative halves, its
//! determinants with cyclotomic certificates, and radicals at specializations.
//!
//! Every value `tau(x, y)` on words of content `gamma` has the shape
//! `(-1)^ht(gamma) / N_gamma * P(x, y)` with `N_gamma = prod_i (q_i - q_i^-1)^{n_i}`
//! and `P` a Laurent polynomial, so all heavy work is done on `P`.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::borel::{Borel, BorelError, WordComb};
use crate::linalg::{bareiss_det, bareiss_rank, kernel, rank, rational_one, FieldElem};
use crate::qarith::{
    certify_unit, is_root_of_unity, CycloField, FpLaurent, LaurentInt, QError, RatQ, UnitCertificate,
};
use crate::rootdata::{CartanDatum, RootVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrinfeldError {
    #[error(transparent)]
    Borel(#[from] BorelError),
    #[error(transparent)]
    Arith(#[from] QError),
    #[error("determinant at {gamma} is not a unit: residual {residual}")]
    NotAUnit { gamma: RootVec, residual: String },
    #[error("determinant at {gamma} vanishes identically")]
    Degenerate { gamma: RootVec },
}

/// Which end of the `f`-word is peeled off in the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strip {
    /// `tau(x, f_i y') = -(q_i - q_i^-1)^-1 tau(r'_{i,+}(x), y')`.
    Left,
    /// `tau(x, y' f_i) = -(q_i - q_i^-1)^-1 tau(r_{i,+}(x), y')`.
    Right,
}

/// Basis words with a matrix indexed by them.
pub type WordMatrix = (Vec<Vec<u8>>, Vec<Vec<LaurentInt>>);

/// Memoized `P(x, y)` on single words.
pub struct RawPairing<'a> {
    datum: &'a CartanDatum,
    strip: Strip,
    memo: HashMap<(Vec<u8>, Vec<u8>), LaurentInt>,
}

impl<'a> RawPairing<'a> {
    pub fn new(datum: &'a CartanDatum, strip: Strip) -> Self {
        RawPairing { datum, strip, memo: HashMap::new() }
    }

    pub fn word(&mut self, x: &[u8], y: &[u8]) -> LaurentInt {
        if x.len() != y.len() {
            return LaurentInt::zero();
        }
        if y.is_empty() {
            return LaurentInt::one();
        }
        let key = (x.to_vec(), y.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut acc = LaurentInt::zero();
        match self.strip {
            Strip::Left => {
                let i = y[0];
                let mut head = 0i64;
                for p in 0..x.len() {
                    if x[p] == i {
                        let rest = [&x[..p], &x[p + 1..]].concat();
                        let v = self.word(&rest, &y[1..]);
                        if !v.is_zero() {
                            acc += &v.shift(head);
                        }
                    }
                    head += self.datum.simple_form(i as usize, x[p] as usize);
                }
            }
            Strip::Right => {
                let i = *y.last().unwrap();
                let mut tail = 0i64;
                for p in (0..x.len()).rev() {
                    if x[p] == i {
                        let rest = [&x[..p], &x[p + 1..]].concat();
                        let v = self.word(&rest, &y[..y.len() - 1]);
                        if !v.is_zero() {
                            acc += &v.shift(tail);
                        }
                    }
                    tail += self.datum.simple_form(i as usize, x[p] as usize);
                }
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// Bilinear extension to combinations of words.
    pub fn comb(&mut self, x: &WordComb, y: &WordComb) -> LaurentInt {
        let mut acc = LaurentInt::zero();
        for (w, a) in x.terms() {
            for (v, b) in y.terms() {
                let p = self.word(w, v);
                if !p.is_zero() {
                    acc += &(&(a * b) * &p);
                }
            }
        }
        acc
    }
}

/// `N_gamma = prod_i (q^{d_i} - q^{-d_i})^{n_i}`.
pub fn normalizer(datum: &CartanDatum, gamma: &RootVec) -> LaurentInt {
    let mut acc = LaurentInt::one();
    for (i, &n) in gamma.0.iter().enumerate() {
        let d = datum.sym[i];
        let f = LaurentInt::from_terms([(d, 1), (-d, -1)]);
        acc = &acc * &f.pow(n.max(0) as u32);
    }
    acc
}

/// `(-1)^ht / N_gamma`, the factor turning `P` into `tau`.
pub fn scale_factor(datum: &CartanDatum, gamma: &RootVec) -> RatQ {
    let sign = if gamma.height() % 2 == 0 { 1 } else { -1 };
    RatQ::new(LaurentInt::constant(sign), normalizer(datum, gamma)).expect("normalizer is nonzero")
}

fn word_content_of(datum: &CartanDatum, w: &[u8]) -> RootVec {
    crate::borel::word_content(w, datum.rank())
}

/// `tau(x, y)` on combinations of `e`-words and `f`-words. Zero unless the
/// contents agree.
pub fn pairing_value(datum: &CartanDatum, x: &WordComb, y: &WordComb) -> RatQ {
    let mut by_content: HashMap<RootVec, (WordComb, WordComb)> = HashMap::new();
    for (w, c) in x.terms() {
        by_content.entry(word_content_of(datum, w)).or_default().0.add_term(w.clone(), c.clone());
    }
    for (w, c) in y.terms() {
        by_content.entry(word_content_of(datum, w)).or_default().1.add_term(w.clone(), c.clone());
    }
    let mut raw = RawPairing::new(datum, Strip::Left);
    let mut acc = RatQ::zero();
    for (gamma, (xs, ys)) in by_content {
        let p = raw.comb(&xs, &ys);
        if !p.is_zero() {
            acc = &acc + &(&RatQ::from(p) * &scale_factor(datum, &gamma));
        }
    }
    acc
}

/// The pairing on one graded piece in the chosen word bases.
#[derive(Clone, Debug)]
pub struct PairingData {
    pub gamma: RootVec,
    /// Basis word labels (shared by both halves).
    pub words: Vec<Vec<u8>>,
    /// `P[r][s]`, so that `matrix = (-1)^ht / N_gamma * P`.
    pub normalized: Vec<Vec<LaurentInt>>,
    pub matrix: Vec<Vec<RatQ>>,
    pub normalized_det: LaurentInt,
    pub det: RatQ,
    pub certificate: UnitCertificate,
}

impl PairingData {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// One TSV line: coordinates, dim, sign, q-power, factor list.
    pub fn certificate_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.gamma.tsv(),
            self.dim(),
            self.certificate.sign,
            self.certificate.q_power,
            self.certificate.factor_list()
        )
    }
}

/// Where a radical is computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecPoint {
    Rational(BigRational),
    /// `q -> t` in `F_p(t)`.
    FunctionField(u64),
    /// `q -> zeta_n`.
    RootOfUnity(u64),
}

impl std::fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecPoint::Rational(z) => write!(f, "{z}"),
            SpecPoint::FunctionField(p) => write!(f, "F{p}(t)"),
            SpecPoint::RootOfUnity(n) => write!(f, "zeta{n}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RadicalReport {
    pub gamma: RootVec,
    pub at: String,
    pub dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Kernel vectors in basis coordinates; only for rational points.
    #[serde(skip)]
    pub kernel_basis: Option<Vec<Vec<BigRational>>>,
    /// Set when the point is a root of unity, outside the non-degeneracy hypothesis.
    pub root_of_unity: bool,
}

/// The pairing engine over a shared [`Borel`].
pub struct Drinfeld {
    borel: Arc<Borel>,
}

impl Drinfeld {
    pub fn new(borel: Arc<Borel>) -> Self {
        Drinfeld { borel }
    }

    pub fn borel(&self) -> &Borel {
        &self.borel
    }

    pub fn datum(&self) -> &CartanDatum {
        self.borel.datum()
    }

    /// `P` on the basis words of `gamma`, computed with the given strip.
    pub fn normalized_matrix(&self, gamma: &RootVec, strip: Strip) -> Result<WordMatrix, DrinfeldError> {
        if !gamma.is_nonneg() {
            return Ok((Vec::new(), Vec::new()));
        }
        let basis = self.borel.component_basis(gamma)?;
        let words: Vec<Vec<u8>> = basis.basis_words.iter().map(|w| w.letters().to_vec()).collect();
        let mut raw = RawPairing::new(self.datum(), strip);
        let m = words.iter().map(|x| words.iter().map(|y| raw.word(x, y)).collect()).collect();
        Ok((words, m))
    }

    /// Matrix, determinant and certificate for `gamma`. Contents outside `Q^+`
    /// give the empty matrix with determinant 1.
    pub fn pairing_matrix(&self, gamma: &RootVec) -> Result<PairingData, DrinfeldError> {
        let datum = self.datum();
        let (words, normalized) = self.normalized_matrix(gamma, Strip::Left)?;
        let dim = words.len();
        let scale = if gamma.is_nonneg() { scale_factor(datum, gamma) } else { RatQ::one() };
        let matrix: Vec<Vec<RatQ>> = normalized
            .iter()
            .map(|row| row.iter().map(|p| &RatQ::from(p.clone()) * &scale).collect())
            .collect();
        let normalized_det = bareiss_det(normalized.clone(), LaurentInt::one());
        if normalized_det.is_zero() {
            return Err(DrinfeldError::Degenerate { gamma: gamma.clone() });
        }
        let det = &RatQ::from(normalized_det.clone()) * &scale.pow(dim as i32);
        let certificate = certify_unit(&det).map_err(|e| match e {
            QError::NotAUnit { residual } => DrinfeldError::NotAUnit { gamma: gamma.clone(), residual },
            other => DrinfeldError::Arith(other),
        })?;
        Ok(PairingData { gamma: gamma.clone(), words, normalized, matrix, normalized_det, det, certificate })
    }

    /// Radical of the specialized pairing on `gamma`.
    pub fn radical_at(&self, gamma: &RootVec, at: &SpecPoint) -> Result<RadicalReport, DrinfeldError> {
        let (words, p) = self.normalized_matrix(gamma, Strip::Left)?;
        let dim = words.len();
        let (rk, kernel_basis, root_of_unity) = match at {
            SpecPoint::Rational(z) => {
                if z.is_zero() {
                    return Err(QError::ZeroSpecialization.into());
                }
                let m: Vec<Vec<BigRational>> = p.iter().map(|row| row.iter().map(|x| x.eval(z)).collect()).collect();
                let ker = kernel(&m, dim, &rational_one());
                (dim - ker.len(), Some(ker), is_root_of_unity(z))
            }
            SpecPoint::FunctionField(prime) => {
                let m: Vec<Vec<FpLaurent>> = p
                    .iter()
                    .map(|row| row.iter().map(|x| FpLaurent::from_laurent(x, *prime)).collect::<Result<_, _>>())
                    .collect::<Result<_, _>>()?;
                let one = FpLaurent::one(*prime);
                (bareiss_rank(m, one), None, false)
            }
            SpecPoint::RootOfUnity(n) => {
                let field = CycloField::new(*n)?;
                let m: Vec<Vec<_>> = p.iter().map(|row| row.iter().map(|x| field.embed(x)).collect()).collect();
                (rank(&m), None, true)
            }
        };
        Ok(RadicalReport {
            gamma: gamma.clone(),
            at: at.to_string(),
            dim,
            rank: rk,
            kernel_dim: dim - rk,
            kernel_basis,
            root_of_unity,
        })
    }

    /// The non-degeneracy sweep over the height box, aggregating every failure.
    pub fn verify_nondegenerate(&self, height: i64, points: &[SpecPoint]) -> NondegeneracyReport {
        let boxed = self.datum().positive_box(height);
        let rows: Vec<NondegRow> = boxed
            .par_iter()
            .map(|g| {
                let (dim, certificate) = match self.pairing_matrix(g) {
                    Ok(pd) => (pd.dim(), Ok(pd.certificate_tsv())),
                    Err(e) => (self.borel.component_basis(g).map(|b| b.dim()).unwrap_or(0), Err(e.to_string())),
                };
                let radicals = points
                    .iter()
                    .map(|z| {
                        let skip = matches!(z, SpecPoint::Rational(r) if is_root_of_unity(r))
                            || matches!(z, SpecPoint::RootOfUnity(_));
                        let outcome = if skip {
                            RadicalOutcome::Skipped
                        } else {
                            match self.radical_at(g, z) {
                                Ok(r) => RadicalOutcome::KernelDim(r.kernel_dim),
                                Err(e) => RadicalOutcome::Error(e.to_string()),
                            }
                        };
                        (z.to_string(), outcome)
                    })
                    .collect();
                NondegRow { gamma: g.clone(), dim, certificate, radicals }
            })
            .collect();
        let warnings = points
            .iter()
            .filter(|z| matches!(z, SpecPoint::Rational(r) if is_root_of_unity(r)) || matches!(z, SpecPoint::RootOfUnity(_)))
            .map(|z| format!("z = {z} is a root of unity; radical check skipped"))
            .collect();
        NondegeneracyReport { height, rows, warnings }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RadicalOutcome {
    KernelDim(usize),
    Skipped,
    Error(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegRow {
    pub gamma: RootVec,
    pub dim: usize,
    /// Certificate TSV line, or the failure.
    pub certificate: Result<String, String>,
    pub radicals: Vec<(String, RadicalOutcome)>,
}

impl NondegRow {
    pub fn pass(&self) -> bool {
        self.certificate.is_ok()
            && self.radicals.iter().all(|(_, o)| matches!(o, RadicalOutcome::KernelDim(0) | RadicalOutcome::Skipped))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegeneracyReport {
    pub height: i64,
    pub rows: Vec<NondegRow>,
    pub warnings: Vec<String>,
}

impl NondegeneracyReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(NondegRow::pass)
    }

    pub fn failures(&self) -> Vec<&NondegRow> {
        self.rows.iter().filter(|r| !r.pass()).collect()
    }
}

/// Which end carries the `e_i^n`, `f_i^n` factors in [`twisted_kernel_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `tau(x e_i^n, y f_i^n)` with `x, y` in the kernels of `r_{i,+}`, `r'_{i,-}`.
    Right,
    /// `tau(e_i^n x, f_i^n y)` with `x, y` in the kernels of `r'_{i,+}`, `r_{i,-}`.
    Left,
}

/// One `(i, gamma, side)` instance of the divided-power factorization.
#[derive(Clone, Debug, Serialize)]
pub struct TwistRow {
    pub i: usize,
    pub gamma: RootVec,
    pub side: Side,
    pub kernel_dims: (usize, usize),
    /// The pairing annihilator agrees with the kernel of the skew derivation.
    pub kernel_matches: bool,
    /// Number of `(x, y, n)` triples compared.
    pub instances: usize,
    pub pass: bool,
}

/// Kernel of the pairing against words with `i` attached on `side`: the
/// positive half when `positive`, else the negative half.
fn twisted_kernel(
    raw: &mut RawPairing<'_>,
    own: &[Vec<u8>],
    other: &[Vec<u8>],
    i: u8,
    side: Side,
    positive: bool,
) -> Vec<Vec<RatQ>> {
    let attach = |w: &[u8]| match side {
        Side::Right => [w, &[i]].concat(),
        Side::Left => [&[i][..], w].concat(),
    };
    let m: Vec<Vec<RatQ>> = other
        .iter()
        .map(|o| {
            let o = attach(o);
            own.iter()
                .map(|w| RatQ::from(if positive { raw.word(w, &o) } else { raw.word(&o, w) }))
                .collect()
        })
        .collect();
    kernel(&m, own.len(), &RatQ::one())
}

/// Checks `tau(x e_i^n, y f_i^n) = tau(x, y) q_i^{n(n-1)/2} (q_i^-1 - q_i)^-n [n]!_{q_i}`
/// for `x`, `y` in the subalgebras cut out by `r_{i,+}` and `r'_{i,-}`, and the mirror
/// identity on the left for `r'_{i,+}`, `r_{i,-}`. The positive kernels are computed
/// twice, as pairing annihilators and as kernels of the skew derivations.
pub fn twisted_kernel_check(drinfeld: &Drinfeld, height: i64) -> Result<Vec<TwistRow>, DrinfeldError> {
    let d = drinfeld.datum();
    let borel = drinfeld.borel();
    let mut raw = RawPairing::new(d, Strip::Left);
    let mut rows = Vec::new();
    for gamma in std::iter::once(RootVec::zero(d.rank())).chain(d.positive_box(height - 1)) {
        let own = borel.component_basis(&gamma)?;
        let own_words: Vec<Vec<u8>> = own.basis_words.iter().map(|w| w.letters().to_vec()).collect();
        for i in 0..d.rank() {
            let lower = gamma.plus_simple(i, -1);
            let other_words: Vec<Vec<u8>> = if lower.is_nonneg() {
                borel.component_basis(&lower)?.basis_words.iter().map(|w| w.letters().to_vec()).collect()
            } else {
                Vec::new()
            };
            for side in [Side::Right, Side::Left] {
                let xs = twisted_kernel(&mut raw, &own_words, &other_words, i as u8, side, true);
                let ys = twisted_kernel(&mut raw, &own_words, &other_words, i as u8, side, false);

                let deriv: Vec<Vec<RatQ>> = if other_words.is_empty() {
                    Vec::new()
                } else {
                    let lb = borel.component_basis(&lower)?;
                    let cols: Vec<Vec<RatQ>> = own_words
                        .iter()
                        .map(|w| {
                            let r = match side {
                                Side::Right => crate::borel::r_plus_word(d, i, w),
                                Side::Left => crate::borel::r_prime_plus_word(d, i, w),
                            };
                            lb.reduce_comb(&r)
                        })
                        .collect();
                    (0..lb.dim()).map(|t| cols.iter().map(|c| c[t].clone()).collect()).collect()
                };
                let from_deriv = kernel(&deriv, own_words.len(), &RatQ::one());
                let stacked: Vec<Vec<RatQ>> = xs.iter().chain(&from_deriv).cloned().collect();
                let kernel_matches = xs.len() == from_deriv.len() && rank(&stacked) == xs.len();

                let xc: Vec<WordComb> = xs.iter().map(|v| comb_from(&own_words, &clear_denominators(v))).collect();
                let yc: Vec<WordComb> = ys.iter().map(|v| comb_from(&own_words, &clear_denominators(v))).collect();
                let mut pass = kernel_matches;
                let mut instances = 0;
                for n in 1..=(height - gamma.height()) {
                    let power = vec![i as u8; n as usize];
                    let extend = |c: &WordComb| match side {
                        Side::Right => c.sandwich(&[], &power),
                        Side::Left => c.sandwich(&power, &[]),
                    };
                    let big = gamma.plus_simple(i, n);
                    let factor = divided_power_pairing(d, i, n);
                    for x in &xc {
                        for y in &yc {
                            let base = &RatQ::from(raw.comb(x, y)) * &scale_factor(d, &gamma);
                            let lhs = &RatQ::from(raw.comb(&extend(x), &extend(y))) * &scale_factor(d, &big);
                            pass &= lhs == &base * &factor;
                            instances += 1;
                        }
                    }
                }
                rows.push(TwistRow {
                    i,
                    gamma: gamma.clone(),
                    side,
                    kernel_dims: (xs.len(), ys.len()),
                    kernel_matches,
                    instances,
                    pass,
                });
            }
        }
    }
    Ok(rows)
}

/// `q_i^{n(n-1)/2} (q_i^-1 - q_i)^-n [n]!_{q_i}`.
pub fn divided_power_pairing(datum: &CartanDatum, i: usize, n: i64) -> RatQ {
    let d = datum.sym[i];
    let num = &LaurentInt::q_pow(d * n * (n - 1) / 2) * &crate::qarith::q_factorial(n, d).expect("n >= 0");
    let den = LaurentInt::from_terms([(-d, 1), (d, -1)]).pow(n as u32);
    RatQ::new(num, den).expect("nonzero")
}

/// Integer combination `sum c_k w_k` from coefficients over words.
pub fn comb_from(words: &[Vec<u8>], coeffs: &[LaurentInt]) -> WordComb {
    let mut out = WordComb::new();
    for (w, c) in words.iter().zip(coeffs) {
        out.add_term(w.clone(), c.clone());
    }
    out
}

/// Clears denominators of a `RatQ` vector, returning Laurent-integer entries
/// spanning the same line.
pub fn clear_denominators(v: &[RatQ]) -> Vec<LaurentInt> {
    let mut den = LaurentInt::one();
    for x in v {
        let d = x.denominator();
        let g = den.gcd(d);
        den = &den * &d.div_exact(&g).expect("gcd divides");
    }
    v.iter()
        .map(|x| (x.numerator() * &den).div_exact(x.denominator()).expect("common denominator"))
        .collect()
}

/// Exact determinant of a `RatQ` matrix through `linalg`, used by tests.
pub fn ratq_det(m: &[Vec<RatQ>]) -> RatQ {
    let n = m.len();
    let mut work = m.to_vec();
    let mut det = RatQ::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !work[r][c].is_zero_elem()) else {
            return RatQ::zero();
        };
        if p != c {
            work.swap(p, c);
            det = -&det;
        }
        det = &det * &work[c][c];
        let inv = work[c][c].inv().expect("nonzero");
        for r in c + 1..n {
            if work[r][c].is_zero() {
                continue;
            }
            let f = &work[r][c] * &inv;
            for k in c..n {
                let v = &work[r][k] - &(&f * &work[c][k]);
                work[r][k] = v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borel::{r_plus, serre_element_integral, words_of_content};

    fn setup(name: &str, h: i64) -> Drinfeld {
        let d = Arc::new(CartanDatum::preset(name).unwrap());
        Drinfeld::new(Arc::new(Borel::new(d, h)))
    }

    fn rv(v: &[i64]) -> RootVec {
        RootVec(v.to_vec())
    }

    fn lp(t: &[(i64, i64)]) -> LaurentInt {
        LaurentInt::from_terms(t.iter().copied())
    }

    fn c(d: i64) -> RatQ {
        // -(q^d - q^-d)^-1
        RatQ::new(LaurentInt::constant(-1), lp(&[(d, 1), (-d, -1)])).unwrap()
    }

    #[test]
    fn twisted_kernels() {
        for (name, h) in [("A1", 4), ("A2", 4), ("B2", 4), ("G2", 4), ("A1~", 3)] {
            let rows = twisted_kernel_check(&setup(name, h), h).unwrap();
            assert!(rows.iter().all(|r| r.pass), "{name}");
            assert!(rows.iter().map(|r| r.instances).sum::<usize>() > 0);
        }
        // A2 at alpha_1 + alpha_2: a one-dimensional kernel on each side
        let rows = twisted_kernel_check(&setup("A2", 3), 3).unwrap();
        let r = rows.iter().find(|r| r.gamma == rv(&[1, 1]) && r.i == 0 && r.side == Side::Right).unwrap();
        assert_eq!(r.kernel_dims, (1, 1));
    }

    #[test]
    fn generator_pairing() {
        let d = CartanDatum::preset("B2").unwrap();
        assert_eq!(pairing_value(&d, &WordComb::word(&[0]), &WordComb::word(&[0])), c(2));
        assert_eq!(pairing_value(&d, &WordComb::word(&[1]), &WordComb::word(&[1])), c(1));
        assert!(pairing_value(&d, &WordComb::word(&[0]), &WordComb::word(&[1])).is_zero());
        assert_eq!(pairing_value(&d, &WordComb::word(&[]), &WordComb::word(&[])), RatQ::one());
    }

    #[test]
    fn a1_square() {
        let d = CartanDatum::preset("A1").unwrap();
        let v = pairing_value(&d, &WordComb::word(&[0, 0]), &WordComb::word(&[0, 0]));
        let expected = RatQ::new(&LaurentInt::q_pow(1) * &lp(&[(1, 1), (-1, 1)]), lp(&[(-1, 1), (1, -1)]).pow(2)).unwrap();
        assert_eq!(v, expected);
    }

    #[test]
    fn a2_pairs() {
        let d = CartanDatum::preset("A2").unwrap();
        let c2 = &c(1) * &c(1);
        let e12 = WordComb::word(&[0, 1]);
        let e21 = WordComb::word(&[1, 0]);
        let f12 = WordComb::word(&[0, 1]);
        assert_eq!(pairing_value(&d, &e12, &f12), c2);
        assert_eq!(pairing_value(&d, &e21, &f12), &RatQ::from(LaurentInt::q_pow(-1)) * &c2);
    }

    #[test]
    fn a1_matrix_and_certificate() {
        let dr = setup("A1", 3);
        let pd = dr.pairing_matrix(&rv(&[1])).unwrap();
        assert_eq!(pd.matrix, vec![vec![c(1)]]);
        assert_eq!(pd.certificate, UnitCertificate { sign: -1, q_power: 1, factors: vec![(1, -1), (2, -1)] });
        assert_eq!(pd.certificate.reconstruct(), pd.det);
    }

    #[test]
    fn a2_determinant() {
        let dr = setup("A2", 3);
        let pd = dr.pairing_matrix(&rv(&[1, 1])).unwrap();
        let expected = RatQ::new(LaurentInt::q_pow(-1), lp(&[(1, 1), (-1, -1)]).pow(3)).unwrap();
        assert_eq!(pd.det, expected);
        assert_eq!(ratq_det(&pd.matrix), pd.det);
    }

    #[test]
    fn empty_and_negative_content() {
        let dr = setup("A2", 3);
        let pd = dr.pairing_matrix(&rv(&[-1, 1])).unwrap();
        assert_eq!(pd.dim(), 0);
        assert_eq!(pd.det, RatQ::one());
        let pd0 = dr.pairing_matrix(&rv(&[0, 0])).unwrap();
        assert_eq!(pd0.dim(), 1);
        assert_eq!(pd0.det, RatQ::one());
    }

    #[test]
    fn radicals() {
        let dr = setup("A1", 3);
        let two = SpecPoint::Rational(BigRational::from_integer(2.into()));
        let r = dr.radical_at(&rv(&[1]), &two).unwrap();
        assert_eq!((r.rank, r.kernel_dim), (1, 0));
        let r = dr.radical_at(&rv(&[2]), &SpecPoint::RootOfUnity(4)).unwrap();
        assert_eq!(r.kernel_dim, 1);
        let pd = dr.pairing_matrix(&rv(&[2])).unwrap();
        assert_eq!(pd.certificate.exponent_of(4), 1);
        let dr2 = setup("A2", 3);
        let r = dr2.radical_at(&rv(&[1, 1]), &two).unwrap();
        assert_eq!((r.rank, r.kernel_dim), (2, 0));
        assert!(dr.radical_at(&rv(&[1]), &SpecPoint::Rational(BigRational::zero())).is_err());
    }

    #[test]
    fn nondegenerate_sweeps() {
        let zs = [SpecPoint::Rational(BigRational::from_integer(2.into())), SpecPoint::Rational(BigRational::new(1.into(), 3.into()))];
        assert!(setup("A2", 4).verify_nondegenerate(4, &zs).pass());
        assert!(setup("A1~", 4).verify_nondegenerate(4, &zs).pass());
        let minus_one = [SpecPoint::Rational(BigRational::from_integer((-1).into()))];
        let rep = setup("A1", 2).verify_nondegenerate(2, &minus_one);
        assert!(rep.pass());
        assert_eq!(rep.warnings.len(), 1);
        assert!(rep.rows.iter().all(|r| r.radicals[0].1 == RadicalOutcome::Skipped));
    }

    #[test]
    fn function_field_rank() {
        let dr = setup("A2", 3);
        for g in dr.datum().positive_box(3) {
            let r = dr.radical_at(&g, &SpecPoint::FunctionField(5)).unwrap();
            assert_eq!(r.kernel_dim, 0, "{g}");
        }
    }

    #[test]
    fn strip_directions_agree() {
        for name in ["A1", "A2", "B2", "G2", "A1~"] {
            let dr = setup(name, 4);
            for g in dr.datum().positive_box(4) {
                let (_, left) = dr.normalized_matrix(&g, Strip::Left).unwrap();
                let (_, right) = dr.normalized_matrix(&g, Strip::Right).unwrap();
                assert_eq!(left, right, "{name} {g}");
            }
        }
    }

    #[test]
    fn serre_elements_pair_to_zero() {
        for name in ["A2", "B2", "A1~"] {
            let dr = setup(name, 4);
            let d = dr.datum();
            let mut raw = RawPairing::new(d, Strip::Left);
            for g in d.positive_box(4) {
                let span = dr.borel().serre_span(&g).unwrap();
                for w in words_of_content(&g) {
                    let y = WordComb::word(&w);
                    for s in &span {
                        assert!(raw.comb(s, &y).is_zero(), "{name} {g}");
                        assert!(raw.comb(&y, s).is_zero(), "{name} {g}");
                    }
                }
            }
            for i in 0..d.rank() {
                for j in 0..d.rank() {
                    if i != j {
                        assert!(serre_element_integral(d, i, j).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn right_strip_is_r_plus() {
        let d = CartanDatum::preset("G2").unwrap();
        let mut left = RawPairing::new(&d, Strip::Left);
        for g in d.positive_box(3) {
            let words = words_of_content(&g);
            for x in &words {
                for y in &words {
                    let i = *y.last().unwrap() as usize;
                    let rx = r_plus(&d, i, &WordComb::word(x));
                    let lhs = left.word(x, y);
                    let rhs = left.comb(&rx, &WordComb::word(&y[..y.len() - 1]));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
