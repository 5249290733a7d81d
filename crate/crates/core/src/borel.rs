//! Graded pieces of `U^+` (equivalently `U^-`) as quotients of the free
//! algebra by the quantum Serre ideal: word bases, normal forms and the skew
//! derivations `r_{i,+}`, `r'_{i,+}`.
//!
//! Letters are generator indices `0..rank`. The same word basis serves both
//! halves: `e_{i1}...e_{in}` and `f_{i1}...f_{in}` share the index sequence.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::charring::CharSeries;
use crate::qarith::{q_binomial, q_factorial, LaurentInt, QError, RatQ};
use crate::rootdata::{CartanDatum, RootVec, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BorelError {
    #[error("height of {gamma} exceeds the configured bound {bound}")]
    HeightExceeded { gamma: RootVec, bound: i64 },
    #[error("{0} is not in the positive root cone")]
    NotPositive(RootVec),
    #[error("Serre relations need distinct indices, got ({0}, {0})")]
    SameIndex(usize),
    #[error(transparent)]
    Arith(#[from] QError),
}

/// A monomial in the generators together with its content.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<u8>,
    content: RootVec,
}

impl FreeWord {
    pub fn new(letters: Vec<u8>, rank: usize) -> Self {
        let content = word_content(&letters, rank);
        FreeWord { letters, content }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn content(&self) -> &RootVec {
        &self.content
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", word_label(&self.letters))
    }
}

/// `f1f1f2`-style label with 1-based indices; `1` for the empty word.
pub fn word_label(letters: &[u8]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters.iter().map(|l| format!("f{}", l + 1)).collect()
}

pub fn word_content(letters: &[u8], rank: usize) -> RootVec {
    let mut v = vec![0; rank];
    for &l in letters {
        v[l as usize] += 1;
    }
    RootVec(v)
}

/// A finite linear combination of words with Laurent coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct WordComb(BTreeMap<Vec<u8>, LaurentInt>);

impl WordComb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn word(letters: &[u8]) -> Self {
        let mut c = Self::new();
        c.add_term(letters.to_vec(), LaurentInt::one());
        c
    }

    pub fn add_term(&mut self, w: Vec<u8>, c: LaurentInt) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &WordComb) {
        for (w, c) in &other.0 {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn scaled(&self, c: &LaurentInt) -> WordComb {
        WordComb(self.0.iter().map(|(w, v)| (w.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &LaurentInt)> {
        self.0.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> LaurentInt {
        self.0.get(w).cloned().unwrap_or_default()
    }

    /// `left * self * right` in the free algebra.
    pub fn sandwich(&self, left: &[u8], right: &[u8]) -> WordComb {
        WordComb(
            self.0
                .iter()
                .map(|(w, c)| {
                    let mut x = left.to_vec();
                    x.extend_from_slice(w);
                    x.extend_from_slice(right);
                    (x, c.clone())
                })
                .collect(),
        )
    }

    /// Reverses every word (the antiautomorphism fixing generators).
    pub fn reversed(&self) -> WordComb {
        WordComb(
            self.0
                .iter()
                .map(|(w, c)| (w.iter().rev().copied().collect(), c.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for WordComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(w, c)| format!("({c})*{}", word_label(w))).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

/// Every word of the given content, in lexicographic order.
pub fn words_of_content(gamma: &RootVec) -> Vec<Vec<u8>> {
    fn go(rem: &mut Vec<i64>, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rem.iter().all(|&c| c == 0) {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                prefix.push(i as u8);
                go(rem, prefix, out);
                prefix.pop();
                rem[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut gamma.0.clone(), &mut Vec::new(), &mut out);
    out
}

/// `sum_{r+s=N} (-1)^r e_i^{(r)} e_j e_i^{(s)}` with `N = 1 - A[i][j]`, expanded
/// in plain words with divided-power coefficients `1/([r]![s]!)`.
pub fn serre_element(datum: &CartanDatum, i: usize, j: usize) -> Result<Vec<(FreeWord, RatQ)>, BorelError> {
    if i == j {
        return Err(BorelError::SameIndex(i));
    }
    let n = 1 - datum.cartan[i][j];
    let d = datum.sym[i];
    let mut out = Vec::new();
    for r in 0..=n {
        let s = n - r;
        let den = &q_factorial(r, d)? * &q_factorial(s, d)?;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let coeff = RatQ::new(LaurentInt::constant(sign), den)?;
        out.push((FreeWord::new(serre_word(i, j, r, s), datum.rank()), coeff));
    }
    Ok(out)
}

fn serre_word(i: usize, j: usize, r: i64, s: i64) -> Vec<u8> {
    let mut w = vec![i as u8; r as usize];
    w.push(j as u8);
    w.extend(std::iter::repeat_n(i as u8, s as usize));
    w
}

/// The Serre element multiplied by the unit `[N]!_{q_i}`: coefficients are
/// `(-1)^r [N choose r]_{q_i}`.
pub fn serre_element_integral(datum: &CartanDatum, i: usize, j: usize) -> Result<WordComb, BorelError> {
    if i == j {
        return Err(BorelError::SameIndex(i));
    }
    let n = 1 - datum.cartan[i][j];
    let d = datum.sym[i];
    let mut out = WordComb::new();
    for r in 0..=n {
        let b = q_binomial(n, r, d)?;
        let c = if r % 2 == 0 { b } else { -b };
        out.add_term(serre_word(i, j, r, n - r), c);
    }
    Ok(out)
}

/// Content of the Serre element `S_{ij}`.
pub fn serre_content(datum: &CartanDatum, i: usize, j: usize) -> RootVec {
    RootVec::simple(datum.rank(), j).plus_simple(i, 1 - datum.cartan[i][j])
}

/// A chosen basis of `U^-_{-gamma}` by words, with the normal-form map.
#[derive(Clone, Debug)]
pub struct WordBasis {
    pub gamma: RootVec,
    /// Basis words in lexicographic order.
    pub basis_words: Vec<FreeWord>,
    /// Position of each basis word.
    basis_pos: HashMap<Vec<u8>, usize>,
    /// Coordinates of the non-basis words of content `gamma`.
    normal_forms: HashMap<Vec<u8>, Vec<RatQ>>,
    free_dim: usize,
}

impl WordBasis {
    pub fn dim(&self) -> usize {
        self.basis_words.len()
    }

    /// Number of free words of this content.
    pub fn free_dim(&self) -> usize {
        self.free_dim
    }

    pub fn position(&self, w: &[u8]) -> Option<usize> {
        self.basis_pos.get(w).copied()
    }

    /// Coordinates over `basis_words` of the image of `w`.
    pub fn reduce(&self, w: &[u8]) -> Vec<RatQ> {
        if let Some(k) = self.position(w) {
            let mut v = vec![RatQ::zero(); self.dim()];
            v[k] = RatQ::one();
            return v;
        }
        self.normal_forms
            .get(w)
            .unwrap_or_else(|| panic!("word {} does not have content {}", word_label(w), self.gamma))
            .clone()
    }

    pub fn reduce_comb(&self, x: &WordComb) -> Vec<RatQ> {
        let mut acc = vec![RatQ::zero(); self.dim()];
        for (w, c) in x.terms() {
            let c = RatQ::from(c.clone());
            for (a, r) in acc.iter_mut().zip(self.reduce(w)) {
                if !r.is_zero() {
                    *a = &*a + &(&c * &r);
                }
            }
        }
        acc
    }

    /// The combination of basis words with the given coordinates.
    pub fn expand(&self, coords: &[RatQ]) -> Vec<(Vec<u8>, RatQ)> {
        self.basis_words
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.letters.clone(), c.clone()))
            .collect()
    }

    /// Every normal-form coefficient, for integrality audits.
    pub fn normal_form_coefficients(&self) -> impl Iterator<Item = &RatQ> {
        self.normal_forms.values().flatten()
    }
}

/// Fraction-free incremental echelon form over `Z[q, q^-1]` where a row's pivot
/// is its largest nonzero column.
struct Echelon {
    cols: usize,
    rows: BTreeMap<usize, Vec<LaurentInt>>,
}

fn strip_row(row: &mut [LaurentInt]) {
    let g = row.iter().fold(LaurentInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = x.div_exact(&g).expect("row gcd divides entries");
    }
}

/// `row <- row - (row[c] / piv[c]) * piv`, fraction-free unless the pivot is a unit.
fn eliminate(row: &mut [LaurentInt], piv: &[LaurentInt], c: usize) {
    let a = row[c].clone();
    let b = &piv[c];
    if b.is_unit() {
        let f = a.div_exact(b).expect("unit divides");
        for (x, p) in row.iter_mut().zip(piv) {
            if !p.is_zero() {
                *x -= &(&f * p);
            }
        }
    } else {
        for (x, p) in row.iter_mut().zip(piv) {
            *x = &(&*x * b) - &(&a * p);
        }
        strip_row(row);
    }
}

impl Echelon {
    fn new(cols: usize) -> Self {
        Echelon { cols, rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut row: Vec<LaurentInt>) {
        debug_assert_eq!(row.len(), self.cols);
        loop {
            let Some(c) = row.iter().rposition(|x| !x.is_zero()) else {
                return;
            };
            match self.rows.get(&c) {
                Some(piv) => eliminate(&mut row, piv, c),
                None => {
                    strip_row(&mut row);
                    self.rows.insert(c, row);
                    return;
                }
            }
        }
    }

    /// Clears every pivot column outside its own row.
    fn back_substitute(&mut self) {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for (k, &p) in pivots.iter().enumerate() {
            let piv = self.rows[&p].clone();
            for &other in &pivots[k + 1..] {
                let row = self.rows.get_mut(&other).unwrap();
                if !row[p].is_zero() {
                    eliminate(row, &piv, p);
                }
            }
        }
    }
}

/// Word bases of the graded pieces up to a height bound, cached per content.
pub struct Borel {
    datum: Arc<CartanDatum>,
    height: i64,
    cache: RwLock<HashMap<RootVec, Arc<WordBasis>>>,
}

impl Borel {
    pub fn new(datum: Arc<CartanDatum>, height: i64) -> Self {
        Borel { datum, height, cache: RwLock::new(HashMap::new()) }
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> Arc<CartanDatum> {
        self.datum.clone()
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// All `u S_{ij} v` of content `gamma`, with the integral Serre elements.
    pub fn serre_span(&self, gamma: &RootVec) -> Result<Vec<WordComb>, BorelError> {
        let d = &self.datum;
        let n = d.rank();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let c = serre_content(d, i, j);
                if !gamma.dominates(&c) {
                    continue;
                }
                let s = serre_element_integral(d, i, j)?;
                let rest = gamma.sub(&c);
                for left in sub_contents(&rest) {
                    let right = rest.sub(&left);
                    let rights = words_of_content(&right);
                    for u in words_of_content(&left) {
                        for v in &rights {
                            out.push(s.sandwich(&u, v));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn check(&self, gamma: &RootVec) -> Result<(), BorelError> {
        if !gamma.is_nonneg() || gamma.rank() != self.rank() {
            return Err(BorelError::NotPositive(gamma.clone()));
        }
        if gamma.height() > self.height {
            return Err(BorelError::HeightExceeded { gamma: gamma.clone(), bound: self.height });
        }
        Ok(())
    }

    /// The lexicographically smallest words whose images form a basis of the
    /// quotient, with normal forms for the rest.
    pub fn component_basis(&self, gamma: &RootVec) -> Result<Arc<WordBasis>, BorelError> {
        self.check(gamma)?;
        if let Some(b) = self.cache.read().unwrap().get(gamma) {
            return Ok(b.clone());
        }
        let built = Arc::new(self.build_basis(gamma)?);
        let mut cache = self.cache.write().unwrap();
        Ok(cache.entry(gamma.clone()).or_insert(built).clone())
    }

    fn build_basis(&self, gamma: &RootVec) -> Result<WordBasis, BorelError> {
        let rank = self.rank();
        let words = words_of_content(gamma);
        let index: HashMap<&[u8], usize> = words.iter().enumerate().map(|(k, w)| (w.as_slice(), k)).collect();
        let mut ech = Echelon::new(words.len());
        for rel in self.serre_span(gamma)? {
            let mut row = vec![LaurentInt::zero(); words.len()];
            for (w, c) in rel.terms() {
                row[index[w.as_slice()]] += c;
            }
            ech.insert(row);
        }
        ech.back_substitute();
        let basis_cols: Vec<usize> = (0..words.len()).filter(|c| !ech.rows.contains_key(c)).collect();
        let basis_pos: HashMap<Vec<u8>, usize> =
            basis_cols.iter().enumerate().map(|(k, &c)| (words[c].clone(), k)).collect();
        let mut normal_forms = HashMap::new();
        for (&p, row) in &ech.rows {
            let piv = &row[p];
            let coords = basis_cols
                .iter()
                .map(|&c| RatQ::new(-&row[c], piv.clone()).expect("pivot is nonzero"))
                .collect();
            normal_forms.insert(words[p].clone(), coords);
        }
        Ok(WordBasis {
            gamma: gamma.clone(),
            basis_words: basis_cols.iter().map(|&c| FreeWord::new(words[c].clone(), rank)).collect(),
            basis_pos,
            normal_forms,
            free_dim: words.len(),
        })
    }

    /// Builds every component in the height box in parallel.
    pub fn prefetch(&self, height: i64) -> Result<(), BorelError> {
        let boxed = self.datum.positive_box(height.min(self.height));
        boxed.par_iter().try_for_each(|g| self.component_basis(g).map(|_| ()))
    }

    /// `sum_gamma dim U^-_{-gamma} e(-gamma)` over the height box.
    pub fn dim_series(&self, height: i64) -> Result<CharSeries, BorelError> {
        self.prefetch(height)?;
        let rank = self.rank();
        let mut series = CharSeries::one(Weight::zero(rank), height);
        for g in self.datum.positive_box(height) {
            let dim = self.component_basis(&g)?.dim();
            series.set(g, (dim as i64).into());
        }
        Ok(series)
    }
}

/// Every `delta` with `0 <= delta <= gamma` componentwise.
pub fn sub_contents(gamma: &RootVec) -> Vec<RootVec> {
    let mut out = vec![Vec::new()];
    for &g in &gamma.0 {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (0..=g).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(RootVec).collect()
}

/// `r_{i,+}` on a word: `sum_{p : w_p = i} q^{(alpha_i, content(w after p))} w\p`.
///
/// This unrolls `r(x x') = q^{(alpha_i, |x'|)} r(x) x' + x r(x')` from the right.
pub fn r_plus_word(datum: &CartanDatum, i: usize, w: &[u8]) -> WordComb {
    let mut out = WordComb::new();
    let mut tail = 0i64; // (alpha_i, content of the suffix after p)
    for p in (0..w.len()).rev() {
        if w[p] as usize == i {
            let mut rest = w[..p].to_vec();
            rest.extend_from_slice(&w[p + 1..]);
            out.add_term(rest, LaurentInt::q_pow(tail));
        }
        tail += datum.simple_form(i, w[p] as usize);
    }
    out
}

/// `r'_{i,+}` on a word: `sum_{p : w_p = i} q^{(alpha_i, content(w before p))} w\p`,
/// the unrolled form of `r'(x x') = r'(x) x' + q^{(alpha_i, |x|)} x r'(x')`.
pub fn r_prime_plus_word(datum: &CartanDatum, i: usize, w: &[u8]) -> WordComb {
    let mut out = WordComb::new();
    let mut head = 0i64;
    for p in 0..w.len() {
        if w[p] as usize == i {
            let mut rest = w[..p].to_vec();
            rest.extend_from_slice(&w[p + 1..]);
            out.add_term(rest, LaurentInt::q_pow(head));
        }
        head += datum.simple_form(i, w[p] as usize);
    }
    out
}

fn linear_extend(x: &WordComb, f: impl Fn(&[u8]) -> WordComb) -> WordComb {
    let mut out = WordComb::new();
    for (w, c) in x.terms() {
        out.add(&f(w).scaled(c));
    }
    out
}

pub fn r_plus(datum: &CartanDatum, i: usize, x: &WordComb) -> WordComb {
    linear_extend(x, |w| r_plus_word(datum, i, w))
}

pub fn r_prime_plus(datum: &CartanDatum, i: usize, x: &WordComb) -> WordComb {
    linear_extend(x, |w| r_prime_plus_word(datum, i, w))
}

/// One term `c * (a k_beta) (x) b` of a coproduct in the free bialgebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorKey {
    pub left: Vec<u8>,
    pub left_k: RootVec,
    pub right: Vec<u8>,
}

/// `Delta(e_{i1} ... e_{in})` expanded by multiplying the generator coproducts
/// `e_i (x) 1 + k_i (x) e_i` with `k_beta e_j = q^{(beta, alpha_j)} e_j k_beta`.
pub fn coproduct_word(datum: &CartanDatum, w: &[u8]) -> BTreeMap<TensorKey, LaurentInt> {
    let n = datum.rank();
    let mut acc: BTreeMap<TensorKey, LaurentInt> = BTreeMap::new();
    acc.insert(TensorKey { left: vec![], left_k: RootVec::zero(n), right: vec![] }, LaurentInt::one());
    for &l in w {
        let j = l as usize;
        let mut next: BTreeMap<TensorKey, LaurentInt> = BTreeMap::new();
        for (key, c) in &acc {
            // (a k_beta (x) b) (e_j (x) 1) = q^{(beta, alpha_j)} a e_j k_beta (x) b
            let mut left = key.left.clone();
            left.push(l);
            let coeff = c * &LaurentInt::q_pow(datum.form_with_simple(&key.left_k, j));
            let k1 = TensorKey { left, left_k: key.left_k.clone(), right: key.right.clone() };
            *next.entry(k1).or_default() += &coeff;
            // (a k_beta (x) b) (k_j (x) e_j) = a k_{beta + alpha_j} (x) b e_j
            let mut right = key.right.clone();
            right.push(l);
            let k2 = TensorKey { left: key.left.clone(), left_k: key.left_k.plus_simple(j, 1), right };
            *next.entry(k2).or_default() += c;
        }
        acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    acc
}

/// Reads `r_{i,+}(w)` off the coproduct: the terms `r(w) k_i (x) e_i`.
pub fn r_plus_from_coproduct(datum: &CartanDatum, i: usize, w: &[u8]) -> WordComb {
    let ki = RootVec::simple(datum.rank(), i);
    let mut out = WordComb::new();
    for (key, c) in coproduct_word(datum, w) {
        if key.right == [i as u8] && key.left_k == ki {
            out.add_term(key.left, c);
        }
    }
    out
}

/// Reads `r'_{i,+}(w)` off the coproduct: the terms `e_i k_{gamma - alpha_i} (x) r'(w)`.
pub fn r_prime_plus_from_coproduct(datum: &CartanDatum, i: usize, w: &[u8]) -> WordComb {
    let gamma = word_content(w, datum.rank());
    let k = gamma.plus_simple(i, -1);
    let mut out = WordComb::new();
    for (key, c) in coproduct_word(datum, w) {
        if key.left == [i as u8] && key.left_k == k {
            out.add_term(key.right, c);
        }
    }
    out
}
