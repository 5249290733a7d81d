//! Cartan data, the invariant bilinear form, weights, the dot action of the
//! Weyl group, and root multiplicities by the Peterson recurrence.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("cartan matrix must be {rank}x{rank}")]
    Shape { rank: usize },
    #[error("symmetrizer must have {rank} entries")]
    SymmetrizerLength { rank: usize },
    #[error("diagonal entry A[{i}][{i}] must be 2")]
    Diagonal { i: usize },
    #[error("off-diagonal entry A[{i}][{j}] must be nonpositive")]
    PositiveOffDiagonal { i: usize, j: usize },
    #[error("A[{i}][{j}] = 0 must hold iff A[{j}][{i}] = 0")]
    ZeroPattern { i: usize, j: usize },
    #[error("symmetrizability fails: d_{i} * A[{i}][{j}] != d_{j} * A[{j}][{i}]")]
    NotSymmetrized { i: usize, j: usize },
    #[error("symmetrizer entry d_{i} must be a positive integer")]
    SymmetrizerNonPositive { i: usize },
    #[error("unknown preset {0:?} (known: A1, A2, B2, G2, A3, A1~, A2~tw)")]
    UnknownPreset(String),
    #[error("cannot read datum file: {0}")]
    Io(String),
    #[error("malformed datum JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("weight is not dominant: <lambda, h_{index}> = {value} < 0")]
    NonDominant { index: usize, value: i64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// An element `sum n_i alpha_i` of the root lattice, in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        RootVec(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        RootVec(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// In `Q^+`: every coordinate nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> RootVec {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn plus_simple(&self, i: usize, k: i64) -> RootVec {
        let mut v = self.0.clone();
        v[i] += k;
        RootVec(v)
    }

    /// `self - other` lies in `Q^+`.
    pub fn dominates(&self, other: &RootVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Output order: height ascending, then coordinates descending, so `alpha_1`
    /// precedes `alpha_2`.
    pub fn display_cmp(&self, other: &RootVec) -> std::cmp::Ordering {
        self.height().cmp(&other.height()).then_with(|| other.0.cmp(&self.0))
    }

    /// TSV-friendly coordinates.
    pub fn tsv(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\t")
    }
}

impl fmt::Debug for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A weight, recorded only through its pairings `<lambda, h_i>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&p| p >= 0)
    }

    pub fn check_dominant(&self) -> Result<(), RootError> {
        match self.0.iter().position(|&p| p < 0) {
            Some(index) => Err(RootError::NonDominant { index, value: self.0[index] }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", RootVec(self.0.clone()))
    }
}

/// `anchor - offset`: a weight tracked relative to a fixed anchor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnchoredWeight {
    pub anchor: Weight,
    pub offset: RootVec,
}

/// A symmetrizable generalized Cartan matrix with its symmetrizer.
///
/// `cartan[i][j] = <alpha_j, h_i>` and `sym[i] = (alpha_i, alpha_i) / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub name: String,
    pub cartan: Vec<Vec<i64>>,
    pub sym: Vec<i64>,
}

#[derive(Deserialize)]
struct DatumFile {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
}

pub const PRESETS: [&str; 7] = ["A1", "A2", "B2", "G2", "A3", "A1~", "A2~tw"];

impl CartanDatum {
    pub fn new(name: impl Into<String>, cartan: Vec<Vec<i64>>, sym: Vec<i64>) -> Result<Self, DatumError> {
        let rank = cartan.len();
        if rank == 0 {
            return Err(DatumError::ZeroRank);
        }
        if cartan.iter().any(|r| r.len() != rank) {
            return Err(DatumError::Shape { rank });
        }
        if sym.len() != rank {
            return Err(DatumError::SymmetrizerLength { rank });
        }
        if let Some(i) = sym.iter().position(|&d| d < 1) {
            return Err(DatumError::SymmetrizerNonPositive { i });
        }
        for i in 0..rank {
            if cartan[i][i] != 2 {
                return Err(DatumError::Diagonal { i });
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                if cartan[i][j] > 0 {
                    return Err(DatumError::PositiveOffDiagonal { i, j });
                }
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(DatumError::ZeroPattern { i, j });
                }
                if sym[i] * cartan[i][j] != sym[j] * cartan[j][i] {
                    return Err(DatumError::NotSymmetrized { i, j });
                }
            }
        }
        Ok(CartanDatum { name: name.into(), cartan, sym })
    }

    /// The fixed catalogue, each with minimal symmetrizers.
    pub fn preset(name: &str) -> Result<Self, DatumError> {
        let (cartan, sym): (Vec<Vec<i64>>, Vec<i64>) = match name {
            "A1" => (vec![vec![2]], vec![1]),
            "A2" => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
            "B2" => (vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            "G2" => (vec![vec![2, -1], vec![-3, 2]], vec![3, 1]),
            "A3" => (
                vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
                vec![1, 1, 1],
            ),
            "A1~" => (vec![vec![2, -2], vec![-2, 2]], vec![1, 1]),
            "A2~tw" => (vec![vec![2, -1], vec![-4, 2]], vec![4, 1]),
            other => return Err(DatumError::UnknownPreset(other.to_string())),
        };
        Self::new(name, cartan, sym)
    }

    /// Parses `{"rank": n, "cartan": [[...]], "symmetrizer": [...]}`.
    pub fn from_json(name: impl Into<String>, text: &str) -> Result<Self, DatumError> {
        let file: DatumFile = serde_json::from_str(text).map_err(|e| DatumError::Json(e.to_string()))?;
        if file.cartan.len() != file.rank {
            return Err(DatumError::Shape { rank: file.rank });
        }
        Self::new(name, file.cartan, file.symmetrizer)
    }

    pub fn from_file(path: &Path) -> Result<Self, DatumError> {
        let text = std::fs::read_to_string(path).map_err(|e| DatumError::Io(e.to_string()))?;
        Self::from_json(path.display().to_string(), &text)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "rank": self.rank(), "cartan": self.cartan, "symmetrizer": self.sym })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// Finite type iff the symmetrized matrix `(alpha_i, alpha_j)` is positive
    /// definite (Sylvester's criterion, exact).
    pub fn is_finite_type(&self) -> bool {
        let n = self.rank();
        let b: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from_integer(self.simple_form(i, j).into())).collect())
            .collect();
        (1..=n).all(|k| {
            let minor: Vec<Vec<BigRational>> = b[..k].iter().map(|r| r[..k].to_vec()).collect();
            rational_det(minor).is_positive()
        })
    }

    /// `(alpha_i, alpha_j) = d_i * A[i][j]`.
    pub fn simple_form(&self, i: usize, j: usize) -> i64 {
        self.sym[i] * self.cartan[i][j]
    }

    /// `(gamma, delta) = sum n_i m_j d_i A[i][j]`.
    pub fn form(&self, gamma: &RootVec, delta: &RootVec) -> i64 {
        let n = self.rank();
        assert_eq!(gamma.rank(), n, "root vector rank mismatch");
        assert_eq!(delta.rank(), n, "root vector rank mismatch");
        let mut acc = 0;
        for i in 0..n {
            if gamma.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += gamma.0[i] * delta.0[j] * self.simple_form(i, j);
            }
        }
        acc
    }

    /// `(gamma, alpha_i)`.
    pub fn form_with_simple(&self, gamma: &RootVec, i: usize) -> i64 {
        (0..self.rank()).map(|j| gamma.0[j] * self.simple_form(j, i)).sum()
    }

    /// `(lambda, alpha_i) = d_i <lambda, h_i>`.
    pub fn form_weight_root(&self, lambda: &Weight, i: usize) -> i64 {
        self.sym[i] * lambda.0[i]
    }

    /// `<gamma, h_i> = (A gamma)_i`.
    pub fn root_pairing(&self, gamma: &RootVec, i: usize) -> i64 {
        (0..self.rank()).map(|j| self.cartan[i][j] * gamma.0[j]).sum()
    }

    /// Pairings of `lambda - gamma`.
    pub fn weight_minus(&self, lambda: &Weight, gamma: &RootVec) -> Weight {
        Weight((0..self.rank()).map(|i| lambda.0[i] - self.root_pairing(gamma, i)).collect())
    }

    /// Pairings of an anchored weight.
    pub fn pairings(&self, w: &AnchoredWeight) -> Weight {
        self.weight_minus(&w.anchor, &w.offset)
    }

    /// Ordinary reflection on the root lattice: `s_i gamma = gamma - <gamma, h_i> alpha_i`.
    pub fn reflect_root(&self, i: usize, gamma: &RootVec) -> RootVec {
        gamma.plus_simple(i, -self.root_pairing(gamma, i))
    }

    /// `s_i o mu = mu - (<mu, h_i> + 1) alpha_i`, updating the offset.
    pub fn dot_reflect(&self, i: usize, w: &AnchoredWeight) -> AnchoredWeight {
        let p = self.pairings(w).0[i];
        AnchoredWeight { anchor: w.anchor.clone(), offset: w.offset.plus_simple(i, p + 1) }
    }

    /// Dot action on an offset relative to the zero anchor: `e(-gamma) -> e(s_i o (-gamma))`,
    /// returned as the new offset.
    pub fn dot_reflect_offset(&self, i: usize, gamma: &RootVec) -> RootVec {
        let w = AnchoredWeight { anchor: Weight::zero(self.rank()), offset: gamma.clone() };
        self.dot_reflect(i, &w).offset
    }

    /// Alternating Weyl numerator truncated to height `height`:
    /// `{(lambda - w o lambda, sgn w) : ht <= height}`, sorted for output.
    pub fn orbit_numerator(&self, lambda: &Weight, height: i64) -> Result<Vec<(RootVec, i8)>, RootError> {
        self.check_weight(lambda)?;
        lambda.check_dominant()?;
        let n = self.rank();
        let start = AnchoredWeight { anchor: lambda.clone(), offset: RootVec::zero(n) };
        let mut seen: HashMap<RootVec, i8> = HashMap::new();
        seen.insert(start.offset.clone(), 1);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            let sign = seen[&node.offset];
            let p = self.pairings(&node);
            for i in 0..n {
                // lengthening step: <mu + rho, h_i> > 0
                if p.0[i] < 0 {
                    continue;
                }
                let child = self.dot_reflect(i, &node);
                if child.offset.height() > height {
                    continue;
                }
                match seen.get(&child.offset) {
                    Some(&s) => assert_eq!(s, -sign, "inconsistent sign at {}", child.offset),
                    None => {
                        seen.insert(child.offset.clone(), -sign);
                        queue.push_back(child);
                    }
                }
            }
        }
        let mut out: Vec<(RootVec, i8)> = seen.into_iter().collect();
        out.sort_by(|a, b| a.0.display_cmp(&b.0));
        Ok(out)
    }

    fn check_weight(&self, lambda: &Weight) -> Result<(), RootError> {
        if lambda.0.len() != self.rank() {
            return Err(RootError::Dimension { expected: self.rank(), got: lambda.0.len() });
        }
        Ok(())
    }

    /// Every element of `Q^+` with height in `1..=height`, in display order.
    pub fn positive_box(&self, height: i64) -> Vec<RootVec> {
        let mut out = Vec::new();
        for h in 1..=height {
            out.extend(compositions(self.rank(), h));
        }
        out.sort_by(|a, b| a.display_cmp(b));
        out
    }

    /// Root multiplicities up to `height` by the Peterson recurrence
    /// `(b, b - 2 rho) c_b = sum_{b' + b'' = b} (b', b'') c_b' c_b''`,
    /// with `c_b = sum_{k >= 1} m_{b/k} / k`.
    pub fn peterson_multiplicities(&self, height: i64) -> BTreeMap<RootVec, u64> {
        let n = self.rank();
        let boxed = self.positive_box(height);
        let mut c: HashMap<RootVec, BigRational> = HashMap::new();
        let mut mult: BTreeMap<RootVec, u64> = BTreeMap::new();
        for beta in &boxed {
            let cb = if beta.height() == 1 {
                BigRational::from_integer(1.into())
            } else {
                // (beta, 2 rho) = sum n_i (alpha_i, alpha_i)
                let two_rho: i64 = (0..n).map(|i| beta.0[i] * 2 * self.sym[i]).sum();
                let coef = self.form(beta, beta) - two_rho;
                let mut rhs = BigRational::zero();
                for (b1, c1) in &c {
                    if !beta.dominates(b1) || b1 == beta {
                        continue;
                    }
                    let b2 = beta.sub(b1);
                    if let Some(c2) = c.get(&b2) {
                        rhs += c1 * c2 * BigRational::from_integer(self.form(b1, &b2).into());
                    }
                }
                if coef == 0 {
                    // only possible off the root system above height 1, so
                    // m_beta = 0 and c_beta comes from the proper divisors
                    assert!(rhs.is_zero(), "Peterson recurrence inconsistent at {beta}");
                    divisor_part(beta, &mult)
                } else {
                    rhs / BigRational::from_integer(coef.into())
                }
            };
            let m = &cb - divisor_part(beta, &mult);
            assert!(m.is_integer() && !m.is_negative(), "non-integral multiplicity {m} at {beta}");
            let m = m.to_integer().to_u64().unwrap();
            if !cb.is_zero() {
                c.insert(beta.clone(), cb);
            }
            if m > 0 {
                mult.insert(beta.clone(), m);
            }
        }
        mult
    }
}

/// `sum_{k >= 2, beta/k in Q^+} m_{beta/k} / k`.
fn divisor_part(beta: &RootVec, mult: &BTreeMap<RootVec, u64>) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 2..=beta.height() {
        if beta.0.iter().all(|x| x % k == 0) {
            let sub = RootVec(beta.0.iter().map(|x| x / k).collect());
            let ms = mult.get(&sub).copied().unwrap_or(0);
            acc += BigRational::new(ms.into(), k.into());
        }
    }
    acc
}

fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::from_integer(1.into());
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    det
}

/// All `RootVec`s of the given rank with nonnegative coordinates summing to `h`.
pub fn compositions(rank: usize, h: i64) -> Vec<RootVec> {
    fn go(rank: usize, h: i64, prefix: &mut Vec<i64>, out: &mut Vec<RootVec>) {
        if prefix.len() == rank - 1 {
            prefix.push(h);
            out.push(RootVec(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=h {
            prefix.push(k);
            go(rank, h - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(rank, h, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rv(v: &[i64]) -> RootVec {
        RootVec(v.to_vec())
    }

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            CartanDatum::preset(name).unwrap();
        }
        assert!(matches!(CartanDatum::preset("E9"), Err(DatumError::UnknownPreset(_))));
    }

    #[test]
    fn validation_names_the_invariant() {
        let e = CartanDatum::new("x", vec![vec![2, -1], vec![-1, 3]], vec![1, 1]).unwrap_err();
        assert_eq!(e, DatumError::Diagonal { i: 1 });
        let e = CartanDatum::new("x", vec![vec![2, 1], vec![-1, 2]], vec![1, 1]).unwrap_err();
        assert_eq!(e, DatumError::PositiveOffDiagonal { i: 0, j: 1 });
        let e = CartanDatum::new("x", vec![vec![2, 0], vec![-1, 2]], vec![1, 1]).unwrap_err();
        assert_eq!(e, DatumError::ZeroPattern { i: 0, j: 1 });
        let e = CartanDatum::new("x", vec![vec![2, -1], vec![-2, 2]], vec![1, 1]).unwrap_err();
        assert_eq!(e, DatumError::NotSymmetrized { i: 0, j: 1 });
        let e = CartanDatum::new("x", vec![vec![2]], vec![0]).unwrap_err();
        assert_eq!(e, DatumError::SymmetrizerNonPositive { i: 0 });
    }

    #[test]
    fn json_round_trip() {
        let d = CartanDatum::from_json("g2", r#"{"rank": 2, "cartan": [[2,-1],[-3,2]], "symmetrizer": [3,1]}"#).unwrap();
        assert_eq!(d.cartan, CartanDatum::preset("G2").unwrap().cartan);
        let e = CartanDatum::from_json("bad", r#"{"rank": 3, "cartan": [[2]], "symmetrizer": [1]}"#).unwrap_err();
        assert_eq!(e, DatumError::Shape { rank: 3 });
        assert!(matches!(CartanDatum::from_json("bad", "{"), Err(DatumError::Json(_))));
    }

    #[test]
    fn form_examples() {
        let a2 = CartanDatum::preset("A2").unwrap();
        assert_eq!(a2.form(&rv(&[1, 0]), &rv(&[0, 1])), -1);
        let a1 = CartanDatum::preset("A1").unwrap();
        assert_eq!(a1.form(&rv(&[1]), &rv(&[1])), 2);
        let g2 = CartanDatum::preset("G2").unwrap();
        assert_eq!(g2.form(&rv(&[1, 0]), &rv(&[0, 1])), -3);
        assert_eq!(g2.form_weight_root(&Weight(vec![1, 2]), 0), 3);
    }

    #[test]
    fn finite_type_detection() {
        for (name, finite) in [("A1", true), ("A2", true), ("B2", true), ("G2", true), ("A3", true), ("A1~", false), ("A2~tw", false)] {
            assert_eq!(CartanDatum::preset(name).unwrap().is_finite_type(), finite, "{name}");
        }
    }

    #[test]
    fn dot_reflect_examples() {
        let a1 = CartanDatum::preset("A1").unwrap();
        let zero = AnchoredWeight { anchor: Weight(vec![0]), offset: rv(&[0]) };
        assert_eq!(a1.dot_reflect(0, &zero).offset, rv(&[1]));
        let one = AnchoredWeight { anchor: Weight(vec![1]), offset: rv(&[0]) };
        assert_eq!(a1.dot_reflect(0, &one).offset, rv(&[2]));

        let a2 = CartanDatum::preset("A2").unwrap();
        let z = AnchoredWeight { anchor: Weight(vec![0, 0]), offset: rv(&[0, 0]) };
        let w = a2.dot_reflect(0, &a2.dot_reflect(1, &z));
        assert_eq!(w.offset, rv(&[2, 1]));
    }

    /// Brute-force oracle: apply every word of length <= `len` to the anchor.
    fn brute_orbit(d: &CartanDatum, lambda: &Weight, len: usize, height: i64) -> Vec<(RootVec, i8)> {
        let start = AnchoredWeight { anchor: lambda.clone(), offset: RootVec::zero(d.rank()) };
        let mut layer = vec![(start, 1i8)];
        let mut found: BTreeMap<RootVec, i8> = BTreeMap::new();
        found.insert(RootVec::zero(d.rank()), 1);
        for _ in 0..len {
            let mut next = Vec::new();
            for (w, s) in &layer {
                for i in 0..d.rank() {
                    let c = d.dot_reflect(i, w);
                    next.push((c, -s));
                }
            }
            for (w, s) in &next {
                if w.offset.height() <= height {
                    let prev = found.insert(w.offset.clone(), *s);
                    assert!(prev.is_none() || prev == Some(*s));
                }
            }
            layer = next;
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort_by(|a, b| a.0.display_cmp(&b.0));
        out
    }

    #[test]
    fn orbit_examples() {
        let a1 = CartanDatum::preset("A1").unwrap();
        assert_eq!(a1.orbit_numerator(&Weight(vec![0]), 1).unwrap(), vec![(rv(&[0]), 1), (rv(&[1]), -1)]);

        let a2 = CartanDatum::preset("A2").unwrap();
        let got = a2.orbit_numerator(&Weight(vec![0, 0]), 3).unwrap();
        let expected = vec![
            (rv(&[0, 0]), 1),
            (rv(&[1, 0]), -1),
            (rv(&[0, 1]), -1),
            (rv(&[2, 1]), 1),
            (rv(&[1, 2]), 1),
        ];
        assert_eq!(got, expected);
        assert_eq!(got, brute_orbit(&a2, &Weight(vec![0, 0]), 6, 3));
        let full = a2.orbit_numerator(&Weight(vec![0, 0]), 4).unwrap();
        assert_eq!(full.len(), 6);
        assert!(full.contains(&(rv(&[2, 2]), -1)));

        // s_1 o (-alpha_0) = -alpha_0 - 3 alpha_1 has height exactly 4
        let aff = CartanDatum::preset("A1~").unwrap();
        let got = aff.orbit_numerator(&Weight(vec![0, 0]), 3).unwrap();
        assert_eq!(got, vec![(rv(&[0, 0]), 1), (rv(&[1, 0]), -1), (rv(&[0, 1]), -1)]);
        let got = aff.orbit_numerator(&Weight(vec![0, 0]), 4).unwrap();
        assert_eq!(
            got,
            vec![(rv(&[0, 0]), 1), (rv(&[1, 0]), -1), (rv(&[0, 1]), -1), (rv(&[3, 1]), 1), (rv(&[1, 3]), 1)]
        );
        assert_eq!(got, brute_orbit(&aff, &Weight(vec![0, 0]), 3, 4));
    }

    #[test]
    fn orbit_matches_brute_force_on_presets() {
        for name in PRESETS {
            let d = CartanDatum::preset(name).unwrap();
            let lambdas = [Weight::zero(d.rank()), Weight(vec![1; d.rank()])];
            for lambda in lambdas {
                assert_eq!(
                    d.orbit_numerator(&lambda, 6).unwrap(),
                    brute_orbit(&d, &lambda, 7, 6),
                    "{name} {lambda}"
                );
            }
        }
    }

    #[test]
    fn orbit_rejects_nondominant() {
        let a2 = CartanDatum::preset("A2").unwrap();
        assert_eq!(
            a2.orbit_numerator(&Weight(vec![1, -1]), 3),
            Err(RootError::NonDominant { index: 1, value: -1 })
        );
    }

    #[test]
    fn peterson_finite_types() {
        let a1 = CartanDatum::preset("A1").unwrap();
        assert_eq!(a1.peterson_multiplicities(4), BTreeMap::from([(rv(&[1]), 1)]));
        let a2 = CartanDatum::preset("A2").unwrap();
        let m = a2.peterson_multiplicities(5);
        assert_eq!(m, BTreeMap::from([(rv(&[1, 0]), 1), (rv(&[0, 1]), 1), (rv(&[1, 1]), 1)]));
        let g2 = CartanDatum::preset("G2").unwrap();
        let roots: Vec<RootVec> = g2.peterson_multiplicities(8).into_keys().collect();
        let mut expected = vec![rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1]), rv(&[1, 2]), rv(&[1, 3]), rv(&[2, 3])];
        expected.sort();
        assert_eq!(roots, expected);
    }

    #[test]
    fn peterson_affine_a1() {
        let aff = CartanDatum::preset("A1~").unwrap();
        let m = aff.peterson_multiplicities(6);
        // real roots n*delta + alpha_i, imaginary roots n*delta with multiplicity 1
        for (beta, mult) in &m {
            let (a, b) = (beta.0[0], beta.0[1]);
            assert!((a - b).abs() <= 1, "{beta}");
            assert_eq!(*mult, 1);
        }
        assert_eq!(m.len(), 2 + 1 + 2 + 1 + 2 + 1); // heights 1..=6
        assert_eq!(m.get(&rv(&[2, 2])), Some(&1));
    }

    proptest! {
        #[test]
        fn form_is_symmetric_and_invariant(
            name in prop::sample::select(PRESETS.to_vec()),
            a in prop::collection::vec(-3i64..4, 3),
            b in prop::collection::vec(-3i64..4, 3),
            i in 0usize..3,
        ) {
            let d = CartanDatum::preset(name).unwrap();
            let n = d.rank();
            let g = RootVec(a[..n].to_vec());
            let h = RootVec(b[..n].to_vec());
            let i = i % n;
            prop_assert_eq!(d.form(&g, &h), d.form(&h, &g));
            prop_assert_eq!(d.form(&d.reflect_root(i, &g), &d.reflect_root(i, &h)), d.form(&g, &h));
        }

        #[test]
        fn dot_reflect_is_involution(
            name in prop::sample::select(PRESETS.to_vec()),
            p in prop::collection::vec(-3i64..4, 3),
            off in prop::collection::vec(-3i64..4, 3),
            i in 0usize..3,
        ) {
            let d = CartanDatum::preset(name).unwrap();
            let n = d.rank();
            let w = AnchoredWeight { anchor: Weight(p[..n].to_vec()), offset: RootVec(off[..n].to_vec()) };
            let i = i % n;
            prop_assert_eq!(d.dot_reflect(i, &d.dot_reflect(i, &w)), w);
        }
    }
}
