//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits nonzero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use qkac::borel::{
    r_plus_from_coproduct, r_plus_word, r_prime_plus_from_coproduct, r_prime_plus_word, words_of_content,
};
use qkac::charring::{
    denominator, denominator_identity_check, extract_multiplicities, skew_invariance_check, weyl_kac,
};
use qkac::drinfeld::{twisted_kernel_check, RawPairing, Strip};
use qkac::linalg::bareiss_det;
use qkac::rootdata::PRESETS;
use qkac::{Borel, CartanDatum, Drinfeld, DrinfeldError, LaurentInt, RootVec, SpecPoint, Verma, Weight};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn borel(name: &str, h: i64) -> Arc<Borel> {
    Arc::new(Borel::new(Arc::new(CartanDatum::preset(name).unwrap()), h))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sweep() -> Vec<(&'static str, i64)> {
    vec![("A1", 6), ("A2", 6), ("B2", 6), ("G2", 6), ("A3", 4), ("A1~", 5), ("A2~tw", 5)]
}

fn fail_if(errors: Vec<String>, ok: String) -> Outcome {
    if errors.is_empty() {
        Ok(ok)
    } else {
        Err(errors.into_iter().take(5).collect::<Vec<_>>().join("; "))
    }
}

/// Nonzero determinants and trivial radicals at z = 2, 1/3.
fn nondegeneracy() -> Outcome {
    let zs = [SpecPoint::Rational(rat(2, 1)), SpecPoint::Rational(rat(1, 3))];
    let mut errors = Vec::new();
    let mut count = 0;
    for (name, h) in sweep() {
        let dr = Drinfeld::new(borel(name, h));
        let boxed = dr.datum().positive_box(h);
        let bad: Vec<String> = boxed
            .par_iter()
            .flat_map(|g| {
                let mut bad = Vec::new();
                let (_, p) = dr.normalized_matrix(g, Strip::Left).unwrap();
                if bareiss_det(p, LaurentInt::one()).is_zero() {
                    bad.push(format!("{name} det vanishes at {g}"));
                }
                for z in &zs {
                    let r = dr.radical_at(g, z).unwrap();
                    if r.kernel_dim != 0 {
                        bad.push(format!("{name} radical at {g}, z={z}: {}", r.kernel_dim));
                    }
                }
                bad
            })
            .collect();
        count += boxed.len();
        errors.extend(bad);
    }
    fail_if(errors, format!("{count} graded pieces"))
}

/// Each determinant is a signed power of q times cyclotomic factors.
fn cyclotomic_units() -> Outcome {
    let mut errors = Vec::new();
    let mut count = 0;
    for (name, h) in sweep() {
        let dr = Drinfeld::new(borel(name, h));
        let boxed = dr.datum().positive_box(h);
        let bad: Vec<String> = boxed
            .par_iter()
            .filter_map(|g| match dr.pairing_matrix(g) {
                Ok(pd) if pd.certificate.reconstruct() == pd.det => None,
                Ok(_) => Some(format!("{name} certificate does not reconstruct det at {g}")),
                Err(DrinfeldError::NotAUnit { residual, .. }) => Some(format!("{name} {g} residual {residual}")),
                Err(e) => Some(format!("{name} {g}: {e}")),
            })
            .collect();
        count += boxed.len();
        errors.extend(bad);
    }
    fail_if(errors, format!("{count} certificates"))
}

fn test_weights(rank: usize) -> Vec<Weight> {
    let mut out = vec![Weight(vec![0; rank])];
    for i in 0..rank {
        let mut p = vec![0; rank];
        p[i] = 1;
        out.push(Weight(p));
    }
    if rank > 1 {
        out.push(Weight(vec![1; rank]));
    }
    out
}

/// Weyl-Kac coefficients against Gram ranks of the contravariant form.
fn character_formula() -> Outcome {
    let zs = [rat(2, 1), rat(1, 3)];
    let mut errors = Vec::new();
    let mut count = 0;
    for (name, h) in [("A1", 4), ("A2", 4), ("B2", 4), ("A1~", 3)] {
        let b = borel(name, h);
        let d = b.datum().clone();
        let dims = b.dim_series(h).unwrap();
        let denom = denominator(d.rank(), &extract_multiplicities(&dims).unwrap(), h);
        for lambda in test_weights(d.rank()) {
            let v = Verma::new(b.clone(), lambda.clone()).unwrap();
            let witness = v.integrability_witness().unwrap();
            if !witness.iter().all(|w| w.pass) {
                errors.push(format!("{name} witness fails for {lambda:?}"));
            }
            let ch = weyl_kac(&d, &lambda, &denom).unwrap();
            for g in std::iter::once(RootVec::zero(d.rank())).chain(d.positive_box(h)) {
                let gram = v.gram_matrix(&g, &zs).unwrap();
                let expected = ch.get(&g);
                for (z, r) in &gram.rank_at_z {
                    count += 1;
                    if BigInt::from(*r) != expected {
                        errors.push(format!("{name} {lambda:?} {g} z={z}: rank {r}, character {expected}"));
                    }
                }
            }
        }
    }
    fail_if(errors, format!("{count} coefficient comparisons"))
}

/// Numerator of the trivial character times the dimension series is 1.
fn denominator_identity() -> Outcome {
    let mut errors = Vec::new();
    for name in PRESETS {
        let d = CartanDatum::preset(name).unwrap();
        let h = if d.rank() <= 2 { 8 } else { 5 };
        let dims = borel(name, h).dim_series(h).unwrap();
        let r = denominator_identity_check(&d, &dims).unwrap();
        if !r.pass {
            errors.push(format!("{name} H={h}: mismatches {:?}", r.mismatches));
        }
    }
    fail_if(errors, format!("{} presets", PRESETS.len()))
}

/// `s_i o D = -D` on the verification window.
fn skew_invariance() -> Outcome {
    let h = 6;
    let mut errors = Vec::new();
    let mut count = 0;
    for name in PRESETS {
        let b = borel(name, h);
        let d = b.datum().clone();
        let dims = b.dim_series(h).unwrap();
        let denom = dims.invert().unwrap();
        for i in 0..d.rank() {
            let r = skew_invariance_check(&d, i, &denom);
            count += r.window;
            if !r.pass || r.window == 0 {
                errors.push(format!("{name} s_{i}: mismatches {:?}", r.mismatches));
            }
        }
    }
    fail_if(errors, format!("{count} window coefficients"))
}

/// Multiplicities read off the dimensions against the Peterson recurrence.
fn multiplicities() -> Outcome {
    let mut errors = Vec::new();
    for name in PRESETS {
        let d = CartanDatum::preset(name).unwrap();
        let h = if d.rank() <= 2 { 6 } else { 5 };
        let dims = borel(name, h).dim_series(h).unwrap();
        let extracted = extract_multiplicities(&dims).unwrap();
        let peterson = d.peterson_multiplicities(h);
        if extracted != peterson {
            errors.push(format!("{name}: extracted {extracted:?} vs {peterson:?}"));
        }
        let expected_roots = match name {
            "A2" => Some(3),
            "B2" => Some(4),
            "G2" => Some(6),
            _ => None,
        };
        if let Some(n) = expected_roots {
            if extracted.len() != n || extracted.values().any(|&m| m != 1) {
                errors.push(format!("{name}: root multiplicities {extracted:?}"));
            }
        }
    }
    fail_if(errors, format!("{} presets", PRESETS.len()))
}

/// The Casimir acts on each weight space by the predicted power of z.
fn casimir() -> Outcome {
    let z = rat(2, 1);
    let mut errors = Vec::new();
    let mut count = 0;
    for name in ["A1", "A2"] {
        let b = borel(name, 3);
        let d = b.datum().clone();
        let dr = Drinfeld::new(b.clone());
        let weights: Vec<Weight> = test_weights(d.rank()).into_iter().filter(|w| w.0.iter().sum::<i64>() <= 1).collect();
        for lambda in weights {
            let v = Verma::new(b.clone(), lambda.clone()).unwrap();
            for g in std::iter::once(RootVec::zero(d.rank())).chain(d.positive_box(3)) {
                let r = v.casimir_check(&dr, &g, &z).unwrap();
                count += 1;
                if !(r.pass && r.path_independent) {
                    errors.push(format!("{name} {lambda:?} {g}: {:?}", r.deviations));
                }
            }
        }
    }
    fail_if(errors, format!("{count} weight spaces"))
}

/// Strip consistency, Serre vanishing, divided-power factorization and the
/// coproduct oracle for the skew derivations.
fn pairing_axioms() -> Outcome {
    let mut errors = Vec::new();
    let mut count = 0usize;
    for name in PRESETS {
        let d = CartanDatum::preset(name).unwrap();
        let h = if d.rank() <= 2 { 5 } else { 4 };
        let b = borel(name, h);
        let dr = Drinfeld::new(b.clone());
        let mut raw = RawPairing::new(&d, Strip::Left);
        for g in d.positive_box(h) {
            let (_, left) = dr.normalized_matrix(&g, Strip::Left).unwrap();
            let (_, right) = dr.normalized_matrix(&g, Strip::Right).unwrap();
            if left != right {
                errors.push(format!("{name} strips differ at {g}"));
            }
            let span = b.serre_span(&g).unwrap();
            let words = words_of_content(&g);
            for s in &span {
                for w in &words {
                    let y = qkac::WordComb::word(w);
                    count += 2;
                    if !raw.comb(s, &y).is_zero() || !raw.comb(&y, s).is_zero() {
                        errors.push(format!("{name} Serre element pairs nontrivially at {g}"));
                    }
                }
                for i in 0..d.rank() {
                    let lower = g.plus_simple(i, -1);
                    if lower.is_nonneg() {
                        let lb = b.component_basis(&lower).unwrap();
                        let r = lb.reduce_comb(&qkac::borel::r_plus(&d, i, s));
                        let rp = lb.reduce_comb(&qkac::borel::r_prime_plus(&d, i, s));
                        if r.iter().chain(&rp).any(|c| !c.is_zero()) {
                            errors.push(format!("{name} derivation {i} leaves the Serre ideal at {g}"));
                        }
                    }
                }
            }
            for w in &words {
                for i in 0..d.rank() {
                    count += 1;
                    if r_plus_word(&d, i, w) != r_plus_from_coproduct(&d, i, w)
                        || r_prime_plus_word(&d, i, w) != r_prime_plus_from_coproduct(&d, i, w)
                    {
                        errors.push(format!("{name} coproduct oracle differs on {w:?}, i={i}"));
                    }
                }
            }
        }
        for row in twisted_kernel_check(&dr, h).unwrap() {
            count += row.instances;
            if !row.pass {
                errors.push(format!("{name} divided-power identity fails: {row:?}"));
            }
        }
    }
    fail_if(errors, format!("{count} instances"))
}

/// Phi_4 divides the A1 determinant at 2 alpha and the form degenerates at q = i.
fn root_of_unity_obstruction() -> Outcome {
    let dr = Drinfeld::new(borel("A1", 2));
    let g = RootVec(vec![2]);
    let pd = dr.pairing_matrix(&g).map_err(|e| e.to_string())?;
    let e4 = pd.certificate.exponent_of(4);
    let r = dr.radical_at(&g, &SpecPoint::RootOfUnity(4)).map_err(|e| e.to_string())?;
    if e4 != 0 && r.kernel_dim == 1 {
        Ok(format!("certificate {}, kernel dimension 1 at q = i", pd.certificate))
    } else {
        Err(format!("Phi4 exponent {e4}, kernel dimension {}", r.kernel_dim))
    }
}

/// Non-degeneracy over F_5(t) with q = t.
fn positive_characteristic() -> Outcome {
    let h = 4;
    let dr = Drinfeld::new(borel("A2", h));
    let mut errors = Vec::new();
    let boxed = dr.datum().positive_box(h);
    for g in &boxed {
        let r = dr.radical_at(g, &SpecPoint::FunctionField(5)).map_err(|e| e.to_string())?;
        if r.kernel_dim != 0 {
            errors.push(format!("{g}: kernel dimension {}", r.kernel_dim));
        }
    }
    fail_if(errors, format!("{} graded pieces over F_5(t)", boxed.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 non-degeneracy of the pairing", nondegeneracy),
        ("2 determinants are cyclotomic units", cyclotomic_units),
        ("3 character formula against Gram ranks", character_formula),
        ("4 denominator identity", denominator_identity),
        ("5 skew invariance of the denominator", skew_invariance),
        ("6 root multiplicities", multiplicities),
        ("7 Casimir eigenvalues", casimir),
        ("8 pairing axiom suite", pairing_axioms),
        ("9 root-of-unity obstruction", root_of_unity_obstruction),
        ("10 positive characteristic", positive_characteristic),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({detail}, {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
