//! `qkac`: batch front end for the exact kernel.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use qkac::charring::{
    denominator, denominator_identity_check, extract_multiplicities, skew_invariance_check, verma_char, weyl_kac,
};
use qkac::drinfeld::RadicalOutcome;
use qkac::qarith::{is_root_of_unity, parse_rational};
use qkac::{Borel, CartanDatum, CharSeries, Drinfeld, RootVec, SpecPoint, Verma, Weight};

use report::Summary;

#[derive(Parser)]
#[command(name = "qkac", version, about = "Exact checks for quantized Kac-Moody algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the datum and print the symmetric form on simple roots.
    Info(Common),
    /// Dimensions of the graded pieces of the negative half.
    Dims(Common),
    /// Root multiplicities from dimensions, compared with the Peterson recurrence.
    Mults(Common),
    /// Dump pairing matrices.
    Pairing {
        #[command(flatten)]
        common: Common,
        /// Restrict to one content, e.g. `1,1`.
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Determinant certificates as products of cyclotomic polynomials.
    Certify(Common),
    /// Run the full verification suite.
    Verify(Common),
    /// Weyl-Kac character of an integrable module.
    Char(Common),
    /// Character of a Verma module.
    VermaChar(Common),
    /// Casimir eigenvalue checks on a Verma module.
    Casimir(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Preset name: A1, A2, B2, G2, A3, A1~, A2~tw.
    #[arg(long, conflicts_with = "datum")]
    preset: Option<String>,
    /// Cartan datum JSON file.
    #[arg(long)]
    datum: Option<PathBuf>,
    /// Height bound (default 6 for rank <= 2, else 4).
    #[arg(long)]
    height: Option<i64>,
    /// Specialization, integer or fraction; repeatable (default 2 and 1/3).
    #[arg(long = "z", allow_hyphen_values = true)]
    z: Vec<String>,
    /// Also check over F_p(t) with q = t.
    #[arg(long)]
    prime: Option<u64>,
    /// Weight coordinates `<lambda, h_i>`, comma separated (default 0).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Directory for `<command>.tsv` and `summary.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Invalid input, reported with exit status 2.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

struct Config {
    datum: Arc<CartanDatum>,
    height: i64,
    zs: Vec<BigRational>,
    prime: Option<u64>,
    lambda: Option<Weight>,
}

impl Config {
    fn load(c: &Common) -> Result<Self, Invalid> {
        let datum = match (&c.preset, &c.datum) {
            (Some(p), None) => CartanDatum::preset(p)?,
            (None, Some(path)) => CartanDatum::from_file(path)?,
            _ => return Err(Invalid("exactly one of --preset and --datum is required".into())),
        };
        let height = c.height.unwrap_or(if datum.rank() <= 2 { 6 } else { 4 });
        if height < 1 {
            return Err(Invalid(format!("height must be at least 1, got {height}")));
        }
        let raw: Vec<&str> = if c.z.is_empty() { vec!["2", "1/3"] } else { c.z.iter().map(String::as_str).collect() };
        let zs = raw
            .iter()
            .map(|s| match parse_rational(s) {
                Some(z) if z != BigRational::from_integer(0.into()) => Ok(z),
                Some(_) => Err(Invalid("specialization z must be nonzero".into())),
                None => Err(Invalid(format!("cannot parse specialization {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(p) = c.prime {
            if p < 2 || (2..p).take_while(|k| k * k <= p).any(|k| p % k == 0) {
                return Err(Invalid(format!("--prime {p} is not prime")));
            }
        }
        let lambda = match &c.lambda {
            None => None,
            Some(s) => {
                let v = s
                    .split(',')
                    .map(|t| t.trim().parse::<i64>().map_err(|_| Invalid(format!("cannot parse weight {s:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if v.len() != datum.rank() {
                    return Err(Invalid(format!("weight has {} entries, rank is {}", v.len(), datum.rank())));
                }
                Some(Weight(v))
            }
        };
        Ok(Config { datum: Arc::new(datum), height, zs, prime: c.prime, lambda })
    }

    fn lambda(&self) -> Weight {
        self.lambda.clone().unwrap_or_else(|| Weight::zero(self.datum.rank()))
    }

    fn dominant_lambda(&self) -> Result<Weight, Invalid> {
        let l = self.lambda();
        l.check_dominant()?;
        Ok(l)
    }

    fn borel(&self) -> Arc<Borel> {
        Arc::new(Borel::new(self.datum.clone(), self.height))
    }

    fn summary(&self, command: &str) -> Summary {
        Summary::new(command, &self.datum.name, self.height)
    }

    fn denominator(&self, borel: &Borel) -> Result<CharSeries, Invalid> {
        let dims = borel.dim_series(self.height)?;
        Ok(denominator(self.datum.rank(), &extract_multiplicities(&dims)?, self.height))
    }

    /// The z-list without roots of unity, recording a skipped check for each.
    fn usable_zs(&self, s: &mut Summary) -> Vec<BigRational> {
        let mut out = Vec::new();
        for z in &self.zs {
            if is_root_of_unity(z) {
                s.skip(format!("z={z}"), "root of unity; nondegeneracy is only claimed away from roots of unity");
            } else {
                out.push(z.clone());
            }
        }
        out
    }

    fn points(&self) -> Vec<SpecPoint> {
        let mut pts: Vec<SpecPoint> = self.zs.iter().cloned().map(SpecPoint::Rational).collect();
        pts.extend(self.prime.map(SpecPoint::FunctionField));
        pts
    }
}

fn info(cfg: &Config) -> Summary {
    let mut s = cfg.summary("info");
    let d = &cfg.datum;
    for i in 0..d.rank() {
        for j in 0..d.rank() {
            s.row(&[&i, &j, &d.cartan[i][j], &d.simple_form(i, j)]);
        }
    }
    s.check("datum", true, format!("rank {}, symmetrizer {:?}", d.rank(), d.sym));
    let kind = if d.is_finite_type() { "finite" } else { "not finite" };
    s.check("type", true, kind);
    s
}

fn dims(cfg: &Config) -> Result<Summary, Invalid> {
    let mut s = cfg.summary("dims");
    let series = cfg.borel().dim_series(cfg.height)?;
    s.tsv = series.to_tsv(&cfg.datum);
    s.check("dims", true, format!("{} contents", cfg.datum.positive_box(cfg.height).len() + 1));
    Ok(s)
}

fn mults(cfg: &Config) -> Result<Summary, Invalid> {
    let mut s = cfg.summary("mults");
    let series = cfg.borel().dim_series(cfg.height)?;
    let peterson = cfg.datum.peterson_multiplicities(cfg.height);
    match extract_multiplicities(&series) {
        Ok(extracted) => {
            let mut bad = Vec::new();
            for g in cfg.datum.positive_box(cfg.height) {
                let (e, p) = (extracted.get(&g).copied().unwrap_or(0), peterson.get(&g).copied().unwrap_or(0));
                if e != 0 || p != 0 {
                    s.row(&[&g.tsv(), &e, &p]);
                }
                if e != p {
                    bad.push(g.to_string());
                }
            }
            s.check("multiplicities", bad.is_empty(), if bad.is_empty() { "extracted = Peterson".into() } else { format!("differ at {}", bad.join(" ")) });
        }
        Err(e) => s.check("multiplicities", false, e.to_string()),
    }
    Ok(s)
}

fn pairing(cfg: &Config, gamma: Option<&str>) -> Result<Summary, Invalid> {
    let mut s = cfg.summary("pairing");
    let contents = match gamma {
        Some(g) => {
            let v = g
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| Invalid(format!("cannot parse content {g:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let g = RootVec(v);
            if g.rank() != cfg.datum.rank() || !g.is_nonneg() || g.height() > cfg.height {
                return Err(Invalid(format!("content {g} is not in the height box")));
            }
            vec![g]
        }
        None => cfg.datum.positive_box(cfg.height),
    };
    let dr = Drinfeld::new(cfg.borel());
    let mut bad = Vec::new();
    for g in contents {
        match dr.pairing_matrix(&g) {
            Ok(pd) => {
                for (r, x) in pd.words.iter().enumerate() {
                    for (c, y) in pd.words.iter().enumerate() {
                        s.row(&[&g.tsv(), &qkac::borel::word_label(x), &qkac::borel::word_label(y), &pd.matrix[r][c]]);
                    }
                }
            }
            Err(e) => bad.push(format!("{g}: {e}")),
        }
    }
    s.check("pairing", bad.is_empty(), if bad.is_empty() { "all matrices computed".into() } else { bad.join("; ") });
    Ok(s)
}

fn certify(cfg: &Config) -> Summary {
    let mut s = cfg.summary("certify");
    let dr = Drinfeld::new(cfg.borel());
    let boxed = cfg.datum.positive_box(cfg.height);
    let rows: Vec<Result<String, String>> = boxed
        .par_iter()
        .map(|g| dr.pairing_matrix(g).map(|pd| pd.certificate_tsv()).map_err(|e| e.to_string()))
        .collect();
    let mut bad = Vec::new();
    for r in rows {
        match r {
            Ok(line) => {
                s.tsv.push_str(&line);
                s.tsv.push('\n');
            }
            Err(e) => bad.push(e),
        }
    }
    let detail = if bad.is_empty() { format!("{} determinants are cyclotomic units", boxed.len()) } else { bad.join("; ") };
    s.check("certificates", bad.is_empty(), detail);
    s
}

fn nondegeneracy(cfg: &Config, s: &mut Summary) {
    let dr = Drinfeld::new(cfg.borel());
    let report = dr.verify_nondegenerate(cfg.height, &cfg.points());
    for w in &report.warnings {
        s.skip("radical", w.clone());
    }
    for row in &report.rows {
        let cert = match &row.certificate {
            Ok(line) => line.rsplit('\t').next().unwrap_or("-").to_string(),
            Err(e) => format!("error: {e}"),
        };
        for (z, o) in &row.radicals {
            let k = match o {
                RadicalOutcome::KernelDim(k) => k.to_string(),
                RadicalOutcome::Skipped => "skipped".to_string(),
                RadicalOutcome::Error(e) => format!("error: {e}"),
            };
            s.row(&[&row.gamma.tsv(), &row.dim, &cert, z, &k]);
        }
    }
    let failures: Vec<String> = report.failures().iter().map(|r| r.gamma.to_string()).collect();
    let detail = if failures.is_empty() {
        format!("{} contents, points {:?}", report.rows.len(), cfg.points().iter().map(|p| p.to_string()).collect::<Vec<_>>())
    } else {
        format!("fails at {}", failures.join(" "))
    };
    s.check("nondegeneracy", failures.is_empty(), detail);
}

fn character_checks(cfg: &Config, s: &mut Summary, borel: &Arc<Borel>, denom: &CharSeries, zs: &[BigRational]) -> Result<(), Invalid> {
    let d = &cfg.datum;
    let weights = match &cfg.lambda {
        Some(l) => vec![l.clone()],
        None => {
            let mut ws = vec![Weight::zero(d.rank())];
            for i in 0..d.rank() {
                let mut p = vec![0; d.rank()];
                p[i] = 1;
                ws.push(Weight(p));
            }
            ws
        }
    };
    let height = cfg.height.min(4);
    for lambda in weights {
        lambda.check_dominant()?;
        let v = Verma::new(borel.clone(), lambda.clone())?;
        let witness = v.integrability_witness()?;
        let wpass = witness.iter().all(|w| w.pass);
        s.check(format!("witness {lambda}"), wpass, format!("{} simple directions", witness.len()));
        let ch = match weyl_kac(d, &lambda, denom) {
            Ok(c) => c,
            Err(e) => {
                s.check(format!("character {lambda}"), false, e.to_string());
                continue;
            }
        };
        let mut bad = Vec::new();
        let mut boxed = vec![RootVec::zero(d.rank())];
        boxed.extend(d.positive_box(height));
        for g in &boxed {
            let gram = v.gram_matrix(g, zs)?;
            for (z, r) in &gram.rank_at_z {
                if BigInt::from(*r) != ch.get(g) {
                    bad.push(format!("{g} at z={z}: rank {r}, coefficient {}", ch.get(g)));
                }
            }
        }
        let detail = if bad.is_empty() { format!("{} contents up to height {height}", boxed.len()) } else { bad.join("; ") };
        s.check(format!("character {lambda}"), bad.is_empty(), detail);
    }
    Ok(())
}

fn casimir_rows(cfg: &Config, s: &mut Summary, borel: &Arc<Borel>, lambda: &Weight, height: i64, zs: &[BigRational]) -> Result<(), Invalid> {
    let d = &cfg.datum;
    let dr = Drinfeld::new(borel.clone());
    let v = Verma::new(borel.clone(), lambda.clone())?;
    let mut boxed = vec![RootVec::zero(d.rank())];
    boxed.extend(d.positive_box(height));
    let mut bad = Vec::new();
    for z in zs {
        for g in &boxed {
            let r = v.casimir_check(&dr, g, z)?;
            s.row(&[&g.tsv(), z, &r.exponent, &r.dim, &r.path_independent, &r.pass]);
            if !(r.pass && r.path_independent) {
                bad.push(format!("{g} at z={z}"));
            }
        }
    }
    let detail = if bad.is_empty() { format!("{} weight spaces", boxed.len() * zs.len()) } else { format!("fails at {}", bad.join(", ")) };
    s.check(format!("casimir {lambda}"), bad.is_empty(), detail);
    Ok(())
}

fn verify(cfg: &Config) -> Result<Summary, Invalid> {
    let mut s = cfg.summary("verify");
    let d = &cfg.datum;
    let borel = cfg.borel();
    nondegeneracy(cfg, &mut s);

    let dims = borel.dim_series(cfg.height)?;
    match extract_multiplicities(&dims) {
        Ok(m) => {
            let peterson = d.peterson_multiplicities(cfg.height);
            s.check("multiplicities", m == peterson, format!("{} positive roots with multiplicity", m.len()));
        }
        Err(e) => s.check("multiplicities", false, e.to_string()),
    }
    match denominator_identity_check(d, &dims) {
        Ok(r) => s.check("denominator identity", r.pass, format!("window {} points, mismatches {:?}", r.window, r.mismatches)),
        Err(e) => s.check("denominator identity", false, e.to_string()),
    }
    let denom = match dims.invert() {
        Ok(x) => x,
        Err(e) => {
            s.check("denominator", false, e.to_string());
            return Ok(s);
        }
    };
    for i in 0..d.rank() {
        let r = skew_invariance_check(d, i, &denom);
        s.check(format!("skew invariance s_{i}"), r.pass, format!("window {} points, mismatches {:?}", r.window, r.mismatches));
    }
    let zs = cfg.usable_zs(&mut s);
    character_checks(cfg, &mut s, &borel, &denom, &zs)?;
    let lambda = cfg.dominant_lambda()?;
    let mut scratch = cfg.summary("casimir");
    casimir_rows(cfg, &mut scratch, &borel, &lambda, cfg.height.min(3), &zs)?;
    s.checks.extend(scratch.checks);
    Ok(s)
}

fn character(cfg: &Config, verma: bool) -> Result<Summary, Invalid> {
    let mut s = cfg.summary(if verma { "verma-char" } else { "char" });
    let borel = cfg.borel();
    let denom = cfg.denominator(&borel)?;
    let result = if verma {
        verma_char(&cfg.lambda(), &denom)
    } else {
        weyl_kac(&cfg.datum, &cfg.dominant_lambda()?, &denom)
    };
    match result {
        Ok(ch) => {
            s.tsv = ch.to_tsv(&cfg.datum);
            if !verma {
                let asym = qkac::charring::weyl_symmetry_mismatches(&cfg.datum, &ch);
                s.check("weyl symmetry", asym.is_empty(), format!("mismatches {asym:?}"));
            }
            s.check("character", true, format!("anchored at {}", cfg.lambda()));
        }
        Err(e) => s.check("character", false, e.to_string()),
    }
    Ok(s)
}

fn casimir(cfg: &Config) -> Result<Summary, Invalid> {
    let mut s = cfg.summary("casimir");
    let borel = cfg.borel();
    let zs = cfg.usable_zs(&mut s);
    casimir_rows(cfg, &mut s, &borel, &cfg.lambda(), cfg.height, &zs)?;
    Ok(s)
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Info(c)
            | Command::Dims(c)
            | Command::Mults(c)
            | Command::Certify(c)
            | Command::Verify(c)
            | Command::Char(c)
            | Command::VermaChar(c)
            | Command::Casimir(c) => c,
            Command::Pairing { common, .. } => common,
        }
    }
}

fn run(cli: &Cli) -> Result<Summary, Invalid> {
    let cfg = Config::load(cli.command.common())?;
    match &cli.command {
        Command::Info(_) => Ok(info(&cfg)),
        Command::Dims(_) => dims(&cfg),
        Command::Mults(_) => mults(&cfg),
        Command::Pairing { gamma, .. } => pairing(&cfg, gamma.as_deref()),
        Command::Certify(_) => Ok(certify(&cfg)),
        Command::Verify(_) => verify(&cfg),
        Command::Char(_) => character(&cfg, false),
        Command::VermaChar(_) => character(&cfg, true),
        Command::Casimir(_) => casimir(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QKAC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let out = cli.command.common().out.clone();
    match run(&cli) {
        Ok(summary) => {
            if let Err(e) = summary.emit(out.as_ref()) {
                eprintln!("qkac: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if summary.failed() {
                for c in summary.checks.iter().filter(|c| c.status == report::Status::Fail) {
                    eprintln!("qkac: check {} failed: {}", c.name, c.detail);
                }
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Invalid(msg)) => {
            eprintln!("qkac: invalid input: {msg}");
            ExitCode::from(2)
        }
    }
}
