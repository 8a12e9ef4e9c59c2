//! Named property suites run by `interlace verify`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{dobrowolski_check, rank_bounds, KissingTable};
use crate::engine::{certify_non_interlacing, enumerate_interlacers, SearchConfig};
use crate::exact::{discriminant, is_irreducible, is_totally_real, IntPolynomial};
use crate::numberfield::{cubic_family, min_span_search, ratio_to_f64, real_cyclotomic_minpoly};
use crate::polytope::{count_c_points, count_k_points};

pub const SUITES: [&str; 9] = [
    "eq6",
    "prop12",
    "prop16",
    "cor12",
    "thm2",
    "thm3-sample",
    "quintic",
    "spans",
    "cubic-family",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub checked: u64,
    pub detail: String,
    pub counterexamples: Vec<String>,
}

impl SuiteResult {
    fn new(suite: &str) -> Self {
        SuiteResult {
            suite: suite.into(),
            passed: true,
            checked: 0,
            detail: String::new(),
            counterexamples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.counterexamples.len() < 20 {
                self.counterexamples.push(what());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

pub fn run_suite(name: &str) -> Result<Vec<SuiteResult>, UnknownSuite> {
    if name == "all" {
        return Ok(SUITES.iter().map(|s| run_one(s)).collect());
    }
    if SUITES.contains(&name) {
        Ok(vec![run_one(name)])
    } else {
        Err(UnknownSuite(name.to_string()))
    }
}

fn run_one(name: &str) -> SuiteResult {
    match name {
        "eq6" => sqrt_family(500),
        "prop12" => lambda_identities(),
        "prop16" => discriminant_floor(),
        "cor12" => polytope_counts(),
        "thm2" => real_cyclotomic(),
        "thm3-sample" => sampled_fields(200, 0x5eed),
        "quintic" => quintic(),
        "spans" => spans(),
        "cubic-family" => cubic_family_suite(),
        _ => unreachable!("suite list is closed"),
    }
}

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

fn fast() -> SearchConfig {
    SearchConfig {
        certificates: false,
        ..SearchConfig::default()
    }
}

fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// Interlacer count of `x^2 - D` equals `2 floor(sqrt D) + 1`.
pub fn sqrt_family(max_d: u64) -> SuiteResult {
    let mut r = SuiteResult::new("eq6");
    for d in (2..=max_d).filter(|&d| !is_square(d)) {
        let f = p(&[1, 0, -(d as i64)]);
        let expected = 2 * d.sqrt() + 1;
        match enumerate_interlacers(&f, &fast()) {
            Ok(set) => r.check(set.count() as u64 == expected, || {
                format!("D={d}: count {} expected {expected}", set.count())
            }),
            Err(e) => r.check(false, || format!("D={d}: {e}")),
        }
    }
    r.detail = format!("non-square D in [2, {max_d}]");
    r
}

/// Monic, totally real polynomials used by the identity suites.
pub fn identity_corpus() -> Vec<IntPolynomial> {
    let mut v = vec![
        p(&[1, -1, -1]),
        p(&[1, 0, -2]),
        p(&[1, 0, -13]),
        p(&[1, -1, -29]),
        p(&[1, -3, 2]),
        p(&[1, 0, -4, 0, 2]),
        p(&[1, 0, -10, 0, 1]),
        p(&[1, -2, -9, 4, 15, 3]),
        p(&[1, -1, -10, 1]),
    ];
    v.extend((0..=5).map(cubic_family));
    v.extend([5, 7, 9, 11, 13, 15, 16].map(|n| real_cyclotomic_minpoly(n).unwrap()));
    v
}

/// `|Res/Disc| <= d^-d` exactly, `prod lambda = (-1)^{d(d-1)/2} Res/Disc`,
/// and the lambda enclosures agree with both.
pub fn lambda_identities() -> SuiteResult {
    let mut r = SuiteResult::new("prop12");
    for f in identity_corpus() {
        let d = f.degree().unwrap();
        let bound = BigRational::new(BigInt::one(), BigInt::from(d).pow(d as u32));
        let set = match enumerate_interlacers(&f, &SearchConfig::default()) {
            Ok(s) => s,
            Err(e) => {
                r.check(false, || format!("{f}: {e}"));
                continue;
            }
        };
        for m in &set.members {
            let c = m.certificate.as_ref().expect("certificates requested");
            let sign_ok = if (d * (d - 1) / 2) % 2 == 0 {
                c.product == c.res_over_disc
            } else {
                c.product == -c.res_over_disc.clone()
            };
            let ok = c.all_positive()
                && c.res_over_disc.abs() <= bound
                && c.product.is_positive()
                && sign_ok
                && c.product_enclosure().contains(&c.product)
                && c.sum_enclosure().contains(&BigRational::one());
            r.check(ok, || format!("f={f} g={}", m.poly()));
        }
    }
    r.detail = "all members of the identity corpus".into();
    r
}

/// Every irreducible interlaced polynomial has `|Disc| >= d^d`.
pub fn discriminant_floor() -> SuiteResult {
    let mut r = SuiteResult::new("prop16");
    for f in identity_corpus() {
        if !is_irreducible(&f).unwrap_or(false) {
            continue;
        }
        let Ok(set) = enumerate_interlacers(&f, &fast()) else {
            r.check(false, || format!("{f}: enumeration failed"));
            continue;
        };
        if set.count() == 0 {
            continue;
        }
        let rep = dobrowolski_check(&f, true);
        r.check(matches!(rep, Ok(ref x) if !x.is_violation()), || {
            format!("{f}: {rep:?}")
        });
    }
    r.detail = "|Disc f| >= d^d for interlaced irreducible members of the identity corpus".into();
    r
}

/// Degree 2..4 corpus for the `C(f)` / `K(f)` point count comparison.
pub fn polytope_corpus() -> Vec<IntPolynomial> {
    let mut v: Vec<IntPolynomial> = Vec::new();
    for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 17, 19] {
        v.push(p(&[1, 0, -d]));
    }
    for d in [1i64, 2, 3, 5, 7] {
        v.push(p(&[1, -1, -d]));
    }
    v.push(p(&[1, -3, 2]));
    for k in 0..=4 {
        v.push(cubic_family(k));
    }
    for c in [
        &[1i64, 0, -3, 1][..],
        &[1, -1, -2, 1],
        &[1, 0, -4, 1],
        &[1, -1, -3, 1],
        &[1, 0, -5, 1],
        &[1, 0, -4, 0, 2],
        &[1, 0, -6, 0, 7],
        &[1, 0, -8, 0, 14],
        &[1, 0, -10, 0, 1],
        &[1, -1, -4, 4, 1],
        &[1, 0, -5, 0, 5],
    ] {
        v.push(p(c));
    }
    v
}

pub fn polytope_counts() -> SuiteResult {
    let mut r = SuiteResult::new("cor12");
    for f in polytope_corpus() {
        let (c, k) = (count_c_points(&f), count_k_points(&f));
        r.check(matches!((&c, &k), (Ok(a), Ok(b)) if a == b), || {
            format!("{f}: C {c:?} K {k:?}")
        });
    }
    r.detail = format!("{} polynomials of degree 2-4", polytope_corpus().len());
    r
}

/// Cyclotomic cases where the non-interlacing statement applies.
pub const REAL_CYCLOTOMIC_CASES: [i64; 5] = [21, 33, 35, 39, 42];

pub fn real_cyclotomic() -> SuiteResult {
    let mut r = SuiteResult::new("thm2");
    for n in REAL_CYCLOTOMIC_CASES {
        let f = real_cyclotomic_minpoly(n).unwrap();
        let res = certify_non_interlacing(&f, &SearchConfig::default());
        r.check(matches!(res, Ok(ref c) if c.count == 0), || {
            format!("n={n} ({f}): {res:?}")
        });
    }
    r.detail = format!("n in {REAL_CYCLOTOMIC_CASES:?}");
    r
}

/// Seeded monic irreducible totally real polynomials with coefficients in
/// `[-bound, bound]`.
pub fn random_totally_real(rng: &mut ChaCha8Rng, degree: usize, bound: i64) -> IntPolynomial {
    loop {
        let mut c = vec![1i64];
        c.extend((0..degree).map(|_| rng.gen_range(-bound..=bound)));
        let f = p(&c);
        if is_totally_real(&f).unwrap_or(false) && is_irreducible(&f).unwrap_or(false) {
            return f;
        }
    }
}

/// All monic irreducible totally real polynomials of `degree` with
/// coefficients in `[-bound, bound]`.
pub fn exhaustive_totally_real(degree: usize, bound: i64) -> Vec<IntPolynomial> {
    let mut out = Vec::new();
    let mut c = vec![-bound; degree];
    loop {
        let mut v = vec![1i64];
        v.extend(&c);
        let f = p(&v);
        if is_totally_real(&f).unwrap_or(false) && is_irreducible(&f).unwrap_or(false) {
            out.push(f);
        }
        let mut i = 0;
        loop {
            if i == degree {
                return out;
            }
            if c[i] < bound {
                c[i] += 1;
                break;
            }
            c[i] = -bound;
            i += 1;
        }
    }
}

pub fn sampled_corpus(samples: usize, seed: u64) -> Vec<IntPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<IntPolynomial> = (0..samples)
        .map(|i| random_totally_real(&mut rng, 2 + i % 2, 30))
        .collect();
    v.extend(exhaustive_totally_real(4, 4));
    v.extend(exhaustive_totally_real(5, 4));
    v
}

pub fn sampled_fields(samples: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("thm3-sample");
    let corpus = sampled_corpus(samples, seed);
    for f in &corpus {
        let res = enumerate_interlacers(f, &fast());
        r.check(matches!(res, Ok(ref s) if s.count() >= 1), || match &res {
            Ok(_) => format!("{f}: no interlacer"),
            Err(e) => format!("{f}: {e}"),
        });
    }
    r.detail = format!(
        "{samples} random of degree 2-3 (|c| <= 30, seed {seed:#x}) plus all degree 4-5 with |c| <= 4: {} polynomials",
        corpus.len()
    );
    r
}

/// The worked quintic: 218 interlacers, Disc = 3*61*241*547, rank 44.
pub fn quintic() -> SuiteResult {
    let mut r = SuiteResult::new("quintic");
    let f = p(&[1, -2, -9, 4, 15, 3]);
    let disc = discriminant(&f).unwrap();
    r.check(disc == BigInt::from(3 * 61 * 241 * 547), || {
        format!("Disc = {disc}")
    });
    match enumerate_interlacers(&f, &fast()) {
        Ok(set) => {
            let n = set.count() as u64;
            r.check(n == 218, || format!("interlacer count {n}, expected 218"));
            let rank = rank_bounds(5, n, &KissingTable::builtin())
                .map(|b| b.classical.minimal_rank)
                .unwrap_or(0);
            r.check(rank == 44, || {
                format!("classical minimal rank {rank}, expected 44")
            });
            r.detail = format!("count {n}, classical minimal rank {rank}");
        }
        Err(e) => r.check(false, || e.to_string()),
    }
    r
}

pub fn spans() -> SuiteResult {
    let mut r = SuiteResult::new("spans");
    let eps = BigRational::new(BigInt::one(), BigInt::from(1u64 << 30));
    let limit = 8f64.sqrt() + 1e-6;
    for a in 2i64..=10 {
        let f = p(&[1, 0, -2 * a, 0, a * a - 2]);
        match min_span_search(&f, 3, &eps) {
            Ok(rep) => {
                let hi = ratio_to_f64(&rep.best.span_interval.hi);
                r.check(hi <= limit, || format!("a={a}: span {hi}"));
            }
            Err(e) => r.check(false, || format!("a={a}: {e}")),
        }
    }
    for d in (2u64..=50).filter(|&d| !is_square(d)) {
        let f = p(&[1, 0, -(d as i64)]);
        let target = 2.0 * (d as f64).sqrt();
        match min_span_search(&f, 1, &eps) {
            Ok(rep) => {
                let mid = ratio_to_f64(&rep.best.span_interval.midpoint());
                r.check((mid - target).abs() < 1e-6, || format!("D={d}: span {mid}"));
            }
            Err(e) => r.check(false, || format!("D={d}: {e}")),
        }
    }
    r.detail = "quartic family a=2..10 and x^2-D for D <= 50".into();
    r
}

pub fn cubic_family_suite() -> SuiteResult {
    let mut r = SuiteResult::new("cubic-family");
    for k in -50i64..=50 {
        let f = cubic_family(k);
        r.check(f.eval(&BigInt::from(-k)) == BigInt::from(-1), || {
            format!("f_{k}(-k)")
        });
        r.check(f.eval(&BigInt::from(-k - 1)) == BigInt::one(), || {
            format!("f_{k}(-k-1)")
        });
    }
    for k in 0..=20 {
        r.check(is_totally_real(&cubic_family(k)).unwrap_or(false), || {
            format!("f_{k} not totally real")
        });
    }
    r.detail = "sign changes at -k, -k-1 for k in [-50, 50]; totally real for k in [0, 20]".into();
    r
}
