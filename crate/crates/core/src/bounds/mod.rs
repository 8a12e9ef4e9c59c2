//! Discriminant criterion and rank lower bounds for universal quadratic forms.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{enumerate_interlacers, EngineError, SearchConfig};
use crate::exact::{discriminant, ExactError, IntPolynomial};

/// Environment variable naming an alternative kissing-number table.
pub const KISSING_TABLE_ENV: &str = "INTERLACE_KISSING_TABLE";

const BUILTIN_TABLE: &str = include_str!("../../data/kissing.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("count must be at least 1")]
    InvalidCount,
    #[error("degree must be at least 1")]
    InvalidDegree,
    #[error("no kissing number entry for dimension {0}")]
    MissingKissingEntry(usize),
    #[error("{0} is a perfect square")]
    SquareInput(u64),
    #[error("kissing table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("cannot read kissing table: {0}")]
    Io(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KissingKind {
    Exact,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KissingEntry {
    pub value: u64,
    pub kind: KissingKind,
    pub source: String,
}

#[derive(Clone, Debug, Default)]
pub struct KissingTable {
    entries: BTreeMap<usize, KissingEntry>,
}

impl KissingTable {
    /// Parses `d value kind source` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| BoundsError::Table {
                line: n + 1,
                message: message.to_string(),
            };
            let mut parts = line.splitn(4, char::is_whitespace);
            let d: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("bad dimension"))?;
            if d == 0 {
                return Err(err("dimension must be positive"));
            }
            let value: u64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| err("bad value"))?;
            let kind = match parts.next().map(str::trim) {
                Some("exact") => KissingKind::Exact,
                Some("upper") => KissingKind::Upper,
                _ => return Err(err("kind must be exact or upper")),
            };
            let source = parts.next().unwrap_or("").trim().to_string();
            if entries
                .insert(
                    d,
                    KissingEntry {
                        value,
                        kind,
                        source,
                    },
                )
                .is_some()
            {
                return Err(err("duplicate dimension"));
            }
        }
        Ok(KissingTable { entries })
    }

    /// The table shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_TABLE).expect("bundled kissing table is well formed")
    }

    pub fn from_path(path: &Path) -> Result<Self, BoundsError> {
        let text = std::fs::read_to_string(path).map_err(|e| BoundsError::Io(e.to_string()))?;
        Self::parse(&text)
    }

    /// The file named by [`KISSING_TABLE_ENV`] if set, else the builtin table.
    pub fn load() -> Result<Self, BoundsError> {
        match std::env::var_os(KISSING_TABLE_ENV) {
            Some(p) => Self::from_path(Path::new(&p)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn get(&self, d: usize) -> Option<&KissingEntry> {
        self.entries.get(&d)
    }

    pub fn dimensions(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DobrowolskiReport {
    Holds {
        disc_abs: String,
        bound: String,
        margin: String,
    },
    NotApplicable,
    Violated {
        disc_abs: String,
        bound: String,
    },
}

impl DobrowolskiReport {
    pub fn is_violation(&self) -> bool {
        matches!(self, DobrowolskiReport::Violated { .. })
    }
}

/// `|Disc(f)| >= d^d` for an interlaced `f`.
pub fn dobrowolski_check(
    f: &IntPolynomial,
    interlaced: bool,
) -> Result<DobrowolskiReport, BoundsError> {
    if !interlaced {
        return Ok(DobrowolskiReport::NotApplicable);
    }
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(ExactError::DegreeTooSmall { min: 2, got: d }.into());
    }
    let disc = discriminant(f)?.abs();
    let bound = BigInt::from(d).pow(d as u32);
    Ok(if disc >= bound {
        DobrowolskiReport::Holds {
            margin: (&disc - &bound).to_string(),
            disc_abs: disc.to_string(),
            bound: bound.to_string(),
        }
    } else {
        DobrowolskiReport::Violated {
            disc_abs: disc.to_string(),
            bound: bound.to_string(),
        }
    })
}

/// How a bound converts into a minimal admissible integer rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankSemantics {
    /// rank > value
    StrictlyGreater,
    /// rank >= value
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    /// Rational enclosure `[lo, hi]`, a point when the value is rational.
    pub lo: String,
    pub hi: String,
    pub approx: f64,
    pub minimal_rank: u64,
    pub semantics: RankSemantics,
}

impl BoundValue {
    fn rational(v: &BigRational, semantics: RankSemantics) -> Self {
        let minimal_rank = match semantics {
            RankSemantics::StrictlyGreater => v.floor().to_integer() + 1,
            RankSemantics::AtLeast => v.ceil().to_integer(),
        };
        BoundValue {
            lo: v.to_string(),
            hi: v.to_string(),
            approx: crate::numberfield::ratio_to_f64(v),
            minimal_rank: minimal_rank.to_u64().unwrap_or(0),
            semantics,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonclassicalBranch {
    /// `d > 5` or `m > 240`
    RootLattice,
    /// otherwise
    Linear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankBoundReport {
    pub degree: usize,
    pub m_count: u64,
    pub classical: BoundValue,
    pub nonclassical: BoundValue,
    pub nonclassical_branch: NonclassicalBranch,
    pub diagonal: Option<BoundValue>,
    pub diagonal_kissing: Option<KissingEntry>,
    /// Heuristic: the `(1 + o(1))` factor is dropped.
    pub asymptotic: BoundValue,
    pub o1_dropped: bool,
    pub warnings: Vec<String>,
}

/// Enclosure of `(1 + sqrt(n)) / (2d)` refined until its floor is certain.
fn sqrt_branch(n: &BigInt, d: usize) -> BoundValue {
    let two_d = BigInt::from(2 * d);
    let s = n.sqrt();
    if &(&s * &s) == n {
        return BoundValue::rational(
            &BigRational::new(BigInt::one() + s, two_d),
            RankSemantics::StrictlyGreater,
        );
    }
    // sqrt(n) lies in (r / 2^k, (r + 1) / 2^k) with r = isqrt(n 4^k)
    let mut k = 40u32;
    loop {
        let scale = BigInt::one() << k;
        let r = (n * &scale * &scale).sqrt();
        let den = &scale * &two_d;
        let lo = BigRational::new(&scale + &r, den.clone());
        let hi = BigRational::new(&scale + &r + 1, den);
        // the value is irrational, so it is never an integer
        if lo.floor() == hi.floor() {
            let rank: BigInt = lo.floor().to_integer() + 1;
            let approx = (crate::numberfield::ratio_to_f64(&lo)
                + crate::numberfield::ratio_to_f64(&hi))
                / 2.0;
            return BoundValue {
                lo: lo.to_string(),
                hi: hi.to_string(),
                approx,
                minimal_rank: rank.to_u64().unwrap_or(u64::MAX),
                semantics: RankSemantics::StrictlyGreater,
            };
        }
        k += 8;
    }
}

pub fn rank_bounds(
    d: usize,
    m_count: u64,
    tau: &KissingTable,
) -> Result<RankBoundReport, BoundsError> {
    if d < 1 {
        return Err(BoundsError::InvalidDegree);
    }
    if m_count < 1 {
        return Err(BoundsError::InvalidCount);
    }
    let m = BigInt::from(m_count);
    let dd = BigInt::from(d);
    let classical = BoundValue::rational(
        &BigRational::new(m.clone(), dd.clone()),
        RankSemantics::StrictlyGreater,
    );
    let (nonclassical, nonclassical_branch) = if d > 5 || m_count > 240 {
        (
            sqrt_branch(&(BigInt::one() + BigInt::from(4) * &m), d),
            NonclassicalBranch::RootLattice,
        )
    } else {
        (
            BoundValue::rational(
                &BigRational::new(m.clone(), BigInt::from(15) * &dd),
                RankSemantics::StrictlyGreater,
            ),
            NonclassicalBranch::Linear,
        )
    };
    let mut warnings = Vec::new();
    let (diagonal, diagonal_kissing) = match tau.get(d) {
        Some(e) => (
            Some(BoundValue::rational(
                &BigRational::new(BigInt::from(2) * &m, BigInt::from(e.value)),
                RankSemantics::AtLeast,
            )),
            Some(e.clone()),
        ),
        None => {
            warnings.push(BoundsError::MissingKissingEntry(d).to_string());
            (None, None)
        }
    };
    let asym = (2.0 * m_count as f64).ln() / (0.401 * d as f64 * std::f64::consts::LN_2);
    let asymptotic = BoundValue {
        lo: format!("{asym}"),
        hi: format!("{asym}"),
        approx: asym,
        minimal_rank: asym.ceil().max(0.0) as u64,
        semantics: RankSemantics::AtLeast,
    };
    Ok(RankBoundReport {
        degree: d,
        m_count,
        classical,
        nonclassical,
        nonclassical_branch,
        diagonal,
        diagonal_kissing,
        asymptotic,
        o1_dropped: true,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub d_value: u64,
    pub m_count: u64,
    /// Present when the count was re-derived by enumeration.
    pub enumerated: Option<u64>,
    pub classical_bound: String,
    pub minimal_rank: u64,
    /// minimal classical rank / (4D)^{1/4}
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub band: (f64, f64),
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub within_band: bool,
    pub enumeration_agrees: bool,
}

pub const GROWTH_BAND: (f64, f64) = (0.3, 1.2);

/// Counts for `x^2 - D` from `2 floor(sqrt D) + 1`, re-enumerated when
/// `D <= enumerate_up_to`, against the classical rank bound `m / 2`.
pub fn quadratic_growth_check(
    d_list: &[u64],
    enumerate_up_to: u64,
    config: &SearchConfig,
) -> Result<GrowthReport, BoundsError> {
    let mut rows = Vec::with_capacity(d_list.len());
    let mut agrees = true;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &dv in d_list {
        let r = dv.sqrt();
        if r * r == dv {
            return Err(BoundsError::SquareInput(dv));
        }
        let m = 2 * r + 1;
        let enumerated = if dv <= enumerate_up_to {
            let f = IntPolynomial::new(vec![BigInt::one(), BigInt::zero(), -BigInt::from(dv)]);
            let n = enumerate_interlacers(&f, config)?.count() as u64;
            agrees &= n == m;
            Some(n)
        } else {
            None
        };
        let bound = BigRational::new(BigInt::from(m), BigInt::from(2));
        let rank = (bound.floor().to_integer() + BigInt::one())
            .to_u64()
            .unwrap_or(u64::MAX);
        let ratio = rank as f64 / ((4 * dv) as f64).powf(0.25);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        rows.push(GrowthRow {
            d_value: dv,
            m_count: m,
            enumerated,
            classical_bound: bound.to_string(),
            minimal_rank: rank,
            ratio,
        });
    }
    let within_band = rows.is_empty() || (lo >= GROWTH_BAND.0 && hi <= GROWTH_BAND.1);
    Ok(GrowthReport {
        rows,
        band: GROWTH_BAND,
        min_ratio: lo,
        max_ratio: hi,
        within_band,
        enumeration_agrees: agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn builtin_table() {
        let t = KissingTable::builtin();
        assert_eq!(t.get(1).unwrap().value, 2);
        assert_eq!(t.get(1).unwrap().kind, KissingKind::Exact);
        assert!(t.get(8).unwrap().value >= 240);
        assert_eq!(t.get(24).unwrap().value, 196560);
        assert!(t.get(100).is_none());
        assert!(t.dimensions().all(|d| d >= 1));
    }

    #[test]
    fn table_parse_errors() {
        assert!(KissingTable::parse("# only\n\n3 12 exact x # tail").is_ok());
        assert!(matches!(
            KissingTable::parse("0 1 exact z"),
            Err(BoundsError::Table { line: 1, .. })
        ));
        assert!(KissingTable::parse("2 6 roughly z").is_err());
        assert!(KissingTable::parse("2 6 exact a\n2 6 exact b").is_err());
    }

    #[test]
    fn env_override() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.txt");
        std::fs::write(&path, "5 41 upper test\n").unwrap();
        let t = KissingTable::from_path(&path).unwrap();
        assert_eq!(t.get(5).unwrap().value, 41);
        assert!(KissingTable::from_path(&dir.path().join("missing")).is_err());
    }

    #[test]
    fn dobrowolski_examples() {
        match dobrowolski_check(&p(&[1, -1, -1]), true).unwrap() {
            DobrowolskiReport::Holds {
                disc_abs,
                bound,
                margin,
            } => {
                assert_eq!(
                    (disc_abs.as_str(), bound.as_str(), margin.as_str()),
                    ("5", "4", "1")
                )
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            dobrowolski_check(&p(&[1, -1, -6, 6, 8, -8, 1]), false).unwrap(),
            DobrowolskiReport::NotApplicable
        );
        match dobrowolski_check(&p(&[1, -2, -9, 4, 15, 3]), true).unwrap() {
            DobrowolskiReport::Holds {
                disc_abs, bound, ..
            } => {
                assert_eq!(disc_abs, "24124341");
                assert_eq!(bound, "3125");
            }
            other => panic!("{other:?}"),
        }
        // x^2 - 2 has discriminant 8 >= 4; x^2 - x has 1 < 4 but is reducible
        assert!(dobrowolski_check(&p(&[1, -1, 0]), true)
            .unwrap()
            .is_violation());
    }

    #[test]
    fn rank_examples() {
        let t = KissingTable::builtin();
        let r = rank_bounds(5, 218, &t).unwrap();
        assert_eq!(r.classical.lo, "218/5");
        assert_eq!(r.classical.minimal_rank, 44);
        assert_eq!(r.nonclassical_branch, NonclassicalBranch::Linear);
        let r = rank_bounds(2, 2, &t).unwrap();
        assert_eq!(r.classical.lo, "1");
        assert_eq!(r.classical.minimal_rank, 2);
        assert!((r.asymptotic.approx - 2.0 / (0.401 * 2.0)).abs() < 1e-12);
        assert!(r.o1_dropped);
        let r = rank_bounds(2, 300, &t).unwrap();
        assert_eq!(r.nonclassical_branch, NonclassicalBranch::RootLattice);
        assert!((r.nonclassical.approx - (1.0 + 1201f64.sqrt()) / 4.0).abs() < 1e-9);
        assert_eq!(r.nonclassical.minimal_rank, 9);
        assert_eq!(r.diagonal.as_ref().unwrap().minimal_rank, 100);
        let r = rank_bounds(6, 2, &t).unwrap();
        assert_eq!(r.nonclassical.lo, "1/3");
        assert_eq!(r.nonclassical.minimal_rank, 1);
    }

    #[test]
    fn rank_errors_and_warnings() {
        let t = KissingTable::builtin();
        assert_eq!(
            rank_bounds(2, 0, &t).unwrap_err(),
            BoundsError::InvalidCount
        );
        let r = rank_bounds(40, 10, &t).unwrap();
        assert!(r.diagonal.is_none());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn whole_number_bounds_step_up() {
        let t = KissingTable::builtin();
        assert_eq!(rank_bounds(5, 215, &t).unwrap().classical.minimal_rank, 44);
        assert_eq!(rank_bounds(5, 214, &t).unwrap().classical.minimal_rank, 43);
        // 1 + 4 * 272 = 1089 = 33^2
        let r = rank_bounds(2, 272, &t).unwrap();
        assert_eq!(r.nonclassical.lo, "17/2");
        assert_eq!(r.nonclassical.minimal_rank, 9);
    }

    #[test]
    fn growth_examples() {
        let c = SearchConfig::default();
        let g = quadratic_growth_check(&[2, 101], 500, &c).unwrap();
        assert_eq!(g.rows[0].m_count, 3);
        assert_eq!(g.rows[0].classical_bound, "3/2");
        assert_eq!(g.rows[0].minimal_rank, 2);
        assert_eq!(g.rows[1].m_count, 21);
        assert_eq!(g.rows[1].minimal_rank, 11);
        assert!(g.enumeration_agrees);
        assert_eq!(
            quadratic_growth_check(&[4], 500, &c).unwrap_err(),
            BoundsError::SquareInput(4)
        );
    }

    proptest::proptest! {
        #[test]
        fn monotone_in_count(d in 1usize..=12, m in 1u64..=2000) {
            let t = KissingTable::builtin();
            let a = rank_bounds(d, m, &t).unwrap();
            let b = rank_bounds(d, m + 1, &t).unwrap();
            proptest::prop_assert!(a.classical.approx <= b.classical.approx);
            proptest::prop_assert!(a.nonclassical.approx <= b.nonclassical.approx);
            proptest::prop_assert!(a.asymptotic.approx <= b.asymptotic.approx);
            proptest::prop_assert!(a.classical.minimal_rank <= b.classical.minimal_rank);
            proptest::prop_assert!(a.nonclassical.minimal_rank <= b.nonclassical.minimal_rank);
        }

        #[test]
        fn monotone_in_degree_within_branch(d in 1usize..=11, m in 1u64..=2000) {
            let t = KissingTable::builtin();
            let a = rank_bounds(d, m, &t).unwrap();
            let b = rank_bounds(d + 1, m, &t).unwrap();
            proptest::prop_assert!(a.classical.approx >= b.classical.approx);
            proptest::prop_assert!(a.asymptotic.approx >= b.asymptotic.approx);
            if a.nonclassical_branch == b.nonclassical_branch {
                proptest::prop_assert!(a.nonclassical.approx >= b.nonclassical.approx);
            }
            if let (Some(x), Some(y)) = (&a.diagonal, &b.diagonal) {
                proptest::prop_assert!(x.approx >= y.approx);
            }
        }
    }
}
