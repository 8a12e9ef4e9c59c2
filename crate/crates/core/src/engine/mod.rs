//! Deciding, enumerating and counting integer interlacing polynomials.
//!
//! A monic `g` of degree `d-1` interlaces `f` exactly when every
//! `lambda_i = g(a_i) / f'(a_i)` is positive, so the interlacers are the
//! integer points in the interior of `K(f)`. The search walks the
//! coordinates `b_1, ..., b_{d-1}` depth first. Each prefix tightens the
//! range of the next coordinate through the linear constraints
//! `lambda_i(b) > 0`, evaluated in outward-rounded float intervals over the
//! remaining box; leaves are accepted only on exact signs. The walk runs in
//! an LLL-reduced basis of the lambda lattice, where the box around the
//! simplex is far tighter than in raw coefficients.

mod reduce;

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{resultant, FloatInterval, IntPolynomial, RationalInterval};
use crate::polytope::{
    default_precision, lambda_of_with, vertex_boxes_with, GeometryError, LambdaVector, RealRoots,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("deg g = {got}, expected deg f - 1 = {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not totally real")]
    NotTotallyReal,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("degree too small: need at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("trace must be positive")]
    NonPositiveTrace,
    #[error("leaf budget of {budget} tests exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("interlacer exists: {0}")]
    InterlacerExists(IntPolynomial),
    #[error("coordinate box too large for 64-bit search")]
    CoordinateOverflow,
}

fn lift(e: GeometryError) -> EngineError {
    match e {
        GeometryError::NotTotallyReal => EngineError::NotTotallyReal,
        GeometryError::NotSquarefree => EngineError::NotSquarefree,
        GeometryError::NonPositiveTrace => EngineError::NonPositiveTrace,
        other => EngineError::Geometry(other),
    }
}

/// Search limits and options.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum number of exact leaf tests before giving up.
    pub budget: u64,
    /// Worker threads, partitioned on the first coordinate.
    pub jobs: usize,
    /// Attach a [`LambdaVector`] certificate to every member.
    pub certificates: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 100_000_000,
            jobs: 1,
            certificates: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub boxes_pruned: u64,
    pub leaves_tested: u64,
}

impl SearchStats {
    fn merge(&mut self, o: &SearchStats) {
        self.nodes_visited += o.nodes_visited;
        self.boxes_pruned += o.boxes_pruned;
        self.leaves_tested += o.leaves_tested;
    }
}

/// One integer point of `t K(f)` with its barycentric certificate.
#[derive(Clone, Debug)]
pub struct Member {
    /// `(t, b_1, ..., b_{d-1})`
    pub vector: Vec<BigInt>,
    pub certificate: Option<LambdaVector>,
}

impl Member {
    pub fn poly(&self) -> IntPolynomial {
        IntPolynomial::new(self.vector.clone())
    }
}

#[derive(Clone, Debug)]
pub struct InterlacerSet {
    pub poly: IntPolynomial,
    pub trace_scale: BigInt,
    /// Sorted lexicographically by coefficient vector.
    pub members: Vec<Member>,
    pub stats: SearchStats,
}

impl InterlacerSet {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn polys(&self) -> Vec<IntPolynomial> {
        self.members.iter().map(Member::poly).collect()
    }
}

/// Produced only by a scan that covered the whole certified box.
#[derive(Clone, Debug)]
pub struct NonInterlacingCertificate {
    pub poly: IntPolynomial,
    pub boxes_scanned: u64,
    pub candidates_rejected: u64,
    pub count: u64,
}

fn check_base(f: &IntPolynomial) -> Result<RealRoots, EngineError> {
    if f.is_zero() || f.deg() < 2 {
        return Err(EngineError::DegreeTooSmall(f.degree().unwrap_or(0)));
    }
    if !f.is_monic() {
        return Err(EngineError::NotMonic);
    }
    RealRoots::new(f).map_err(lift)
}

/// Whether the monic `g` strictly interlaces `f`.
pub fn interlaces(f: &IntPolynomial, g: &IntPolynomial) -> Result<bool, EngineError> {
    let roots = check_base(f)?;
    interlaces_with(&roots, g)
}

pub fn interlaces_with(roots: &RealRoots, g: &IntPolynomial) -> Result<bool, EngineError> {
    let d = roots.degree();
    if g.degree() != Some(d - 1) {
        return Err(EngineError::DegreeMismatch {
            expected: d - 1,
            got: g.degree().unwrap_or(0),
        });
    }
    if !g.is_monic() {
        return Err(EngineError::NotMonic);
    }
    let res = resultant(roots.poly(), g).map_err(|e| lift(GeometryError::from(e)))?;
    if res.is_zero() {
        return Ok(false);
    }
    Ok((0..d).all(|i| roots.lambda_sign(g, i) == Ordering::Greater))
}

/// All monic integer interlacers of `f`.
pub fn enumerate_interlacers(
    f: &IntPolynomial,
    config: &SearchConfig,
) -> Result<InterlacerSet, EngineError> {
    let roots = check_base(f)?;
    search(&roots, &BigInt::one(), config, false)
}

/// Integer points `(t, b_1, ..., b_{d-1})` with all `lambda_i > 0`, i.e.
/// totally positive dual elements of trace `t`.
pub fn count_trace_t(
    f: &IntPolynomial,
    t: &BigInt,
    config: &SearchConfig,
) -> Result<InterlacerSet, EngineError> {
    if !t.is_positive() {
        return Err(EngineError::NonPositiveTrace);
    }
    let roots = check_base(f)?;
    search(&roots, t, config, false)
}

pub fn count_trace_t_with(
    roots: &RealRoots,
    t: &BigInt,
    config: &SearchConfig,
) -> Result<InterlacerSet, EngineError> {
    if !t.is_positive() {
        return Err(EngineError::NonPositiveTrace);
    }
    search(roots, t, config, false)
}

pub fn certify_non_interlacing(
    f: &IntPolynomial,
    config: &SearchConfig,
) -> Result<NonInterlacingCertificate, EngineError> {
    let roots = check_base(f)?;
    let cfg = SearchConfig {
        certificates: false,
        ..config.clone()
    };
    let set = search(&roots, &BigInt::one(), &cfg, true)?;
    if let Some(m) = set.members.first() {
        return Err(EngineError::InterlacerExists(m.poly()));
    }
    Ok(NonInterlacingCertificate {
        poly: f.clone(),
        boxes_scanned: set.stats.nodes_visited,
        candidates_rejected: set.stats.leaves_tested,
        count: 0,
    })
}

/// Float data shared by all workers.
struct Problem<'a> {
    roots: &'a RealRoots,
    t: BigInt,
    /// `weights[i][0]` encloses `a_i^{d-1} / f'(a_i)`, `weights[i][k+1]` the
    /// lambda_i coefficient of search coordinate `k`.
    weights: Vec<Vec<FloatInterval>>,
    basis: reduce::Basis,
    /// `base[i]` encloses `t * weights[i][0]`.
    base: Vec<FloatInterval>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    budget: u64,
    leaves: AtomicU64,
    stop: AtomicBool,
    first_only: bool,
}

struct Worker<'p, 'a> {
    pb: &'p Problem<'a>,
    stats: SearchStats,
    found: Vec<Vec<i64>>,
    prefix: Vec<i64>,
    exceeded: bool,
}

fn weights_for(roots: &RealRoots) -> Vec<Vec<FloatInterval>> {
    let d = roots.degree();
    (0..d)
        .map(|i| {
            let a = roots.root_float(i);
            let fp = roots.deriv_float(i);
            let mut pows = vec![FloatInterval::point(1.0); d];
            for e in 1..d {
                pows[e] = pows[e - 1].mul(a);
            }
            // the float enclosure of f'(a_i) may straddle zero only for
            // pathological inputs; fall back to an unbounded weight then
            (0..d)
                .map(|j| {
                    pows[d - 1 - j].div(fp).unwrap_or(FloatInterval {
                        lo: f64::NEG_INFINITY,
                        hi: f64::INFINITY,
                    })
                })
                .collect()
        })
        .collect()
}

impl<'p, 'a> Worker<'p, 'a> {
    fn new(pb: &'p Problem<'a>) -> Self {
        Worker {
            pb,
            stats: SearchStats::default(),
            found: Vec::new(),
            prefix: Vec::new(),
            exceeded: false,
        }
    }

    /// Range of coordinate `k` (0-based among the free coordinates) that is
    /// compatible with `lambda_i > 0` for every `i`, given the partial sums.
    fn range(&self, k: usize, partial: &[FloatInterval]) -> (i64, i64) {
        let pb = self.pb;
        let free = pb.lo.len();
        let mut lo = pb.lo[k];
        let mut hi = pb.hi[k];
        for (i, part) in partial.iter().enumerate() {
            let mut rest = *part;
            for j in k + 1..free {
                let span = FloatInterval {
                    lo: pb.lo[j] as f64,
                    hi: pb.hi[j] as f64,
                };
                rest = rest.add(span.mul(pb.weights[i][j + 1]));
            }
            let w = pb.weights[i][k + 1];
            // need b * w > -rest for some admissible rest value
            let rhs = FloatInterval::point(-rest.hi);
            if w.is_positive() {
                if let Some(q) = rhs.div(w) {
                    if q.lo.is_finite() {
                        lo = lo.max(clamp_floor(q.lo).saturating_add(1));
                    }
                }
            } else if w.is_negative() {
                if let Some(q) = rhs.div(w) {
                    if q.hi.is_finite() {
                        hi = hi.min(clamp_ceil(q.hi).saturating_sub(1));
                    }
                }
            } else if w.lo == 0.0 && w.hi == 0.0 && rest.hi <= 0.0 {
                return (1, 0);
            }
        }
        (lo, hi)
    }

    fn descend(&mut self, k: usize, partial: &[FloatInterval]) {
        if self.exceeded || self.pb.stop.load(AtomicOrdering::Relaxed) {
            return;
        }
        let free = self.pb.lo.len();
        let (lo, hi) = self.range(k, partial);
        if lo > hi {
            self.stats.boxes_pruned += 1;
            return;
        }
        let mut next = partial.to_vec();
        for b in lo..=hi {
            self.stats.nodes_visited += 1;
            for (i, n) in next.iter_mut().enumerate() {
                *n = partial[i].add(self.pb.weights[i][k + 1].mul_int(b));
            }
            self.prefix.push(b);
            if k + 1 == free {
                self.leaf(&next);
            } else {
                self.descend(k + 1, &next);
            }
            self.prefix.pop();
            if self.exceeded || self.pb.stop.load(AtomicOrdering::Relaxed) {
                return;
            }
        }
    }

    fn leaf(&mut self, lambdas: &[FloatInterval]) {
        self.stats.leaves_tested += 1;
        let used = self.pb.leaves.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if used > self.pb.budget {
            self.exceeded = true;
            self.pb.stop.store(true, AtomicOrdering::Relaxed);
            return;
        }
        if lambdas.iter().any(|l| l.is_negative()) {
            return;
        }
        let roots = self.pb.roots;
        let mut g: Option<IntPolynomial> = None;
        for (i, l) in lambdas.iter().enumerate() {
            if l.is_positive() {
                continue;
            }
            let gp = g.get_or_insert_with(|| self.poly_of_prefix());
            if roots.lambda_sign(gp, i) != Ordering::Greater {
                return;
            }
        }
        self.found.push(self.prefix.clone());
        if self.pb.first_only {
            self.pb.stop.store(true, AtomicOrdering::Relaxed);
        }
    }

    fn poly_of_prefix(&self) -> IntPolynomial {
        let mut v = vec![self.pb.t.clone()];
        v.extend(coefficients(&self.pb.basis, &self.prefix));
        IntPolynomial::new(v)
    }
}

fn coefficients(basis: &reduce::Basis, c: &[i64]) -> Vec<BigInt> {
    match basis.apply(c) {
        Some(b) => b.into_iter().map(BigInt::from).collect(),
        None => basis
            .u
            .iter()
            .map(|row| row.iter().zip(c).map(|(&a, &x)| BigInt::from(a) * x).sum())
            .collect(),
    }
}

fn clamp_floor(x: f64) -> i64 {
    let f = x.floor();
    if f <= i64::MIN as f64 {
        i64::MIN / 2
    } else if f >= i64::MAX as f64 {
        i64::MAX / 2
    } else {
        f as i64
    }
}

fn clamp_ceil(x: f64) -> i64 {
    let c = x.ceil();
    if c <= i64::MIN as f64 {
        i64::MIN / 2
    } else if c >= i64::MAX as f64 {
        i64::MAX / 2
    } else {
        c as i64
    }
}

fn search(
    roots: &RealRoots,
    t: &BigInt,
    config: &SearchConfig,
    first_only: bool,
) -> Result<InterlacerSet, EngineError> {
    let boxed = vertex_boxes_with(roots, t, &default_precision()).map_err(lift)?;
    let free = roots.degree() - 1;
    let empty = (0..free).any(|j| boxed.candidates(j).is_none());
    let raw = weights_for(roots);
    let cols: Vec<Vec<f64>> = (0..free)
        .map(|j| raw.iter().map(|w| w[j + 1].mid()).collect())
        .collect();
    let basis = reduce::lll(&cols);
    let weights: Vec<Vec<FloatInterval>> = raw
        .iter()
        .map(|w| {
            std::iter::once(w[0])
                .chain((0..free).map(|k| {
                    (0..free).fold(FloatInterval::ZERO, |acc, j| {
                        acc.add(w[j + 1].mul_int(basis.u[j][k]))
                    })
                }))
                .collect()
        })
        .collect();
    let mut lo = Vec::with_capacity(free);
    let mut hi = Vec::with_capacity(free);
    for k in 0..free {
        let hull = boxed
            .vertices
            .iter()
            .map(|v| {
                (0..free).fold(RationalInterval::from_int(0), |acc, j| {
                    acc.add(&v[j].scale(&BigRational::from_integer(basis.uinv[k][j].into())))
                })
            })
            .reduce(|a, b| a.hull(&b))
            .expect("at least two vertices");
        match hull.integer_range() {
            Some((a, b)) => {
                let a = a.to_i64().ok_or(EngineError::CoordinateOverflow)?;
                let b = b.to_i64().ok_or(EngineError::CoordinateOverflow)?;
                if a.unsigned_abs() > 1 << 50 || b.unsigned_abs() > 1 << 50 {
                    return Err(EngineError::CoordinateOverflow);
                }
                lo.push(a);
                hi.push(b);
            }
            None => {
                lo.push(0);
                hi.push(-1);
            }
        }
    }
    let empty = empty || lo.iter().zip(&hi).any(|(a, b)| a > b);
    let tf = FloatInterval::from_int(t);
    let base = weights.iter().map(|w| w[0].mul(tf)).collect();
    let pb = Problem {
        roots,
        t: t.clone(),
        weights,
        basis,
        base,
        lo,
        hi,
        budget: config.budget,
        leaves: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        first_only,
    };

    let mut stats = SearchStats::default();
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    if !empty {
        let jobs = config.jobs.max(1);
        let (top_lo, top_hi) = (pb.lo[0], pb.hi[0]);
        let width = (top_hi - top_lo + 1) as u64;
        if jobs == 1 || width < 2 {
            let mut w = Worker::new(&pb);
            w.descend(0, &pb.base);
            if w.exceeded {
                return Err(EngineError::BudgetExceeded {
                    budget: config.budget,
                });
            }
            stats = w.stats;
            vectors = w.found;
        } else {
            let chunks = jobs.min(width as usize) as u64;
            let results: Vec<(SearchStats, Vec<Vec<i64>>, bool)> = std::thread::scope(|s| {
                let handles: Vec<_> = (0..chunks)
                    .map(|c| {
                        let a = top_lo + (width * c / chunks) as i64;
                        let b = top_lo + (width * (c + 1) / chunks) as i64 - 1;
                        let pb = &pb;
                        s.spawn(move || {
                            let local = Problem {
                                roots: pb.roots,
                                t: pb.t.clone(),
                                weights: pb.weights.clone(),
                                basis: pb.basis.clone(),
                                base: pb.base.clone(),
                                lo: std::iter::once(a)
                                    .chain(pb.lo[1..].iter().copied())
                                    .collect(),
                                hi: std::iter::once(b)
                                    .chain(pb.hi[1..].iter().copied())
                                    .collect(),
                                budget: pb.budget,
                                leaves: AtomicU64::new(0),
                                stop: AtomicBool::new(false),
                                first_only: pb.first_only,
                            };
                            let mut w = Worker::new(&local);
                            w.descend(0, &local.base);
                            let used = local.leaves.load(AtomicOrdering::Relaxed);
                            let total = pb.leaves.fetch_add(used, AtomicOrdering::Relaxed) + used;
                            (w.stats, w.found, w.exceeded || total > pb.budget)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            });
            for (s, found, exceeded) in results {
                if exceeded {
                    return Err(EngineError::BudgetExceeded {
                        budget: config.budget,
                    });
                }
                stats.merge(&s);
                vectors.extend(found);
            }
            vectors.sort();
            if first_only {
                vectors.truncate(1);
            }
        }
    }
    let mut coeffs: Vec<Vec<BigInt>> = vectors.iter().map(|c| coefficients(&pb.basis, c)).collect();
    coeffs.sort();

    let members = coeffs
        .into_iter()
        .map(|v| {
            let mut vector = vec![t.clone()];
            vector.extend(v);
            let certificate = if config.certificates {
                let g = IntPolynomial::new(vector.clone());
                Some(lambda_of_with(roots, &g, &default_precision()).map_err(lift)?)
            } else {
                None
            };
            Ok(Member {
                vector,
                certificate,
            })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;

    Ok(InterlacerSet {
        poly: roots.poly().clone(),
        trace_scale: t.clone(),
        members,
        stats,
    })
}
