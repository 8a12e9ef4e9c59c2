//! Dual elements of the order `Z[a]`, minimal-trace sets, spans, and the
//! polynomial families used in the examples.
//!
//! Every element of the codifferent of `Z[a]` has the form
//! `g(a) / f'(a)` with `deg g < d`. Lagrange interpolation gives
//! `g = sum_i g(a_i)/f'(a_i) * f/(x - a_i)`, so the trace of `g(a)/f'(a)`
//! is the `x^{d-1}` coefficient of `g` divided by `lc(f)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::engine::{count_trace_t_with, EngineError, SearchConfig};
use crate::exact::{
    is_irreducible, isolate_roots, minpoly_of_element, ExactError, FloatInterval, IntPolynomial,
    RationalInterval,
};
use crate::polytope::{default_precision, lambda_of_with, GeometryError, LambdaVector, RealRoots};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberFieldError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Engine(EngineError),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no totally positive element of trace <= {t_max}")]
    NoElementUpToTMax { t_max: u64, levels: Vec<(u64, u64)> },
    #[error("leaf budget of {budget} tests exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("argument too small: need at least {min}, got {got}")]
    ArgumentTooSmall { min: i64, got: i64 },
    #[error("empty search space")]
    EmptySearchSpace,
}

impl From<EngineError> for NumberFieldError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::BudgetExceeded { budget } => NumberFieldError::BudgetExceeded { budget },
            EngineError::Geometry(g) => NumberFieldError::Geometry(g),
            other => NumberFieldError::Engine(other),
        }
    }
}

/// How irreducibility of the defining polynomial is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Verify,
    /// Caller vouches for it (needed above the factor-search degree cap).
    Assume,
}

/// The order `Z[a]` for a root `a` of an irreducible totally real `f`.
#[derive(Clone, Debug)]
pub struct Order {
    roots: RealRoots,
    /// Set when the caller asserts `Z[a]` is the full ring of integers, so
    /// results are field-level.
    pub monogenic: bool,
}

impl Order {
    pub fn new(f: &IntPolynomial, irr: Irreducibility) -> Result<Self, NumberFieldError> {
        if irr == Irreducibility::Verify && !is_irreducible(f)? {
            return Err(NumberFieldError::NotIrreducible);
        }
        Ok(Order {
            roots: RealRoots::new(f)?,
            monogenic: false,
        })
    }

    pub fn with_monogenic(mut self, yes: bool) -> Self {
        self.monogenic = yes;
        self
    }

    pub fn poly(&self) -> &IntPolynomial {
        self.roots.poly()
    }

    pub fn degree(&self) -> usize {
        self.roots.degree()
    }

    pub fn roots(&self) -> &RealRoots {
        &self.roots
    }

    /// `g_b(a) / f'(a)` with `g_b = sum_j b_j x^{d-j}`.
    pub fn element(&self, b: &[BigInt]) -> Result<CodifferentElement, NumberFieldError> {
        let d = self.degree();
        if b.len() != d {
            return Err(NumberFieldError::DimensionMismatch {
                expected: d,
                got: b.len(),
            });
        }
        let numerator = IntPolynomial::new(b.to_vec());
        let lc = self.poly().leading().unwrap().clone();
        let trace = BigRational::new(b[0].clone(), lc);
        let certificate = lambda_of_with(&self.roots, &numerator, &default_precision())?;
        Ok(CodifferentElement {
            base_poly: self.poly().clone(),
            numerator,
            trace,
            totally_positive: certificate.all_positive(),
            certificate,
        })
    }

    /// Scan traces `1..=t_max` and return the first nonempty level.
    pub fn minimal_trace_set(
        &self,
        t_max: u64,
        config: &SearchConfig,
    ) -> Result<MinimalTraceSet, NumberFieldError> {
        if t_max < 1 {
            return Err(NumberFieldError::ArgumentTooSmall {
                min: 1,
                got: t_max as i64,
            });
        }
        let mut levels = Vec::new();
        for t in 1..=t_max {
            let set = count_trace_t_with(&self.roots, &BigInt::from(t), config)?;
            if set.members.is_empty() {
                levels.push((t, 0));
                continue;
            }
            let elements = set
                .members
                .iter()
                .map(|m| self.element(&m.vector))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(MinimalTraceSet {
                base_poly: self.poly().clone(),
                t_star: t,
                count: elements.len() as u64,
                elements,
                empty_levels: levels,
                field_level: self.monogenic,
            });
        }
        Err(NumberFieldError::NoElementUpToTMax { t_max, levels })
    }
}

#[derive(Clone, Debug)]
pub struct CodifferentElement {
    pub base_poly: IntPolynomial,
    pub numerator: IntPolynomial,
    pub trace: BigRational,
    pub totally_positive: bool,
    pub certificate: LambdaVector,
}

#[derive(Clone, Debug)]
pub struct MinimalTraceSet {
    pub base_poly: IntPolynomial,
    pub t_star: u64,
    pub count: u64,
    pub elements: Vec<CodifferentElement>,
    /// Traces below `t_star`, each scanned exhaustively with zero hits.
    pub empty_levels: Vec<(u64, u64)>,
    /// True only when `Z[a]` was asserted to be the ring of integers.
    pub field_level: bool,
}

pub fn codifferent_element(
    f: &IntPolynomial,
    b: &[BigInt],
) -> Result<CodifferentElement, NumberFieldError> {
    Order::new(f, Irreducibility::Verify)?.element(b)
}

pub fn minimal_trace_set(
    f: &IntPolynomial,
    t_max: u64,
    config: &SearchConfig,
) -> Result<MinimalTraceSet, NumberFieldError> {
    Order::new(f, Irreducibility::Verify)?.minimal_trace_set(t_max, config)
}

fn cyclotomic(n: u64, memo: &mut BTreeMap<u64, IntPolynomial>) -> IntPolynomial {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = IntPolynomial::monomial(n as usize).sub(&IntPolynomial::constant(BigInt::one()));
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi = cyclotomic(d, memo);
            num = num.div_exact(&phi).expect("cyclotomic division is exact");
        }
    }
    memo.insert(n, num.clone());
    num
}

/// `n`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> IntPolynomial {
    cyclotomic(n, &mut BTreeMap::new())
}

/// Minimal polynomial of `2 cos(2 pi / n)`.
pub fn real_cyclotomic_minpoly(n: i64) -> Result<IntPolynomial, NumberFieldError> {
    if n < 3 {
        return Err(NumberFieldError::ArgumentTooSmall { min: 3, got: n });
    }
    let phi = cyclotomic_poly(n as u64);
    let asc = phi.ascending();
    let m = asc.len() / 2;
    // x^{-m} Phi_n(x) = c_m + sum_k c_{m+k} (x^k + x^{-k}), and
    // x^k + x^{-k} = T_k(y) with T_0 = 2, T_1 = y, T_{k+1} = y T_k - T_{k-1}
    let y = IntPolynomial::monomial(1);
    let mut t_prev = IntPolynomial::constant(BigInt::from(2));
    let mut t_cur = y.clone();
    let mut out = IntPolynomial::constant(asc[m].clone());
    for k in 1..=m {
        out = out.add(&t_cur.scale(&asc[m + k]));
        let next = y.mul(&t_cur).sub(&t_prev);
        t_prev = t_cur;
        t_cur = next;
    }
    Ok(out)
}

/// `f_k = x^3 + x^2 - (3k^2 + k + 2) x - (2k^3 + 2k^2 + 2k + 1)`
pub fn cubic_family(k: i64) -> IntPolynomial {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let k3 = &k2 * &k;
    let b: BigInt = BigInt::from(3) * &k2 + &k + 2;
    let c: BigInt = BigInt::from(2) * &k3 + BigInt::from(2) * &k2 + BigInt::from(2) * &k + 1;
    IntPolynomial::new(vec![BigInt::one(), BigInt::one(), -b, -c])
}

#[derive(Clone, Debug)]
pub struct SpanReport {
    pub element: IntPolynomial,
    pub span_interval: RationalInterval,
    pub exact_zero: bool,
}

impl SpanReport {
    pub fn midpoint_f64(&self) -> f64 {
        let m = self.span_interval.midpoint();
        ratio_to_f64(&m)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    let f = RationalInterval::point(r.clone()).to_float();
    (f.lo + f.hi) / 2.0
}

/// Enclosure of `max_i g(a_i) - min_i g(a_i)` of width below `eps`.
pub fn span_of(
    f: &IntPolynomial,
    g: &IntPolynomial,
    eps: &BigRational,
) -> Result<SpanReport, NumberFieldError> {
    let h = minpoly_of_element(f, g)?;
    if h.deg() <= 1 {
        return Ok(SpanReport {
            element: g.clone(),
            span_interval: RationalInterval::point(BigRational::zero()),
            exact_zero: true,
        });
    }
    let mut iso = isolate_roots(&h)?;
    let half = eps / BigRational::from_integer(BigInt::from(4));
    let top = iso.len() - 1;
    iso.refine_in_place(0, &half);
    iso.refine_in_place(top, &half);
    let lo = &iso.intervals()[0];
    let hi = &iso.intervals()[top];
    Ok(SpanReport {
        element: g.clone(),
        span_interval: RationalInterval::new(&hi.lo - &lo.hi, &hi.hi - &lo.lo),
        exact_zero: false,
    })
}

/// Smallest span over a coefficient box; an upper bound for the lattice
/// width of `C(f)`.
#[derive(Clone, Debug)]
pub struct MinSpanReport {
    pub best: SpanReport,
    pub coeff_bound: u64,
    pub candidates_examined: u64,
    /// Always true: the search is bounded, so only an upper bound is proved.
    pub width_upper_bound: bool,
}

/// Searches `g` with coefficients in `[-B, B]` and `deg g < d`.
///
/// Spans are invariant under `g -> g + k` and `g -> -g`, so the constant
/// term is fixed to 0 and the leading nonzero coefficient taken positive.
pub fn min_span_search(
    f: &IntPolynomial,
    coeff_bound: u64,
    eps: &BigRational,
) -> Result<MinSpanReport, NumberFieldError> {
    let roots = RealRoots::new(f)?;
    let d = roots.degree();
    if coeff_bound < 1 || d < 2 {
        return Err(NumberFieldError::EmptySearchSpace);
    }
    let bound = coeff_bound as i64;
    let free = d - 1;
    let mut cur = vec![-bound; free];
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut examined = 0u64;
    loop {
        let lead = cur.iter().find(|&&c| c != 0);
        if matches!(lead, Some(&c) if c > 0) {
            examined += 1;
            let upper = span_upper_float(&roots, &cur);
            if best.as_ref().is_none_or(|(b, _)| upper < *b) {
                best = Some((upper, cur.clone()));
            }
        }
        let mut k = free;
        loop {
            if k == 0 {
                let (_, coeffs) = best.ok_or(NumberFieldError::EmptySearchSpace)?;
                let g = poly_without_constant(&coeffs);
                return Ok(MinSpanReport {
                    best: span_of(f, &g, eps)?,
                    coeff_bound,
                    candidates_examined: examined,
                    width_upper_bound: true,
                });
            }
            k -= 1;
            if cur[k] < bound {
                cur[k] += 1;
                break;
            }
            cur[k] = -bound;
        }
    }
}

/// `c_0 x^{n} + ... + c_{n-1} x` for coefficients `c`.
fn poly_without_constant(c: &[i64]) -> IntPolynomial {
    let mut v: Vec<i64> = c.to_vec();
    v.push(0);
    IntPolynomial::from_i64(&v)
}

fn span_upper_float(roots: &RealRoots, c: &[i64]) -> f64 {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for i in 0..roots.degree() {
        let x = roots.root_float(i);
        let mut acc = FloatInterval::ZERO;
        for &ci in c {
            acc = acc.add(FloatInterval::point(ci as f64)).mul(x);
        }
        hi = hi.max(acc.hi);
        lo = lo.min(acc.lo);
    }
    hi - lo
}

/// Right-hand side `c d (1 + log d + N^{1/d})` of the flatness bound, with
/// the universal constant `c` kept symbolic.
#[derive(Clone, Debug)]
pub struct FlatnessReport {
    pub degree: usize,
    pub interlacer_count: u64,
    /// Coefficient of `c`.
    pub c_coefficient: f64,
    pub symbolic: String,
    pub width_upper_bound: Option<MinSpanReport>,
}

pub fn flatness_report(
    f: &IntPolynomial,
    interlacer_count: u64,
    width: Option<MinSpanReport>,
) -> Result<FlatnessReport, NumberFieldError> {
    f.degree()
        .filter(|&d| d >= 1)
        .ok_or(ExactError::DegreeTooSmall { min: 1, got: 0 })?;
    let d = f.deg();
    let df = d as f64;
    let count_term = if interlacer_count == 0 {
        0.0
    } else {
        (interlacer_count as f64).powf(1.0 / df)
    };
    let count_text = if interlacer_count == 0 {
        "0".to_string()
    } else if d == 2 {
        format!("\u{221a}{interlacer_count}")
    } else {
        format!("{interlacer_count}^(1/{d})")
    };
    Ok(FlatnessReport {
        degree: d,
        interlacer_count,
        c_coefficient: df * (1.0 + df.ln() + count_term),
        symbolic: format!("c\u{b7}{d}\u{b7}(1+log {d}+{count_text})"),
        width_upper_bound: width,
    })
}

/// Euler totient, for degree checks of the cyclotomic family.
pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::is_totally_real;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn v(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn eps() -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(100))
    }

    #[test]
    fn golden_ratio_dual_elements() {
        let f = p(&[1, -1, -1]);
        let e = codifferent_element(&f, &v(&[1, 0])).unwrap();
        assert_eq!(e.trace, BigRational::one());
        assert!(e.totally_positive);
        let e = codifferent_element(&f, &v(&[1, -2])).unwrap();
        assert_eq!(e.trace, BigRational::one());
        assert!(!e.totally_positive);
        // numeric embeddings of a / (2a - 1)
        let s5 = 5f64.sqrt();
        for a in [(1.0 + s5) / 2.0, (1.0 - s5) / 2.0] {
            assert!(a / (2.0 * a - 1.0) > 0.0);
        }
    }

    #[test]
    fn inverse_derivative_has_trace_zero() {
        let e = codifferent_element(&p(&[1, 0, -2]), &v(&[0, 1])).unwrap();
        assert!(e.trace.is_zero());
        assert_eq!(e.numerator, p(&[1]));
    }

    #[test]
    fn element_errors() {
        assert_eq!(
            codifferent_element(&p(&[1, -3, 2]), &v(&[1, 0])).unwrap_err(),
            NumberFieldError::NotIrreducible
        );
        assert!(matches!(
            codifferent_element(&p(&[1, 0, -2]), &v(&[1])),
            Err(NumberFieldError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn minimal_traces() {
        let c = SearchConfig::default();
        let m = minimal_trace_set(&p(&[1, -1, -1]), 3, &c).unwrap();
        assert_eq!((m.t_star, m.count), (1, 2));
        let m = minimal_trace_set(&p(&[1, 0, -2]), 3, &c).unwrap();
        assert_eq!((m.t_star, m.count), (1, 3));
        assert!(m
            .elements
            .iter()
            .all(|e| e.totally_positive && e.trace.is_one()));
        match minimal_trace_set(&p(&[1, -1, -6, 6, 8, -8, 1]), 1, &c) {
            Err(NumberFieldError::NoElementUpToTMax { t_max: 1, levels }) => {
                assert_eq!(levels, vec![(1, 0)])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cyclotomic_family() {
        assert_eq!(real_cyclotomic_minpoly(3).unwrap(), p(&[1, 1]));
        assert_eq!(real_cyclotomic_minpoly(5).unwrap(), p(&[1, 1, -1]));
        assert_eq!(
            real_cyclotomic_minpoly(21).unwrap(),
            p(&[1, -1, -6, 6, 8, -8, 1])
        );
        assert!(matches!(
            real_cyclotomic_minpoly(2),
            Err(NumberFieldError::ArgumentTooSmall { .. })
        ));
        for n in 3..=40 {
            let h = real_cyclotomic_minpoly(n).unwrap();
            assert_eq!(h.deg() as u64, (euler_phi(n as u64) / 2).max(1), "n = {n}");
            assert!(is_totally_real(&h).unwrap());
            if h.deg() <= crate::exact::IRREDUCIBILITY_DEGREE_CAP {
                assert!(is_irreducible(&h).unwrap());
            }
            // numeric oracle: 2cos(2 pi / n) is a root
            let x = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
            let val = h.coeffs().iter().fold(0.0, |acc, c| {
                acc * x + c.to_string().parse::<f64>().unwrap()
            });
            assert!(val.abs() < 1e-6, "n = {n}: {val}");
        }
    }

    #[test]
    fn cubic_family_identities() {
        assert_eq!(cubic_family(1), p(&[1, 1, -6, -7]));
        assert_eq!(cubic_family(0), p(&[1, 1, -2, -1]));
        for k in -50i64..=50 {
            let f = cubic_family(k);
            assert_eq!(f.eval(&BigInt::from(-k)), BigInt::from(-1));
            assert_eq!(f.eval(&BigInt::from(-k - 1)), BigInt::one());
        }
        for k in 0..=20 {
            assert!(is_totally_real(&cubic_family(k)).unwrap());
        }
    }

    #[test]
    fn spans() {
        let r = span_of(&p(&[1, 0, -2]), &p(&[1, 0]), &eps()).unwrap();
        assert!(!r.exact_zero);
        assert!((r.midpoint_f64() - 8f64.sqrt()).abs() < 0.01);
        assert!(r.span_interval.width() < eps());
        let r = span_of(&p(&[1, 0, -2]), &p(&[5]), &eps()).unwrap();
        assert!(r.exact_zero && r.span_interval.is_point());
        let r = span_of(&p(&[1, 0, -4, 0, 2]), &p(&[1, 0, -2]), &eps()).unwrap();
        assert!((r.midpoint_f64() - 8f64.sqrt()).abs() < 0.01);
    }

    #[test]
    fn span_shift_invariance() {
        let f = p(&[1, -1, -10, 1]);
        let g = p(&[1, 2, 0]);
        let a = span_of(&f, &g, &eps()).unwrap();
        let b = span_of(&f, &g.add(&p(&[7])), &eps()).unwrap();
        assert!((a.midpoint_f64() - b.midpoint_f64()).abs() < 0.01);
    }

    #[test]
    fn min_spans() {
        let r = min_span_search(&p(&[1, 0, -2]), 3, &eps()).unwrap();
        assert_eq!(r.best.element, p(&[1, 0]));
        assert!(r.width_upper_bound);
        let r = min_span_search(&p(&[1, -1, -1]), 3, &eps()).unwrap();
        assert_eq!(r.best.element, p(&[1, 0]));
        assert!((r.best.midpoint_f64() - 5f64.sqrt()).abs() < 0.01);
        let r = min_span_search(&p(&[1, 0, -4, 0, 2]), 3, &eps()).unwrap();
        assert!(r.best.midpoint_f64() <= 8f64.sqrt() + 0.01);
        for d in 2i64..=50 {
            let s = (d as f64).sqrt();
            if s.fract() == 0.0 {
                continue;
            }
            let r = min_span_search(&p(&[1, 0, -d]), 1, &eps()).unwrap();
            assert!((r.best.midpoint_f64() - 2.0 * s).abs() < 0.01, "D = {d}");
        }
    }

    #[test]
    fn flatness() {
        let r = flatness_report(&p(&[1, 0, -2]), 3, None).unwrap();
        assert_eq!(r.symbolic, "c\u{b7}2\u{b7}(1+log 2+\u{221a}3)");
        assert!((r.c_coefficient - 2.0 * (1.0 + 2f64.ln() + 3f64.sqrt())).abs() < 1e-12);
        let r = flatness_report(&p(&[1, -1, -6, 6, 8, -8, 1]), 0, None).unwrap();
        assert!((r.c_coefficient - 6.0 * (1.0 + 6f64.ln())).abs() < 1e-12);
        let r = flatness_report(&p(&[1, -2, -9, 4, 15, 3]), 218, None).unwrap();
        assert_eq!(r.symbolic, "c\u{b7}5\u{b7}(1+log 5+218^(1/5))");
    }
}
