use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactError, IntPolynomial, RationalInterval};

/// Sturm chain `f, f', -rem(f, f'), ...` with every member scaled by a
/// positive rational so the coefficients stay primitive integers.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<IntPolynomial>,
}

impl SturmSequence {
    pub fn new(f: &IntPolynomial) -> Self {
        let mut chain = Vec::new();
        if f.is_zero() {
            return SturmSequence { chain };
        }
        chain.push(f.positive_primitive());
        let d = f.derivative();
        if d.is_zero() {
            return SturmSequence { chain };
        }
        chain.push(d.positive_primitive());
        loop {
            let n = chain.len();
            let r = chain[n - 2].pseudo_rem_positive(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().positive_primitive());
        }
        SturmSequence { chain }
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.chain
    }

    fn variations_from(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations_from(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations_from(self.chain.iter().map(|p| {
            let lc = p.leading().unwrap().sign();
            let s = if lc == num_bigint::Sign::Plus {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            if positive || p.deg() % 2 == 0 {
                s
            } else {
                s.reverse()
            }
        }))
    }

    /// Number of distinct real roots.
    pub fn total_count(&self) -> usize {
        if self.chain.is_empty() {
            return 0;
        }
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Distinct roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &BigRational, b: &BigRational) -> usize {
        if self.chain.is_empty() || a >= b {
            return 0;
        }
        let half_open = self.variations_at(a) - self.variations_at(b);
        let at_b = self.chain[0].sign_at(b) == Ordering::Equal;
        half_open - usize::from(at_b)
    }
}

/// Number of distinct real roots of `f`.
pub fn count_real_roots(f: &IntPolynomial) -> usize {
    SturmSequence::new(f).total_count()
}

/// Number of distinct roots of `f` in the open interval `(iv.lo, iv.hi)`.
pub fn count_roots_in(f: &IntPolynomial, iv: &RationalInterval) -> usize {
    SturmSequence::new(f).count_open(&iv.lo, &iv.hi)
}

/// Certified isolation of the real roots of a squarefree polynomial.
///
/// Every interval is either a single rational root `[r, r]` or an open
/// interval `(lo, hi)` with `f(lo) f(hi) < 0` containing exactly one root.
/// Closed intervals are pairwise disjoint and sorted.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    poly: IntPolynomial,
    intervals: Vec<RationalInterval>,
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

impl RootIsolation {
    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn intervals(&self) -> &[RationalInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// One bisection step on interval `i` using endpoint signs.
    fn bisect(&mut self, i: usize) {
        let f = &self.poly;
        let iv = &self.intervals[i];
        if iv.is_point() {
            return;
        }
        let m = iv.midpoint();
        let sm = f.sign_at(&m);
        let next = if sm == Ordering::Equal {
            RationalInterval::point(m)
        } else if f.sign_at(&iv.lo) != sm {
            RationalInterval::new(iv.lo.clone(), m)
        } else {
            RationalInterval::new(m, iv.hi.clone())
        };
        self.intervals[i] = next;
    }

    /// Bisects interval `i` until its width is below `eps`.
    pub fn refine_in_place(&mut self, i: usize, eps: &BigRational) {
        while self.intervals[i].width() >= *eps {
            self.bisect(i);
        }
    }

    /// Copy with every interval narrower than `eps`.
    pub fn refined(&self, eps: &BigRational) -> Self {
        let mut out = self.clone();
        for i in 0..out.len() {
            out.refine_in_place(i, eps);
        }
        out
    }
}

/// Cauchy bound: every root satisfies |x| < 1 + max |a_i / a_n|.
fn root_bound(f: &IntPolynomial) -> BigRational {
    let lc = f.leading().unwrap().abs();
    let m = f.coeffs()[1..]
        .iter()
        .map(|c| BigRational::new(c.abs(), lc.clone()))
        .max()
        .unwrap_or_else(BigRational::zero);
    (m + BigRational::one()).ceil() + BigRational::one()
}

pub fn isolate_roots(f: &IntPolynomial) -> Result<RootIsolation, ExactError> {
    f.require_nonzero()?;
    if f.deg() >= 1 && f.gcd(&f.derivative()).deg() > 0 {
        return Err(ExactError::NotSquarefree);
    }
    let sturm = SturmSequence::new(f);
    let mut found: Vec<RationalInterval> = Vec::new();
    if f.deg() >= 1 {
        let b = root_bound(f);
        let lo = -b.clone();
        let n = sturm.count_open(&lo, &b);
        let mut stack = vec![(lo, b, n)];
        while let Some((a, b, n)) = stack.pop() {
            match n {
                0 => {}
                1 => found.push(RationalInterval::new(a, b)),
                _ => {
                    let m = (&a + &b) * half();
                    let left = sturm.count_open(&a, &m);
                    let at_m = f.sign_at(&m) == Ordering::Equal;
                    if at_m {
                        found.push(RationalInterval::point(m.clone()));
                    }
                    let right = n - left - usize::from(at_m);
                    stack.push((m.clone(), b, right));
                    stack.push((a, m, left));
                }
            }
        }
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));

    // Make endpoints non-roots and closed intervals pairwise disjoint.
    for i in 0..found.len() {
        loop {
            let iv = &found[i];
            if iv.is_point() {
                break;
            }
            let bad_ends =
                f.sign_at(&iv.lo) == Ordering::Equal || f.sign_at(&iv.hi) == Ordering::Equal;
            let touches_prev = i > 0 && found[i - 1].hi >= iv.lo;
            let touches_next = i + 1 < found.len() && iv.hi >= found[i + 1].lo;
            if !(bad_ends || touches_prev || touches_next) {
                break;
            }
            let m = iv.midpoint();
            let next = if f.sign_at(&m) == Ordering::Equal {
                RationalInterval::point(m)
            } else if sturm.count_open(&iv.lo, &m) == 1 {
                RationalInterval::new(iv.lo.clone(), m)
            } else {
                RationalInterval::new(m, iv.hi.clone())
            };
            found[i] = next;
        }
    }
    debug_assert!(found.windows(2).all(|w| w[0].hi < w[1].lo));
    Ok(RootIsolation {
        poly: f.clone(),
        intervals: found,
    })
}

pub fn refine_root(
    iso: &RootIsolation,
    index: usize,
    eps: &BigRational,
) -> Result<RationalInterval, ExactError> {
    if index >= iso.len() {
        return Err(ExactError::IndexOutOfRange {
            index,
            count: iso.len(),
        });
    }
    if !eps.is_positive() {
        return Err(ExactError::NonPositiveEps);
    }
    let mut work = iso.clone();
    work.refine_in_place(index, eps);
    Ok(work.intervals[index].clone())
}

fn eval_interval(g: &IntPolynomial, x: &RationalInterval) -> RationalInterval {
    let mut acc = RationalInterval::point(BigRational::zero());
    for c in g.coeffs() {
        acc = acc
            .mul(x)
            .add(&RationalInterval::point(BigRational::from_integer(
                c.clone(),
            )));
    }
    acc
}

/// Exact sign of `g` at the `index`-th root of `iso.poly()`.
///
/// A vanishing value is detected first through `gcd(f, g)`, so the
/// refinement loop afterwards always terminates.
pub fn sign_at_root(
    g: &IntPolynomial,
    iso: &RootIsolation,
    index: usize,
) -> Result<Ordering, ExactError> {
    if index >= iso.len() {
        return Err(ExactError::IndexOutOfRange {
            index,
            count: iso.len(),
        });
    }
    let iv = &iso.intervals[index];
    if iv.is_point() {
        return Ok(g.sign_at(&iv.lo));
    }
    if g.is_zero() {
        return Ok(Ordering::Equal);
    }
    let h = iso.poly.gcd(g);
    if h.deg() >= 1 && count_roots_in(&h, iv) == 1 {
        return Ok(Ordering::Equal);
    }
    let mut work = iso.clone();
    loop {
        let iv = &work.intervals[index];
        if iv.is_point() {
            return Ok(g.sign_at(&iv.lo));
        }
        let val = eval_interval(g, iv);
        if val.lo.is_positive() {
            return Ok(Ordering::Greater);
        }
        if val.hi.is_negative() {
            return Ok(Ordering::Less);
        }
        work.bisect(index);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn isolates_sqrt2() {
        let iso = isolate_roots(&p(&[1, 0, -2])).unwrap();
        assert_eq!(iso.len(), 2);
        let r0 = iso.intervals()[0].to_float();
        let r1 = iso.intervals()[1].to_float();
        assert!(r0.lo <= -std::f64::consts::SQRT_2 && -std::f64::consts::SQRT_2 <= r0.hi);
        assert!(r1.lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= r1.hi);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_roots(&p(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(count_real_roots(&p(&[1, 0, 1])), 0);
    }

    #[test]
    fn quintic_has_five_roots() {
        let iso = isolate_roots(&p(&[1, -2, -9, 4, 15, 3])).unwrap();
        assert_eq!(iso.len(), 5);
        let sturm = SturmSequence::new(iso.poly());
        for iv in iso.intervals() {
            assert_eq!(sturm.count_open(&iv.lo, &iv.hi), 1);
        }
    }

    #[test]
    fn rational_roots_become_points_or_disjoint() {
        let f = p(&[1, -1]).mul(&p(&[1, 0])).mul(&p(&[1, 1])); // roots -1, 0, 1
        let iso = isolate_roots(&f).unwrap();
        assert_eq!(iso.len(), 3);
        assert!(iso.intervals().windows(2).all(|w| w[0].hi < w[1].lo));
        for (i, r) in [-1i64, 0, 1].iter().enumerate() {
            assert!(iso.intervals()[i].contains(&q(*r, 1)));
        }
    }

    #[test]
    fn not_squarefree_is_rejected() {
        let f = p(&[1, -1]).mul(&p(&[1, -1]));
        assert_eq!(isolate_roots(&f).unwrap_err(), ExactError::NotSquarefree);
    }

    #[test]
    fn refine_examples() {
        let iso = isolate_roots(&p(&[1, 0, -2])).unwrap();
        let iv = refine_root(&iso, 1, &q(1, 100)).unwrap();
        assert!(iv.width() < q(1, 100));
        let f = iv.to_float();
        assert!(f.lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= f.hi);
        let iv0 = refine_root(&iso, 0, &q(1, 1)).unwrap();
        assert!(iv0.width() < q(1, 1));
        assert!(matches!(
            refine_root(&iso, 2, &q(1, 1)),
            Err(ExactError::IndexOutOfRange { .. })
        ));
        assert_eq!(
            refine_root(&iso, 0, &q(0, 1)),
            Err(ExactError::NonPositiveEps)
        );
    }

    #[test]
    fn signs_at_roots() {
        let iso = isolate_roots(&p(&[1, 0, -2])).unwrap();
        let x = p(&[1, 0]);
        assert_eq!(sign_at_root(&x, &iso, 0).unwrap(), Ordering::Less);
        assert_eq!(sign_at_root(&x, &iso, 1).unwrap(), Ordering::Greater);

        let f = p(&[1, 0, -4, 0, 2]);
        let iso4 = isolate_roots(&f).unwrap();
        let g = p(&[1, 0, -2]);
        for i in 0..4 {
            assert_ne!(sign_at_root(&g, &iso4, i).unwrap(), Ordering::Equal);
            assert_eq!(sign_at_root(&f, &iso4, i).unwrap(), Ordering::Equal);
        }
    }

    #[test]
    fn shared_root_detected_exactly() {
        // f = (x^2 - 2)(x - 3), g = x^2 - 2 vanishes at the first and last... roots ±√2
        let f = p(&[1, 0, -2]).mul(&p(&[1, -3]));
        let iso = isolate_roots(&f).unwrap();
        let g = p(&[1, 0, -2]).mul(&p(&[1, 5]));
        let signs: Vec<_> = (0..3).map(|i| sign_at_root(&g, &iso, i).unwrap()).collect();
        assert_eq!(
            signs,
            vec![Ordering::Equal, Ordering::Equal, Ordering::Greater]
        );
    }

    proptest::proptest! {
        #[test]
        fn isolation_certificates_hold(c in proptest::collection::vec(-9i64..=9, 2..=6)) {
            let mut v = vec![1i64];
            v.extend(c);
            let f = p(&v);
            proptest::prop_assume!(f.gcd(&f.derivative()).deg() == 0);
            let iso = isolate_roots(&f).unwrap();
            let sturm = SturmSequence::new(&f);
            proptest::prop_assert_eq!(iso.len(), sturm.total_count());
            for iv in iso.intervals() {
                if iv.is_point() {
                    proptest::prop_assert_eq!(f.sign_at(&iv.lo), Ordering::Equal);
                } else {
                    proptest::prop_assert_eq!(sturm.count_open(&iv.lo, &iv.hi), 1);
                    proptest::prop_assert!(f.sign_at(&iv.lo) != Ordering::Equal);
                }
            }
            proptest::prop_assert!(iso.intervals().windows(2).all(|w| w[0].hi < w[1].lo));
        }
    }
}
