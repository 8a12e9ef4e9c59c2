//! The simplices `K(f)` (coefficient vectors of interlacers) and `C(f)`
//! (the cyclic polytope on the moment curve), with the barycentric
//! coordinates `lambda_i = g(a_i) / f'(a_i)` linking them.
//!
//! Nothing here materializes the vertices as algebraic numbers. Every
//! decision reduces to the sign of an integer polynomial at a root of `f`,
//! settled by a float-interval filter first and exact arithmetic otherwise.
//!
//! The vertex-inverse formula is usually written `a_i^{n-j} / f'(a_i)` with an
//! unnamed exponent base; the code uses the degree `d` of `f` for `n`.

mod gram;

pub use gram::{gram_power_matrix, power_sums, GramPowerMatrix};

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{
    discriminant, isolate_roots, resultant, sign_at_root, ExactError, FloatInterval, IntPolynomial,
    RationalInterval, RootIsolation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("polynomial is not totally real")]
    NotTotallyReal,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree too small: need at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },
    #[error("degree violation: deg g = {g_degree}, deg f = {f_degree}")]
    DegreeViolation { f_degree: usize, g_degree: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular Gram matrix (internal error: f must be squarefree)")]
    SingularGram,
    #[error("trace scale must be positive")]
    NonPositiveTrace,
}

/// Default enclosure width for vertex boxes, `2^-20`.
pub fn default_precision() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1u64 << 20))
}

fn pow2_inv(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// Certified real roots `a_1 < ... < a_d` of a squarefree, totally real
/// polynomial with tight float enclosures and the exact signs of `f'(a_i)`.
#[derive(Clone, Debug)]
pub struct RealRoots {
    iso: RootIsolation,
    floats: Vec<FloatInterval>,
    deriv_signs: Vec<Ordering>,
    deriv_floats: Vec<FloatInterval>,
    disc: OnceLock<BigInt>,
}

impl RealRoots {
    pub fn new(f: &IntPolynomial) -> Result<Self, GeometryError> {
        f.require_nonzero()?;
        if f.deg() == 0 {
            return Err(GeometryError::DegreeTooSmall { min: 1, got: 0 });
        }
        let iso = match isolate_roots(f) {
            Ok(iso) => iso,
            Err(ExactError::NotSquarefree) => return Err(GeometryError::NotSquarefree),
            Err(e) => return Err(e.into()),
        };
        if iso.len() != f.deg() {
            return Err(GeometryError::NotTotallyReal);
        }
        // absolute width 2^-56 keeps float enclosures within a few ulps
        let iso = iso.refined(&pow2_inv(56));
        let floats: Vec<FloatInterval> = iso.intervals().iter().map(|iv| iv.to_float()).collect();
        let fp = f.derivative();
        let d = f.deg();
        let lc_positive = f.leading().unwrap().is_positive();
        // Between consecutive simple roots f' alternates; at the top root it
        // has the sign of lc(f).
        let deriv_signs = (0..d)
            .map(|i| {
                let s = if (d - 1 - i).is_multiple_of(2) {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
                if lc_positive {
                    s
                } else {
                    s.reverse()
                }
            })
            .collect();
        let deriv_floats = floats.iter().map(|&x| eval_float(&fp, x)).collect();
        Ok(RealRoots {
            iso,
            floats,
            deriv_signs,
            deriv_floats,
            disc: OnceLock::new(),
        })
    }

    pub fn poly(&self) -> &IntPolynomial {
        self.iso.poly()
    }

    pub fn degree(&self) -> usize {
        self.iso.len()
    }

    pub fn isolation(&self) -> &RootIsolation {
        &self.iso
    }

    pub fn root_float(&self, i: usize) -> FloatInterval {
        self.floats[i]
    }

    pub fn root_floats(&self) -> &[FloatInterval] {
        &self.floats
    }

    pub fn deriv_sign(&self, i: usize) -> Ordering {
        self.deriv_signs[i]
    }

    pub fn deriv_float(&self, i: usize) -> FloatInterval {
        self.deriv_floats[i]
    }

    /// Enclosure of the `i`-th root of width below `eps`.
    pub fn root_enclosure(&self, i: usize, eps: &BigRational) -> RationalInterval {
        let mut work = self.iso.clone();
        work.refine_in_place(i, eps);
        work.intervals()[i].clone()
    }

    pub fn discriminant(&self) -> &BigInt {
        self.disc
            .get_or_init(|| discriminant(self.poly()).expect("degree checked on construction"))
    }

    /// Exact sign of `g(a_i)`.
    pub fn sign_at(&self, g: &IntPolynomial, i: usize) -> Ordering {
        let v = eval_float(g, self.floats[i]);
        if v.is_positive() {
            return Ordering::Greater;
        }
        if v.is_negative() {
            return Ordering::Less;
        }
        sign_at_root(g, &self.iso, i).expect("index in range")
    }

    /// Exact sign of `lambda_i = g(a_i) / f'(a_i)`.
    pub fn lambda_sign(&self, g: &IntPolynomial, i: usize) -> Ordering {
        let s = self.sign_at(g, i);
        if self.deriv_signs[i] == Ordering::Greater {
            s
        } else {
            s.reverse()
        }
    }

    /// Rational enclosure of `g(a_i) / f'(a_i)` of roughly the given width.
    pub fn lambda_enclosure(
        &self,
        g: &IntPolynomial,
        i: usize,
        eps: &BigRational,
    ) -> RationalInterval {
        if let Some(q) = eval_float(g, self.floats[i]).div(self.deriv_floats[i]) {
            if let (Some(lo), Some(hi)) =
                (BigRational::from_float(q.lo), BigRational::from_float(q.hi))
            {
                if &hi - &lo < *eps {
                    return RationalInterval::new(lo, hi);
                }
            }
        }
        let fp = self.poly().derivative();
        let mut root_eps = eps.clone();
        loop {
            let iv = self.root_enclosure(i, &root_eps);
            let num = eval_rational_interval(g, &iv);
            let den = eval_rational_interval(&fp, &iv);
            if let Some(r) = den.recip() {
                let q = num.mul(&r);
                if q.width() < *eps || iv.is_point() {
                    return q;
                }
            }
            root_eps /= BigRational::from_integer(BigInt::from(16));
        }
    }
}

pub(crate) fn eval_float(g: &IntPolynomial, x: FloatInterval) -> FloatInterval {
    let mut acc = FloatInterval::ZERO;
    for c in g.coeffs() {
        acc = acc.mul(x).add(FloatInterval::from_int(c));
    }
    acc
}

pub(crate) fn eval_rational_interval(g: &IntPolynomial, x: &RationalInterval) -> RationalInterval {
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

/// Coordinate box of `t K(f)`: the first coordinate is fixed to `t`, and
/// `bounds[j]` encloses the range of the `(j+1)`-th coefficient over the
/// `d` vertices `t * prod_{k != i} (x - a_k)`.
#[derive(Clone, Debug)]
pub struct SimplexBox {
    pub poly: IntPolynomial,
    pub trace_scale: BigInt,
    pub bounds: Vec<RationalInterval>,
    /// `vertices[i][j]` encloses coefficient `j+1` of vertex `i`.
    pub vertices: Vec<Vec<RationalInterval>>,
}

impl SimplexBox {
    /// Integer candidates for free coordinate `j`, if any.
    pub fn candidates(&self, j: usize) -> Option<(BigInt, BigInt)> {
        self.bounds[j].integer_range()
    }

    /// Number of integer points in the box (0 if some coordinate has none).
    pub fn volume(&self) -> BigInt {
        self.bounds
            .iter()
            .map(|b| match b.integer_range() {
                Some((lo, hi)) => hi - lo + BigInt::one(),
                None => BigInt::zero(),
            })
            .product()
    }
}

fn vertex_enclosures(roots: &[RationalInterval], t: &BigRational) -> Vec<Vec<RationalInterval>> {
    let d = roots.len();
    (0..d)
        .map(|i| {
            // ascending-degree interval polynomial, start with constant t
            let mut poly = vec![RationalInterval::point(t.clone())];
            for (k, r) in roots.iter().enumerate() {
                if k == i {
                    continue;
                }
                // multiply by (x - r)
                let mut next = vec![RationalInterval::point(BigRational::zero()); poly.len() + 1];
                for (e, c) in poly.iter().enumerate() {
                    next[e + 1] = next[e + 1].add(c);
                    next[e] = next[e].sub(&c.mul(r));
                }
                poly = next;
            }
            // descending, skip the leading t
            poly.into_iter().rev().skip(1).collect()
        })
        .collect()
}

/// Certified coordinate box of `t K(f)`, tightened until every vertex
/// coordinate enclosure is narrower than `precision` and the integer
/// candidate ranges are stable under one further refinement.
pub fn vertex_boxes(
    f: &IntPolynomial,
    t: &BigInt,
    precision: &BigRational,
) -> Result<SimplexBox, GeometryError> {
    let roots = RealRoots::new(f)?;
    vertex_boxes_with(&roots, t, precision)
}

pub fn vertex_boxes_with(
    roots: &RealRoots,
    t: &BigInt,
    precision: &BigRational,
) -> Result<SimplexBox, GeometryError> {
    let d = roots.degree();
    if d < 2 {
        return Err(GeometryError::DegreeTooSmall { min: 2, got: d });
    }
    if !t.is_positive() {
        return Err(GeometryError::NonPositiveTrace);
    }
    if !precision.is_positive() {
        return Err(ExactError::NonPositiveEps.into());
    }
    let tq = BigRational::from_integer(t.clone());
    let mut root_eps = precision / (&tq * BigRational::from_integer(BigInt::from(1u32 << 8)));
    let mut previous: Option<Vec<Option<(BigInt, BigInt)>>> = None;
    loop {
        let encl: Vec<RationalInterval> =
            (0..d).map(|i| roots.root_enclosure(i, &root_eps)).collect();
        let vertices = vertex_enclosures(&encl, &tq);
        let tight = vertices.iter().flatten().all(|iv| iv.width() < *precision);
        if tight {
            let bounds: Vec<RationalInterval> = (0..d - 1)
                .map(|j| {
                    vertices[1..]
                        .iter()
                        .fold(vertices[0][j].clone(), |acc, v| acc.hull(&v[j]))
                })
                .collect();
            let cands: Vec<Option<(BigInt, BigInt)>> =
                bounds.iter().map(|b| b.integer_range()).collect();
            if previous.as_ref() == Some(&cands) {
                return Ok(SimplexBox {
                    poly: roots.poly().clone(),
                    trace_scale: t.clone(),
                    bounds,
                    vertices,
                });
            }
            previous = Some(cands);
        }
        root_eps /= BigRational::from_integer(BigInt::from(16));
    }
}

/// Barycentric coordinates of `g` in `K(f)` (or `t K(f)`).
#[derive(Clone, Debug)]
pub struct LambdaVector {
    pub values: Vec<RationalInterval>,
    pub signs: Vec<Ordering>,
    /// Exact `Res(f, g) / Disc(f)`.
    pub res_over_disc: BigRational,
    /// Exact `prod lambda_i`; equals `(-1)^{d(d-1)/2} Res/Disc` for monic `f`.
    pub product: BigRational,
}

impl LambdaVector {
    pub fn all_positive(&self) -> bool {
        self.signs.iter().all(|s| *s == Ordering::Greater)
    }

    pub fn any_zero(&self) -> bool {
        self.signs.contains(&Ordering::Equal)
    }

    /// `|Res(f, g) / Disc(f)|`
    pub fn product_identity(&self) -> BigRational {
        self.res_over_disc.abs()
    }

    /// Interval sum of the lambda enclosures.
    pub fn sum_enclosure(&self) -> RationalInterval {
        self.values
            .iter()
            .fold(RationalInterval::point(BigRational::zero()), |acc, v| {
                acc.add(v)
            })
    }

    /// Interval product of the lambda enclosures.
    pub fn product_enclosure(&self) -> RationalInterval {
        self.values
            .iter()
            .fold(RationalInterval::point(BigRational::one()), |acc, v| {
                acc.mul(v)
            })
    }
}

/// `prod lambda_i` as an exact rational, from resultants only.
///
/// For `f` of leading coefficient `a`:
/// `prod g(a_i) = Res(f, g) / a^{deg g}` and
/// `prod f'(a_i) = (-1)^{d(d-1)/2} a Disc(f) / a^{d-1}`.
pub(crate) fn exact_lambda_product(
    f: &IntPolynomial,
    g: &IntPolynomial,
    res: &BigInt,
    disc: &BigInt,
) -> BigRational {
    let d = f.deg();
    let a = BigRational::from_integer(f.leading().unwrap().clone());
    let dg = g.deg() as i32;
    let mut v = BigRational::new(res.clone(), disc.clone()) * a.pow(d as i32 - 2 - dg);
    if (d * (d - 1) / 2) % 2 == 1 {
        v = -v;
    }
    v
}

pub fn lambda_of(f: &IntPolynomial, g: &IntPolynomial) -> Result<LambdaVector, GeometryError> {
    let roots = RealRoots::new(f)?;
    lambda_of_with(&roots, g, &default_precision())
}

pub fn lambda_of_with(
    roots: &RealRoots,
    g: &IntPolynomial,
    eps: &BigRational,
) -> Result<LambdaVector, GeometryError> {
    let f = roots.poly();
    let d = roots.degree();
    if !g.is_zero() && g.deg() + 1 > d {
        return Err(GeometryError::DegreeViolation {
            f_degree: d,
            g_degree: g.deg(),
        });
    }
    let signs: Vec<Ordering> = (0..d).map(|i| roots.lambda_sign(g, i)).collect();
    let values: Vec<RationalInterval> = (0..d).map(|i| roots.lambda_enclosure(g, i, eps)).collect();
    let disc = roots.discriminant().clone();
    let (res_over_disc, product) = if g.is_zero() {
        (BigRational::zero(), BigRational::zero())
    } else {
        let res = resultant(f, g)?;
        (
            BigRational::new(res.clone(), disc.clone()),
            exact_lambda_product(f, g, &res, &disc),
        )
    };
    Ok(LambdaVector {
        values,
        signs,
        res_over_disc,
        product,
    })
}

/// Polynomial `t x^{d-1} + b_1 x^{d-2} + ... + b_{d-1}` for a coefficient
/// vector `(t, b_1, ..., b_{d-1})`.
pub fn poly_from_vector(b: &[BigInt]) -> IntPolynomial {
    IntPolynomial::new(b.to_vec())
}

/// Exact membership of an integer point in `C(f)` (closed, boundary included).
///
/// Solves `(A_C A_C^t) mu = p` over Q; then `lambda_i = u(a_i)` with
/// `u = sum mu_j x^{d-j}`, since `A_C^{-1} = A_C^t (A_C A_C^t)^{-1}`.
pub fn c_membership(f: &IntPolynomial, p: &[BigInt]) -> Result<bool, GeometryError> {
    let roots = RealRoots::new(f)?;
    let gram = gram_power_matrix(f)?;
    CMembership::new(&roots, gram).contains(p)
}

/// Reusable membership tester for `C(f)`.
pub struct CMembership<'a> {
    roots: &'a RealRoots,
    gram: GramPowerMatrix,
    power_sums: Vec<BigInt>,
}

impl<'a> CMembership<'a> {
    pub fn new(roots: &'a RealRoots, gram: GramPowerMatrix) -> Self {
        let d = roots.degree();
        let power_sums = power_sums(roots.poly(), d).expect("monic checked by gram");
        CMembership {
            roots,
            gram,
            power_sums,
        }
    }

    pub fn contains(&self, p: &[BigInt]) -> Result<bool, GeometryError> {
        let d = self.roots.degree();
        if p.len() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
        if !p[d - 1].is_one() {
            return Ok(false);
        }
        let mu = self.gram.solve(p)?;
        let trace: BigRational = mu
            .iter()
            .enumerate()
            .map(|(j, m)| m * BigRational::from_integer(self.power_sums[d - 1 - j].clone()))
            .sum();
        if !trace.is_one() {
            return Ok(false);
        }
        let den = mu.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
        let u = IntPolynomial::new(
            mu.iter()
                .map(|m| (m * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        );
        Ok((0..d).all(|i| self.roots.sign_at(&u, i) != Ordering::Less))
    }
}

/// `|K(f) cap Z^d|` including boundary points, by scanning the vertex box
/// and testing `lambda_i >= 0` exactly.
pub fn count_k_points(f: &IntPolynomial) -> Result<u64, GeometryError> {
    let roots = RealRoots::new(f)?;
    let boxed = vertex_boxes_with(&roots, &BigInt::one(), &default_precision())?;
    let mut count = 0u64;
    for_each_box_point(&boxed.bounds, |b| {
        let mut v = vec![BigInt::one()];
        v.extend_from_slice(b);
        let g = poly_from_vector(&v);
        if (0..roots.degree()).all(|i| roots.lambda_sign(&g, i) != Ordering::Less) {
            count += 1;
        }
    });
    Ok(count)
}

/// Coordinate box of `C(f)` for the first `d-1` coordinates `a^{d-1}, ..., a`.
pub fn c_box(roots: &RealRoots) -> Vec<RationalInterval> {
    let d = roots.degree();
    let eps = pow2_inv(30);
    let encl: Vec<RationalInterval> = (0..d).map(|i| roots.root_enclosure(i, &eps)).collect();
    (0..d - 1)
        .map(|j| {
            let e = d - 1 - j;
            let pow = |iv: &RationalInterval| {
                (0..e).fold(RationalInterval::point(BigRational::one()), |acc, _| {
                    acc.mul(iv)
                })
            };
            encl[1..]
                .iter()
                .fold(pow(&encl[0]), |acc, iv| acc.hull(&pow(iv)))
        })
        .collect()
}

/// `|C(f) cap Z^d|` by scanning the `C(f)` coordinate box with [`CMembership`].
pub fn count_c_points(f: &IntPolynomial) -> Result<u64, GeometryError> {
    let roots = RealRoots::new(f)?;
    if roots.degree() < 2 {
        return Err(GeometryError::DegreeTooSmall {
            min: 2,
            got: roots.degree(),
        });
    }
    let gram = gram_power_matrix(f)?;
    let tester = CMembership::new(&roots, gram);
    let bounds = c_box(&roots);
    let mut count = 0u64;
    let mut err = None;
    for_each_box_point(&bounds, |p| {
        let mut v = p.to_vec();
        v.push(BigInt::one());
        match tester.contains(&v) {
            Ok(true) => count += 1,
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// Visits every integer point of a rational box in lexicographic order.
pub(crate) fn for_each_box_point(bounds: &[RationalInterval], mut visit: impl FnMut(&[BigInt])) {
    let mut ranges = Vec::with_capacity(bounds.len());
    for b in bounds {
        match b.integer_range() {
            Some(r) => ranges.push(r),
            None => return,
        }
    }
    if ranges.is_empty() {
        visit(&[]);
        return;
    }
    let mut cur: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
    loop {
        visit(&cur);
        let mut k = ranges.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cur[k] < ranges[k].1 {
                cur[k] += 1;
                for (c, r) in cur.iter_mut().zip(&ranges).skip(k + 1) {
                    *c = r.0.clone();
                }
                break;
            }
        }
    }
}
