use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactError, IntPolynomial};

type RatPoly = Vec<BigRational>; // descending, no leading zeros

fn to_rat(f: &IntPolynomial) -> RatPoly {
    f.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn strip(mut p: RatPoly) -> RatPoly {
    let k = p.iter().position(|c| !c.is_zero()).unwrap_or(p.len());
    p.drain(..k);
    p
}

fn rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return r;
    }
    let steps = r.len() - db;
    for i in 0..steps {
        if r[i].is_zero() {
            continue;
        }
        let q = &r[i] / &b[0];
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &q * bc;
        }
    }
    strip(r[steps..].to_vec())
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Euclidean recursion over Q:
/// `Res(f, g) = (-1)^{mn} lc(g)^{m - deg r} Res(g, r)` with `r = f mod g`.
fn res_rat(f: RatPoly, g: RatPoly) -> BigRational {
    let m = f.len() - 1;
    let n = g.len() - 1;
    if n == 0 {
        return pow(&g[0], m);
    }
    if m == 0 {
        return pow(&f[0], n);
    }
    if m < n {
        let s = res_rat(g, f);
        return if (m * n) % 2 == 1 { -s } else { s };
    }
    let r = rem(&f, &g);
    if r.is_empty() {
        return BigRational::zero();
    }
    let k = r.len() - 1;
    let mut out = pow(&g[0], m - k) * res_rat(g, r);
    if (m * n) % 2 == 1 {
        out = -out;
    }
    out
}

/// Exact resultant `Res(f, g)`. For monic `f` this is `prod g(alpha)` over
/// the complex roots of `f`.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt, ExactError> {
    f.require_nonzero()?;
    g.require_nonzero()?;
    let r = res_rat(to_rat(f), to_rat(g));
    debug_assert!(r.is_integer());
    Ok(r.to_integer())
}

/// `Disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPolynomial) -> Result<BigInt, ExactError> {
    let n = match f.degree() {
        None => return Err(ExactError::ZeroPolynomial),
        Some(0) => return Err(ExactError::DegreeTooSmall { min: 1, got: 0 }),
        Some(n) => n,
    };
    let r = resultant(f, &f.derivative())?;
    let lc = f.leading().unwrap();
    let mut d = r / lc;
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -d;
    }
    Ok(d)
}
