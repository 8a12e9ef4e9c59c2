//! Dense integer polynomials in descending coefficient order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Integer polynomial with coefficients stored from the leading term down to
/// the constant term. The zero polynomial is the empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from descending coefficients, stripping leading zeros.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let first_nonzero = coeffs.iter().position(|c| !c.is_zero());
        match first_nonzero {
            Some(k) => IntPolynomial {
                coeffs: coeffs[k..].to_vec(),
            },
            None => IntPolynomial { coeffs: Vec::new() },
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &BigInt) -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one(), -r],
        }
    }

    /// `x^n`
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::one();
        IntPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree with the zero polynomial mapped to 0. Only for callers that
    /// have already excluded zero.
    pub(crate) fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^k`.
    pub fn coeff(&self, k: usize) -> BigInt {
        match self.degree() {
            Some(n) if k <= n => self.coeffs[n - k].clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Ascending coefficients, `a_0, a_1, ..., a_n`.
    pub fn ascending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn from_ascending(mut asc: Vec<BigInt>) -> Self {
        asc.reverse();
        Self::new(asc)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in &self.coeffs {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in &self.coeffs {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `f(p/q)` for `q > 0`, evaluated through the homogenized form
    /// `q^n f(p/q)` so that no rational arithmetic is needed.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let p = x.numer();
        let q = x.denom();
        // Horner on q^n f(p/q): acc_{k+1} = acc_k * p + c_k * q^{k+1}.
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in &self.coeffs {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        acc.sign().cmp_zero()
    }

    pub fn derivative(&self) -> Self {
        let n = match self.degree() {
            Some(0) | None => return Self::zero(),
            Some(n) => n,
        };
        let coeffs = self.coeffs[..n]
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(n - i))
            .collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut asc = self.ascending();
        let other_asc = other.ascending();
        if other_asc.len() > asc.len() {
            asc.resize(other_asc.len(), BigInt::zero());
        }
        for (a, b) in asc.iter_mut().zip(other_asc) {
            *a += b;
        }
        Self::from_ascending(asc)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and normalizes the leading coefficient to be positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.coeffs[0].is_negative() {
            c = -c;
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    /// Divides out the positive content, keeping the sign of every value.
    pub(crate) fn positive_primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    /// Pseudo-remainder `lc(b)^k * a mod b` with `k` chosen so the multiplier
    /// is positive. The result is therefore a positive multiple of the true
    /// remainder over Q.
    pub fn pseudo_rem_positive(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo remainder by zero polynomial");
        let da = match self.degree() {
            Some(d) if d >= db => d,
            _ => return self.clone(),
        };
        let lb = &b.coeffs[0];
        let mut r: Vec<BigInt> = self.coeffs.clone();
        let mut steps = 0usize;
        for i in 0..=(da - db) {
            let lead = r[i].clone();
            if !lead.is_zero() {
                for x in r.iter_mut() {
                    *x *= lb;
                }
                for (j, bc) in b.coeffs.iter().enumerate() {
                    r[i + j] -= &lead * bc;
                }
            } else {
                for x in r.iter_mut() {
                    *x *= lb;
                }
            }
            steps += 1;
        }
        let mut rem = Self::new(r[(da - db + 1)..].to_vec());
        if lb.is_negative() && steps % 2 == 1 {
            rem = rem.neg();
        }
        rem
    }

    /// Exact division over Z, or `None` if `other` does not divide `self` in Z[x].
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let db = other.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let da = self.deg();
        if da < db {
            return None;
        }
        let lb = &other.coeffs[0];
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        for i in 0..=(da - db) {
            if r[i].is_zero() {
                continue;
            }
            let (qi, rem) = r[i].div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in other.coeffs.iter().enumerate() {
                r[i + j] -= &qi * bc;
            }
            q[i] = qi;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Quotient and remainder over Q, returned with a common positive
    /// denominator removed: `den * self = q * other + r`.
    pub fn div_rem_rational(&self, other: &Self) -> (Vec<BigRational>, Vec<BigRational>) {
        let db = other.degree().expect("division by zero polynomial");
        let mut r: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        if self.is_zero() || self.deg() < db {
            return (Vec::new(), r);
        }
        let da = self.deg();
        let lb = BigRational::from_integer(other.coeffs[0].clone());
        let mut q = vec![BigRational::zero(); da - db + 1];
        for i in 0..=(da - db) {
            if r[i].is_zero() {
                continue;
            }
            let qi = &r[i] / &lb;
            for (j, bc) in other.coeffs.iter().enumerate() {
                r[i + j] -= &qi * BigRational::from_integer(bc.clone());
            }
            q[i] = qi;
        }
        let rem = r[(da - db + 1)..].to_vec();
        (q, rem)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem_positive(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// `self / gcd(self, self')`, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides")
            .primitive_part()
    }

    /// `f(x + n)`, via Horner's scheme on polynomials.
    pub fn shift(&self, n: &BigInt) -> Self {
        let x_plus_n = IntPolynomial {
            coeffs: vec![BigInt::one(), n.clone()],
        };
        let mut acc = Self::zero();
        for c in &self.coeffs {
            acc = acc.mul(&x_plus_n).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `f(-x)`
    pub fn reflect(&self) -> Self {
        let n = self.deg();
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if (n - i) % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Remainder of `self` modulo a monic-or-not `m` over Q, as ascending
    /// rational coefficients of length `deg m`.
    pub fn rem_rational(&self, m: &Self) -> Vec<BigRational> {
        let dm = m.deg();
        let (_, rem) = self.div_rem_rational(m);
        let mut asc: Vec<BigRational> = rem.into_iter().rev().collect();
        asc.resize(dm, BigRational::zero());
        asc
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Canonical text: sparse expression, descending powers, explicit signs.
    pub fn to_canonical(&self) -> String {
        self.to_string()
    }

    /// Comma-separated descending coefficients.
    pub fn to_coeff_list(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub(crate) fn require_nonzero(&self) -> Result<(), ExactError> {
        if self.is_zero() {
            Err(ExactError::ZeroPolynomial)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.deg();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = n - i;
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || power == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match power {
                0 => {}
                1 => write!(f, "x")?,
                p => write!(f, "x^{p}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

trait SignCmp {
    fn cmp_zero(self) -> Ordering;
}

impl SignCmp for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}
