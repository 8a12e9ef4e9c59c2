use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::GeometryError;
use crate::exact::IntPolynomial;

/// Newton power sums `p_0, ..., p_{n}` of the roots of a monic polynomial.
pub fn power_sums(f: &IntPolynomial, n: usize) -> Result<Vec<BigInt>, GeometryError> {
    if !f.is_monic() {
        return Err(GeometryError::NotMonic);
    }
    let d = f.deg();
    // f = x^d + c_1 x^{d-1} + ... + c_d
    let c: Vec<BigInt> = f.coeffs().to_vec();
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::from(d);
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(d) {
            if i == k {
                acc += BigInt::from(k) * &c[i];
            } else {
                acc += &c[i] * &p[k - i];
            }
        }
        p[k] = -acc;
    }
    Ok(p)
}

/// `M_{ij} = tr(a^{2d-i-j})` for 1-based `i, j`; equals `A_C A_C^t` for the
/// moment-curve vertex matrix of the cyclic polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramPowerMatrix {
    entries: Vec<Vec<BigInt>>,
}

impl GramPowerMatrix {
    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Solves `M mu = rhs` over Q by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &[BigInt]) -> Result<Vec<BigRational>, GeometryError> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut a: Vec<Vec<BigRational>> = self
            .entries
            .iter()
            .zip(rhs)
            .map(|(row, r)| {
                row.iter()
                    .chain(std::iter::once(r))
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(GeometryError::SingularGram)?;
            a.swap(col, pivot);
            let inv = BigRational::one() / &a[col][col];
            for j in col..=n {
                a[col][j] = &a[col][j] * &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for j in col..=n {
                        let v = &factor * &a[col][j];
                        a[r][j] -= v;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|row| row[n].clone()).collect())
    }
}

pub fn gram_power_matrix(f: &IntPolynomial) -> Result<GramPowerMatrix, GeometryError> {
    let d = f
        .degree()
        .ok_or(GeometryError::DegreeTooSmall { min: 1, got: 0 })?;
    if d == 0 {
        return Err(GeometryError::DegreeTooSmall { min: 1, got: 0 });
    }
    let p = power_sums(f, 2 * d - 2)?;
    let entries = (1..=d)
        .map(|i| (1..=d).map(|j| p[2 * d - i - j].clone()).collect())
        .collect();
    Ok(GramPowerMatrix { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn examples() {
        let g = gram_power_matrix(&IntPolynomial::from_i64(&[1, 0, -2])).unwrap();
        assert_eq!(g.entries(), m(&[&[4, 0], &[0, 2]]).as_slice());
        let g = gram_power_matrix(&IntPolynomial::from_i64(&[1, -1, -1])).unwrap();
        assert_eq!(g.entries(), m(&[&[3, 1], &[1, 2]]).as_slice());
        let g = gram_power_matrix(&IntPolynomial::from_i64(&[1, -1])).unwrap();
        assert_eq!(g.entries(), m(&[&[1]]).as_slice());
        assert_eq!(
            gram_power_matrix(&IntPolynomial::from_i64(&[2, 0, -1])),
            Err(GeometryError::NotMonic)
        );
    }

    #[test]
    fn matches_numeric_vandermonde_product() {
        // roots of x^3 - 3x + 1 are 2cos(2πk/9), k = 1, 2, 4
        let f = IntPolynomial::from_i64(&[1, 0, -3, 1]);
        let g = gram_power_matrix(&f).unwrap();
        let roots: Vec<f64> = [1.0f64, 2.0, 4.0]
            .iter()
            .map(|k| 2.0 * (2.0 * std::f64::consts::PI * k / 9.0).cos())
            .collect();
        for i in 1..=3 {
            for j in 1..=3 {
                let s: f64 = roots.iter().map(|a| a.powi((6 - i - j) as i32)).sum();
                let exact: f64 = g.entries()[i - 1][j - 1].to_string().parse().unwrap();
                assert!((s - exact).abs() < 1e-6);
                assert_eq!(s.round(), exact);
            }
        }
    }

    #[test]
    fn solve_inverts() {
        let g = gram_power_matrix(&IntPolynomial::from_i64(&[1, -1, -1])).unwrap();
        let mu = g.solve(&[BigInt::from(0), BigInt::from(1)]).unwrap();
        // [[3,1],[1,2]] mu = (0,1) -> mu = (-1/5, 3/5)
        assert_eq!(mu[0], BigRational::new(BigInt::from(-1), BigInt::from(5)));
        assert_eq!(mu[1], BigRational::new(BigInt::from(3), BigInt::from(5)));
    }
}
