use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactError, IntPolynomial};

type Matrix = Vec<Vec<BigRational>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Matrix of multiplication by `g` on `Q[x]/(f)` in the basis `1, x, ..., x^{d-1}`.
fn multiplication_matrix(f: &IntPolynomial, g: &IntPolynomial) -> Matrix {
    let d = f.deg();
    let mut m = vec![vec![BigRational::zero(); d]; d];
    for (j, x_j) in (0..d).map(IntPolynomial::monomial).enumerate() {
        for (row, v) in m.iter_mut().zip(g.mul(&x_j).rem_rational(f)) {
            row[j] = v;
        }
    }
    m
}

fn clear_denominators(asc: Vec<BigRational>) -> IntPolynomial {
    let l = asc.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = asc
        .into_iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    IntPolynomial::from_ascending(ints)
}

/// Characteristic polynomial of multiplication by `g(x)` modulo `f`,
/// i.e. `prod (y - g(alpha_i))` up to a positive rational factor. It agrees
/// with `Res_x(f(x), y - g(x))` up to that factor.
pub fn char_poly_of_element(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    let m = multiplication_matrix(f, g);
    let n = m.len();
    // Faddeev-LeVerrier
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: Matrix = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(&m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul(&m, &mk);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    clear_denominators(coeffs)
}

/// Squarefree integer polynomial whose roots are the distinct values
/// `g(alpha_i)` over the roots of `f`.
pub fn minpoly_of_element(
    f: &IntPolynomial,
    g: &IntPolynomial,
) -> Result<IntPolynomial, ExactError> {
    f.require_nonzero()?;
    let df = f.deg();
    if df == 0 {
        return Err(ExactError::DegreeTooSmall { min: 1, got: 0 });
    }
    if !g.is_zero() && g.deg() >= df {
        return Err(ExactError::DegreeViolation {
            f_degree: df,
            g_degree: g.deg(),
        });
    }
    if f.gcd(&f.derivative()).deg() > 0 {
        return Err(ExactError::NotSquarefree);
    }
    Ok(char_poly_of_element(f, g).squarefree_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn examples() {
        let f4 = p(&[1, 0, -4, 0, 2]);
        assert_eq!(
            minpoly_of_element(&f4, &p(&[1, 0, -2])).unwrap(),
            p(&[1, 0, -2])
        );
        let f2 = p(&[1, 0, -2]);
        assert_eq!(minpoly_of_element(&f2, &p(&[1, 0])).unwrap(), f2);
        assert_eq!(minpoly_of_element(&f2, &p(&[5])).unwrap(), p(&[1, -5]));
        assert!(matches!(
            minpoly_of_element(&f2, &p(&[1, 0, 0])),
            Err(ExactError::DegreeViolation { .. })
        ));
    }

    #[test]
    fn vanishes_at_numeric_conjugates() {
        // f = x^3 - 3x + 1, roots 2cos(2πk/9) for k = 1, 2, 4
        let f = p(&[1, 0, -3, 1]);
        let g = p(&[1, 1, -2]);
        let mp = minpoly_of_element(&f, &g).unwrap();
        assert_eq!(mp.deg(), 3);
        let coeffs: Vec<f64> = mp
            .coeffs()
            .iter()
            .map(|c| c.to_string().parse().unwrap())
            .collect();
        for k in [1.0f64, 2.0, 4.0] {
            let a = 2.0 * (2.0 * std::f64::consts::PI * k / 9.0).cos();
            let y = a * a + a - 2.0;
            let v = coeffs.iter().fold(0.0, |acc, c| acc * y + c);
            assert!(v.abs() < 1e-9, "{v}");
        }
    }
}
