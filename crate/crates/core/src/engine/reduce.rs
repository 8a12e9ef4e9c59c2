//! Unimodular change of search coordinates via floating-point LLL.
//!
//! Only the quality of the basis depends on float accuracy: `u` and `uinv`
//! are updated by exact integer column and row operations, so they stay
//! mutually inverse unimodular matrices whatever the rounding.

/// `b = u c` and `c = uinv b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Basis {
    pub u: Vec<Vec<i64>>,
    pub uinv: Vec<Vec<i64>>,
}

impl Basis {
    pub fn identity(n: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Basis {
            u: id.clone(),
            uinv: id,
        }
    }

    pub fn apply(&self, c: &[i64]) -> Option<Vec<i64>> {
        self.u
            .iter()
            .map(|row| {
                let s: i128 = row
                    .iter()
                    .zip(c)
                    .map(|(&a, &x)| a as i128 * x as i128)
                    .sum();
                i64::try_from(s).ok()
            })
            .collect()
    }
}

const DELTA: f64 = 0.99;
const MAX_STEPS: usize = 100_000;
const ENTRY_LIMIT: i64 = 1 << 30;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduces the columns `cols[0..n]`, each a vector in `R^m`.
pub(crate) fn lll(cols: &[Vec<f64>]) -> Basis {
    let n = cols.len();
    let mut basis = Basis::identity(n);
    if n < 2 || cols.iter().flatten().any(|x| !x.is_finite()) {
        return basis;
    }
    let mut v = cols.to_vec();
    let mut k = 1;
    let mut steps = 0;
    while k < n {
        steps += 1;
        if steps > MAX_STEPS {
            return Basis::identity(n);
        }
        let (gs, norms) = gram_schmidt(&v);
        for l in (0..k).rev() {
            let mu = dot(&v[k], &gs[l]) / norms[l];
            let q = mu.round();
            if q != 0.0
                && (q.abs() > ENTRY_LIMIT as f64 || !subtract(&mut basis, &mut v, k, l, q as i64))
            {
                return Basis::identity(n);
            }
        }
        let (gs, norms) = gram_schmidt(&v);
        let mu = dot(&v[k], &gs[k - 1]) / norms[k - 1];
        if norms[k] >= (DELTA - mu * mu) * norms[k - 1] {
            k += 1;
        } else {
            v.swap(k, k - 1);
            for row in basis.u.iter_mut() {
                row.swap(k, k - 1);
            }
            basis.uinv.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

fn gram_schmidt(v: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut gs: Vec<Vec<f64>> = Vec::with_capacity(v.len());
    let mut norms = Vec::with_capacity(v.len());
    for x in v {
        let mut y = x.clone();
        for (g, &nn) in gs.iter().zip(&norms) {
            let mu = dot(x, g) / nn;
            for (a, b) in y.iter_mut().zip(g) {
                *a -= mu * b;
            }
        }
        norms.push(dot(&y, &y).max(f64::MIN_POSITIVE));
        gs.push(y);
    }
    (gs, norms)
}

/// `v_k -= q v_l`, mirrored on `u` (columns) and `uinv` (rows).
fn subtract(basis: &mut Basis, v: &mut [Vec<f64>], k: usize, l: usize, q: i64) -> bool {
    debug_assert!(l < k);
    let (head, tail) = v.split_at_mut(k);
    let (vl, vk) = (&head[l], &mut tail[0]);
    for (a, b) in vk.iter_mut().zip(vl) {
        *a -= q as f64 * b;
    }
    for row in basis.u.iter_mut() {
        match q.checked_mul(row[l]).and_then(|x| row[k].checked_sub(x)) {
            Some(x) if x.abs() <= ENTRY_LIMIT => row[k] = x,
            _ => return false,
        }
    }
    let (rk, rl) = (basis.uinv[k].clone(), &mut basis.uinv[l]);
    for (a, b) in rl.iter_mut().zip(&rk) {
        match q.checked_mul(*b).and_then(|x| a.checked_add(x)) {
            Some(x) if x.abs() <= ENTRY_LIMIT => *a = x,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn skewed_basis_is_reduced() {
        let cols = vec![
            vec![1.0, 0.0, 0.0],
            vec![1000.0, 1.0, 0.0],
            vec![999.0, 37.0, 1.0],
        ];
        let basis = lll(&cols);
        assert_eq!(product(&basis.u, &basis.uinv), Basis::identity(3).u);
        let reduced: Vec<Vec<f64>> = (0..3)
            .map(|k| {
                (0..3)
                    .map(|r| (0..3).map(|j| cols[j][r] * basis.u[j][k] as f64).sum())
                    .collect()
            })
            .collect();
        assert!(reduced.iter().all(|c| dot(c, c) <= 2.0 + 1e-9));
    }

    #[test]
    fn apply_inverts() {
        let cols = vec![vec![3.0, 1.0], vec![7.0, 2.5]];
        let basis = lll(&cols);
        let b = vec![5, -4];
        let c: Vec<i64> = basis
            .uinv
            .iter()
            .map(|r| r[0] * b[0] + r[1] * b[1])
            .collect();
        assert_eq!(basis.apply(&c).unwrap(), b);
    }
}
