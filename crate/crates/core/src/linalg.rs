//! Exact linear algebra over the coefficient fields.
//!
//! Dense Gaussian elimination for determinants, solving, and inversion of
//! the small systems that arise here (Sylvester blocks, interpolation,
//! certificate solving). A separate sparse echelon pass computes ranks of
//! Macaulay truncations, whose rows touch only a handful of columns.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::ExactScalar;

/// Determinant of a square matrix by fraction-producing elimination.
pub fn det(mat: &[Vec<ExactScalar>]) -> ExactScalar {
    let n = mat.len();
    assert!(n > 0 && mat.iter().all(|r| r.len() == n), "square matrix required");
    let dom = mat[0][0].domain();
    let mut m: Vec<Vec<ExactScalar>> = mat.to_vec();
    let mut acc = ExactScalar::one(dom);
    for k in 0..n {
        let pivot_row = match (k..n).find(|&r| !m[r][k].is_zero()) {
            Some(r) => r,
            None => return ExactScalar::zero(dom),
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            acc = acc.neg();
        }
        let pivot = m[k][k].clone();
        acc = acc.mul(&pivot);
        let pinv = pivot.inv().unwrap();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = m[i][k].mul(&pinv);
            for j in k..n {
                let delta = factor.mul(&m[k][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
    }
    acc
}

/// Row rank by elimination.
pub fn rank(mat: &[Vec<ExactScalar>]) -> usize {
    if mat.is_empty() {
        return 0;
    }
    let cols = mat[0].len();
    let mut m: Vec<Vec<ExactScalar>> = mat.to_vec();
    let mut r = 0usize;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let pivot_row = match (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            Some(i) => i,
            None => continue,
        };
        m.swap(r, pivot_row);
        let pinv = m[r][c].inv().unwrap();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].mul(&pinv);
            for j in c..cols {
                let delta = factor.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
        r += 1;
    }
    r
}

/// One solution of a (possibly rectangular, possibly underdetermined)
/// system Ax = b; free variables are set to zero. None when inconsistent.
pub fn solve(a: &[Vec<ExactScalar>], b: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    if a.is_empty() {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let dom = b
        .first()
        .map(|x| x.domain())
        .unwrap_or_else(|| a[0][0].domain());
    let mut m: Vec<Vec<ExactScalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let pivot_row = match (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            Some(i) => i,
            None => continue,
        };
        m.swap(r, pivot_row);
        let pinv = m[r][c].inv().unwrap();
        for j in c..=cols {
            m[r][j] = m[r][j].mul(&pinv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..=cols {
                let delta = factor.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    for row in m.iter().skip(r) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![ExactScalar::zero(dom); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Matrix inverse; None when singular.
pub fn invert(a: &[Vec<ExactScalar>]) -> Option<Vec<Vec<ExactScalar>>> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n), "square matrix required");
    let dom = a[0][0].domain();
    let mut m: Vec<Vec<ExactScalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    ExactScalar::one(dom)
                } else {
                    ExactScalar::zero(dom)
                });
            }
            r
        })
        .collect();
    for c in 0..n {
        let pivot_row = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, pivot_row);
        let pinv = m[c][c].inv().unwrap();
        for j in 0..2 * n {
            m[c][j] = m[c][j].mul(&pinv);
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..2 * n {
                let delta = factor.mul(&m[c][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Rank of a sparse rational matrix given as rows mapping column index to
/// nonzero entry. Incremental echelon: each row is reduced against the
/// pivots found so far; a row that survives becomes a new pivot.
pub fn sparse_rank_rat(rows: impl IntoIterator<Item = BTreeMap<usize, BigRational>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for mut row in rows {
        loop {
            let lead = match row.iter().next() {
                None => break,
                Some((&c, _)) => c,
            };
            match pivots.get(&lead) {
                None => {
                    // Normalize so the pivot entry is 1.
                    let inv = row[&lead].recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let factor = row[&lead].clone();
                    let p = p.clone();
                    for (c, v) in p {
                        let delta = &v * &factor;
                        let entry = row.entry(c).or_insert_with(BigRational::zero);
                        *entry -= delta;
                        if entry.is_zero() {
                            row.remove(&c);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CoeffDomain;
    use num_bigint::BigInt;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::from_i64(n, CoeffDomain::Rat)
    }

    fn qr(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn det_and_rank() {
        let m = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        assert_eq!(det(&m), q(-2));
        assert_eq!(rank(&m), 2);
        let s = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(det(&s), q(0));
        assert_eq!(rank(&s), 1);
    }

    #[test]
    fn solve_rectangular() {
        // x + y = 3 with a redundant doubled row: pick y = 0 free.
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        let b = vec![q(3), q(6)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![q(3), q(0)]);
        let bad = solve(&a, &[q(3), q(7)]);
        assert!(bad.is_none());
    }

    #[test]
    fn invert_small() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert(&a).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(invert(&sing).is_none());
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let rows = vec![
            BTreeMap::from([(0usize, qr(1)), (2, qr(2))]),
            BTreeMap::from([(1usize, qr(1))]),
            BTreeMap::from([(0usize, qr(2)), (1, qr(2)), (2, qr(4))]),
        ];
        assert_eq!(sparse_rank_rat(rows), 2);
    }

    #[test]
    fn fp_determinant() {
        let f5 = CoeffDomain::Fp(5);
        let e = |n: i64| ExactScalar::from_i64(n, f5);
        let m = vec![vec![e(1), e(2)], vec![e(3), e(4)]];
        assert_eq!(det(&m), e(3)); // -2 mod 5
    }
}
