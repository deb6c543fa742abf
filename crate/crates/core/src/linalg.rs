//! Small exact linear algebra over the rationals, for n x n systems with n tiny.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type Matrix = Vec<Vec<BigRational>>;

pub(crate) fn to_rational(rows: &[&[i64]]) -> Matrix {
    rows.iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// Determinant and inverse by Gauss-Jordan elimination. `None` if singular.
pub(crate) fn inverse(m: &Matrix) -> Option<(BigRational, Matrix)> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        let pinv = p.recip();
        for j in 0..n {
            a[col][j] *= &pinv;
            inv[col][j] *= &pinv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Some((det, inv))
}

pub(crate) fn determinant(m: &Matrix) -> BigRational {
    inverse(m).map(|(d, _)| d).unwrap_or_else(BigRational::zero)
}

pub(crate) fn mat_vec(m: &Matrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Rank of a rational matrix (rows may have any count).
pub(crate) fn rank(rows: &Matrix) -> usize {
    row_echelon(rows).len()
}

/// Nonzero rows of the reduced row echelon form: a basis of the row space.
pub(crate) fn row_echelon(rows: &Matrix) -> Matrix {
    let mut a = rows.clone();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot, rank);
        let pinv = a[rank][col].recip();
        for x in a[rank].iter_mut() {
            *x *= &pinv;
        }
        for r in 0..a.len() {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..ncols {
                let t = &f * &a[rank][j];
                a[r][j] -= t;
            }
        }
        rank += 1;
    }
    a.truncate(rank);
    a
}

/// A nonzero vector orthogonal to the `n - 1` given rows of length `n`
/// (generalized cross product), or `None` if the rows are dependent.
pub(crate) fn orthogonal_complement_line(rows: &Matrix, n: usize) -> Option<Vec<BigRational>> {
    let w: Vec<BigRational> = (0..n)
        .map(|k| {
            let minor: Matrix = rows
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = if minor.is_empty() { BigRational::one() } else { determinant(&minor) };
            if k % 2 == 0 { d } else { -d }
        })
        .collect();
    if w.iter().all(Zero::is_zero) { None } else { Some(w) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_unimodular_matrix_is_integral() {
        let m = to_rational(&[&[1, 0], &[-1, 1]]);
        let (det, inv) = inverse(&m).unwrap();
        assert_eq!(det, BigRational::one());
        assert_eq!(inv, to_rational(&[&[1, 0], &[1, 1]]));
    }

    #[test]
    fn singular_and_rank() {
        let m = to_rational(&[&[1, 2], &[2, 4]]);
        assert!(inverse(&m).is_none());
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn cross_product_is_orthogonal() {
        let rows = to_rational(&[&[1, 2, 3], &[0, 1, -1]]);
        let w = orthogonal_complement_line(&rows, 3).unwrap();
        for row in &rows {
            let dot: BigRational = row.iter().zip(&w).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
