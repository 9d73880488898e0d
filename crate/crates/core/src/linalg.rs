//! Small dense linear algebra over any [`Ring`] with division.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Ring;

pub type Matrix<S> = Vec<Vec<S>>;

pub fn identity<S: Ring>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn mat_vec<S: Ring>(a: &Matrix<S>, x: &[S]) -> Vec<S> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn mat_mul<S: Ring>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(S::zero(), |acc, (r, brow)| acc.add(&r.mul(&brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn dot<S: Ring>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// `a(x, y)` for a bilinear form given by its matrix.
pub fn bilinear<S: Ring>(a: &Matrix<S>, x: &[S], y: &[S]) -> S {
    let mut acc = S::zero();
    for (i, xi) in x.iter().enumerate() {
        acc = acc.add(&xi.mul(&dot(&a[i], y)));
    }
    acc
}

/// Solves `a X = b` for several right-hand sides (columns of `b`) by
/// Gaussian elimination with partial pivoting on the real part.
pub fn solve_many<S: Ring>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || b.len() != n {
        return Err(Error::Shape("solve expects a square system".into()));
    }
    let m = b.first().map_or(0, Vec::len);
    let mut a = a.clone();
    let mut b = b.clone();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                libm::fabs(a[i][col].real())
                    .partial_cmp(&libm::fabs(a[j][col].real()))
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if a[pivot][col].real() == 0.0 || a[pivot][col].real().is_nan() {
            return Err(Error::SingularMetric);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col].div(&a[col][col])?;
            for k in col..n {
                let v = a[row][k].sub(&f.mul(&a[col][k]));
                a[row][k] = v;
            }
            for k in 0..m {
                let v = b[row][k].sub(&f.mul(&b[col][k]));
                b[row][k] = v;
            }
        }
    }
    let mut x = vec![vec![S::zero(); m]; n];
    for row in (0..n).rev() {
        for k in 0..m {
            let mut acc = b[row][k].clone();
            for j in row + 1..n {
                acc = acc.sub(&a[row][j].mul(&x[j][k]));
            }
            x[row][k] = acc.div(&a[row][row])?;
        }
    }
    Ok(x)
}

pub fn solve<S: Ring>(a: &Matrix<S>, b: &[S]) -> Result<Vec<S>> {
    let rhs: Matrix<S> = b.iter().map(|v| vec![v.clone()]).collect();
    Ok(solve_many(a, &rhs)?.into_iter().map(|mut r| r.remove(0)).collect())
}

pub fn inverse<S: Ring>(a: &Matrix<S>) -> Result<Matrix<S>> {
    solve_many(a, &identity(a.len()))
}

/// Determinant by elimination (exact over rationals).
pub fn determinant<S: Ring>(a: &Matrix<S>) -> Result<S> {
    let n = a.len();
    let mut a = a.clone();
    let mut det = S::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&i| a[i][col].real() != 0.0) else {
            return Ok(S::zero());
        };
        if pivot != col {
            a.swap(col, pivot);
            det = det.neg();
        }
        det = det.mul(&a[col][col]);
        for row in col + 1..n {
            let f = a[row][col].div(&a[col][col])?;
            for k in col..n {
                let v = a[row][k].sub(&f.mul(&a[col][k]));
                a[row][k] = v;
            }
        }
    }
    Ok(det)
}

/// Leading principal minors `det(a[..k][..k])` for `k = 1..=n`.
pub fn leading_minors<S: Ring>(a: &Matrix<S>) -> Result<Vec<S>> {
    (1..=a.len())
        .map(|k| {
            let sub: Matrix<S> = a[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Sylvester test; exact over rationals.
pub fn is_positive_definite<S: Ring>(a: &Matrix<S>) -> Result<bool> {
    let symmetric = (0..a.len()).all(|i| (0..i).all(|j| a[i][j].real() == a[j][i].real()));
    Ok(symmetric && leading_minors(a)?.iter().all(|m| m.real() > 0.0))
}

/// A `g`-orthonormal basis obtained from the coordinate basis in order.
/// Row `a` holds the components of `E_a`.
pub fn gram_schmidt(g: &Matrix<f64>) -> Result<Matrix<f64>> {
    let n = g.len();
    let mut basis: Matrix<f64> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for e in &basis {
            let c = bilinear(g, &v, e);
            for (vk, ek) in v.iter_mut().zip(e) {
                *vk -= c * ek;
            }
        }
        let norm2 = bilinear(g, &v, &v);
        if !(norm2 > 1e-300) {
            return Err(Error::GramSchmidt);
        }
        let s = 1.0 / libm::sqrt(norm2);
        basis.push(v.into_iter().map(|x| x * s).collect());
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn exact_inverse() {
        let a: Matrix<Rational> = vec![
            vec![ratio(2, 1), ratio(1, 1)],
            vec![ratio(1, 1), ratio(1, 1)],
        ];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert_eq!(determinant(&a).unwrap(), ratio(1, 1));
        assert!(is_positive_definite(&a).unwrap());
    }

    #[test]
    fn singular_and_indefinite() {
        let a: Matrix<f64> = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(inverse(&a).is_err());
        let b: Matrix<f64> = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(!is_positive_definite(&b).unwrap());
    }

    #[test]
    fn gram_schmidt_is_orthonormal() {
        let g: Matrix<f64> = vec![
            vec![2.0, 0.5, 0.1],
            vec![0.5, 1.0, 0.2],
            vec![0.1, 0.2, 3.0],
        ];
        let e = gram_schmidt(&g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((bilinear(&g, &e[a], &e[b]) - want).abs() < 1e-12);
            }
        }
    }
}
