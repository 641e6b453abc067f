//! Small dense real and complex matrices, generic over [`Real`].

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type RMat<T> = Vec<Vec<T>>;
pub type CMat<T> = Vec<Vec<Complex<T>>>;

pub fn zeros<T: Real>(n: usize, m: usize) -> RMat<T> {
    vec![vec![T::zero(); m]; n]
}

pub fn eye<T: Real>(n: usize) -> RMat<T> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn transpose<T: Copy>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn matmul<T: Real>(a: &[Vec<T>], b: &[Vec<T>]) -> RMat<T> {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(T::zero(), |acc, t| acc + row[t] * b[t][j]))
                .collect()
        })
        .collect()
}

pub fn cmatmul<T: Real>(a: &[Vec<Complex<T>>], b: &[Vec<Complex<T>>]) -> CMat<T> {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + row[t] * b[t][j]))
                .collect()
        })
        .collect()
}

pub fn matvec<T: Real>(a: &[Vec<T>], x: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(T::zero(), |acc, (p, q)| acc + *p * *q))
        .collect()
}

pub fn max_abs_diff<T: Real>(a: &[Vec<T>], b: &[Vec<T>]) -> T {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (*x - *y).abs()))
        .fold(T::zero(), T::max)
}

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix by cyclic
/// Jacobi rotations.
pub fn jacobi_eigen<T: Real>(a: &[Vec<T>]) -> (Vec<T>, RMat<T>) {
    let n = a.len();
    let mut a: RMat<T> = a.to_vec();
    let mut v = eye::<T>(n);
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + a[i][j] * a[i][j]);
        let scale = (0..n).fold(T::zero(), |acc, i| acc + a[i][i] * a[i][i]);
        if off <= eps * eps * (scale + T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

pub fn eigenvalues<T: Real>(a: &[Vec<T>]) -> Vec<T> {
    let mut e = jacobi_eigen(a).0;
    e.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    e
}

/// Symmetric positive square root of a symmetric positive-definite matrix.
pub fn sym_sqrt<T: Real>(a: &[Vec<T>]) -> Result<RMat<T>> {
    let (vals, vecs) = jacobi_eigen(a);
    if vals.iter().any(|&l| l <= T::zero()) {
        return Err(Error::NotInUpperHalfSpace("matrix is not positive definite".into()));
    }
    let n = a.len();
    let mut out = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[i][j] = (0..n).fold(T::zero(), |acc, k| acc + vecs[i][k] * vals[k].sqrt() * vecs[j][k]);
        }
    }
    Ok(out)
}

/// Lower-triangular `L` with `L·Lᵀ = a`; fails unless positive definite.
pub fn cholesky<T: Real>(a: &[Vec<T>]) -> Result<RMat<T>> {
    let n = a.len();
    let mut l = zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s = (0..j).fold(a[i][j], |acc, k| acc - l[i][k] * l[j][k]);
            if i == j {
                if s <= T::zero() {
                    return Err(Error::NotInUpperHalfSpace("pivot is not positive".into()));
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Inverse by Gauss–Jordan with partial pivoting.
pub fn inverse<T: Real>(a: &[Vec<T>]) -> Result<RMat<T>> {
    let n = a.len();
    let mut m: RMat<T> = a.to_vec();
    let mut inv = eye::<T>(n);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).expect("finite"))
            .expect("nonempty");
        if m[piv][col] == T::zero() {
            return Err(Error::NonInvertible("singular matrix".into()));
        }
        m.swap(piv, col);
        inv.swap(piv, col);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != T::zero() {
                    for j in 0..n {
                        let (mc, ic) = (m[col][j], inv[col][j]);
                        m[r][j] -= f * mc;
                        inv[r][j] -= f * ic;
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Euclidean distance of each vector in `vs` from the span of `basis`,
/// relative to the vector's length. Zero means `vs ⊂ span(basis)`.
pub fn span_residual<T: Real>(basis: &[Vec<T>], vs: &[Vec<T>]) -> T {
    let mut ortho: Vec<Vec<T>> = Vec::new();
    for b in basis {
        let mut w = b.clone();
        for q in &ortho {
            let c = dot(&w, q);
            for (x, y) in w.iter_mut().zip(q) {
                *x -= c * *y;
            }
        }
        let n = dot(&w, &w).sqrt();
        if n > T::epsilon() {
            ortho.push(w.iter().map(|x| *x / n).collect());
        }
    }
    vs.iter()
        .map(|v| {
            let mut w = v.clone();
            for q in &ortho {
                let c = dot(&w, q);
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= c * *y;
                }
            }
            dot(&w, &w).sqrt() / (T::one() + dot(v, v).sqrt())
        })
        .fold(T::zero(), T::max)
}

pub fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_small_symmetric() {
        let a = vec![vec![2.0f64, 1.0], vec![1.0, 2.0]];
        let e: Vec<f64> = eigenvalues(&a);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
        let s = sym_sqrt(&a).unwrap();
        assert!(max_abs_diff(&matmul(&s, &s), &a) < 1e-12);
        let l = cholesky(&a).unwrap();
        assert!(max_abs_diff(&matmul(&l, &transpose(&l)), &a) < 1e-12);
        let inv = inverse(&a).unwrap();
        assert!(max_abs_diff(&matmul(&inv, &a), &eye(2)) < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let a = vec![vec![4.0f32, 0.0], vec![0.0, 9.0]];
        let s = sym_sqrt(&a).unwrap();
        assert!((s[1][1] - 3.0).abs() < 1e-5);
        assert!(cholesky(&vec![vec![-1.0f32]]).is_err());
    }
}
