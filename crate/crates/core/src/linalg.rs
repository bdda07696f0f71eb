//! Dense exact linear algebra over a field: determinant, inverse, products.

use alloc::vec::Vec;

use crate::algebra::{Field, Ring};
use crate::error::{Error, Result};
use crate::pfaffian::SkewMatrix;

pub type Dense<T> = Vec<Vec<T>>;

pub fn identity<T: Ring>(n: usize) -> Dense<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Ring>(a: &Dense<T>) -> Dense<T> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].clone()).collect())
        .collect()
}

pub fn matmul<T: Ring>(a: &Dense<T>, b: &Dense<T>) -> Dense<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(T::zero(), |acc, k| acc.plus(&row[k].times(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// Determinant by Gaussian elimination with the field's pivot preference.
pub fn det<F: Field>(a: &Dense<F>) -> F {
    let n = a.len();
    let mut m = a.clone();
    let mut d = F::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                m[x][col]
                    .pivot_weight()
                    .partial_cmp(&m[y][col].pivot_weight())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .expect("nonempty range");
        if m[pivot][col].is_zero() {
            return F::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            d = d.negated();
        }
        let p = m[col][col].clone();
        d = d.times(&p);
        let p_inv = p.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].times(&p_inv);
            for c in col..n {
                let v = m[r][c].minus(&factor.times(&m[col][c]));
                m[r][c] = v;
            }
        }
    }
    d
}

/// Gauss–Jordan inverse; a singular matrix is an error.
pub fn inverse<F: Field>(a: &Dense<F>) -> Result<Dense<F>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let mut m = a.clone();
    let mut inv = identity::<F>(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                m[x][col]
                    .pivot_weight()
                    .partial_cmp(&m[y][col].pivot_weight())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .expect("nonempty range");
        if m[pivot][col].is_zero() {
            return Err(Error::Singular);
        }
        m.swap(pivot, col);
        inv.swap(pivot, col);
        let p_inv = m[col][col].inv().ok_or(Error::Singular)?;
        for c in 0..n {
            m[col][c] = m[col][c].times(&p_inv);
            inv[col][c] = inv[col][c].times(&p_inv);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..n {
                let v = m[r][c].minus(&factor.times(&m[col][c]));
                m[r][c] = v;
                let w = inv[r][c].minus(&factor.times(&inv[col][c]));
                inv[r][c] = w;
            }
        }
    }
    Ok(inv)
}

/// `B A Bᵀ` for skew `A`; the result is skew again.
pub fn congruence<T: Ring>(b: &Dense<T>, a: &SkewMatrix<T>) -> SkewMatrix<T> {
    let prod = matmul(&matmul(b, &a.to_dense()), &transpose(b));
    SkewMatrix::from_upper_fn(prod.len(), |i, j| prod[i][j].clone())
}
