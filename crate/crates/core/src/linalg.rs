//! Small exact dense linear algebra over `ℚ`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![Q::zero(); cols];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b[k].iter().enumerate() {
                    if !y.is_zero() {
                        out[j] += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Gauss–Jordan inverse; fails on a singular matrix.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!("{n}-row matrix is not square")));
    }
    let mut m = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Degenerate(format!("matrix is singular at column {col}")))?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col];
            for j in 0..n {
                if !m[col][j].is_zero() {
                    let v = m[col][j];
                    m[r][j] -= f * v;
                }
                if !inv[col][j].is_zero() {
                    let v = inv[col][j];
                    inv[r][j] -= f * v;
                }
            }
        }
    }
    Ok(inv)
}
