//! Dense exact Gaussian elimination over any [`Scalar`] field.
//!
//! The graded pieces these solvers run on are desk-scale (tens of monomials),
//! so a straightforward fraction-free-less elimination with exact division
//! is plenty.

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Row-reduce the augmented system `a · x = b` and return a solution, or
/// `None` when the system is inconsistent. Free variables are set to zero.
pub fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Result<Option<Vec<S>>> {
    let rows = a.len();
    if rows == 0 {
        return Ok(Some(Vec::new()));
    }
    let cols = a[0].len();
    assert_eq!(rows, b.len(), "matrix/rhs size mismatch");

    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !a[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        a.swap(rank, pivot);
        b.swap(rank, pivot);
        let inv = a[rank][col].inv()?;
        for c in col..cols {
            a[rank][c] = a[rank][c].mul(&inv);
        }
        b[rank] = b[rank].mul(&inv);
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..cols {
                    let t = a[rank][c].mul(&factor);
                    a[r][c] = a[r][c].sub(&t);
                }
                let t = b[rank].mul(&factor);
                b[r] = b[r].sub(&t);
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // Inconsistency: a zero row with nonzero rhs.
    for r in rank..rows {
        if !b[r].is_zero() {
            return Ok(None);
        }
    }
    let zero = sample_zero(&a, &b)?;
    let mut x = vec![zero; cols];
    for (row, &col) in pivot_cols.iter().enumerate() {
        x[col] = b[row].clone();
    }
    Ok(Some(x))
}

/// A basis of the kernel of `a` (columns indexed as variables). `one` is a
/// unit sample of the coefficient field.
pub fn kernel_basis<S: Scalar>(mut a: Vec<Vec<S>>, one: &S) -> Result<Vec<Vec<S>>> {
    let rows = a.len();
    if rows == 0 {
        return Ok(Vec::new());
    }
    let cols = a[0].len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !a[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        a.swap(rank, pivot);
        let inv = a[rank][col].inv()?;
        for c in col..cols {
            a[rank][c] = a[rank][c].mul(&inv);
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..cols {
                    let t = a[rank][c].mul(&factor);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let zero = one.sub(one);
    let mut basis = Vec::new();
    for free_col in 0..cols {
        if pivot_of_col[free_col].is_some() {
            continue;
        }
        let mut vec = vec![zero.clone(); cols];
        vec[free_col] = one.clone();
        for (col, pivot) in pivot_of_col.iter().enumerate() {
            if let Some(row) = pivot {
                vec[col] = a[*row][free_col].neg();
            }
        }
        basis.push(vec);
    }
    Ok(basis)
}

fn sample_zero<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<S> {
    for row in a {
        for c in row {
            return Ok(c.sub(c));
        }
    }
    for c in b {
        return Ok(c.sub(c));
    }
    Err(Error::InvalidArgument("empty system".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::NumberFieldModel;

    #[test]
    fn solve_small_rational_system() {
        let k = NumberFieldModel::make(5, 1, 1).unwrap();
        // x + 2y = 5, 3x - y = 1  =>  x = 1, y = 2
        let a = vec![
            vec![k.from_integer(1), k.from_integer(2)],
            vec![k.from_integer(3), k.from_integer(-1)],
        ];
        let b = vec![k.from_integer(5), k.from_integer(1)];
        let x = solve(a, b).unwrap().unwrap();
        assert_eq!(x, vec![k.from_integer(1), k.from_integer(2)]);
    }

    #[test]
    fn detect_inconsistent_system() {
        let k = NumberFieldModel::make(5, 1, 1).unwrap();
        let a = vec![
            vec![k.from_integer(1), k.from_integer(1)],
            vec![k.from_integer(2), k.from_integer(2)],
        ];
        let b = vec![k.from_integer(1), k.from_integer(3)];
        assert!(solve(a, b).unwrap().is_none());
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let k = NumberFieldModel::make(5, 1, 1).unwrap();
        // (1  2) has kernel spanned by (-2, 1).
        let a = vec![vec![k.from_integer(1), k.from_integer(2)]];
        let basis = kernel_basis(a, &k.one()).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![k.from_integer(-2), k.from_integer(1)]);
    }
}
