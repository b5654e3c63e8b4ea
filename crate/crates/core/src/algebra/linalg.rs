//! Dense Gaussian elimination over an exact field.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// The handful of field operations elimination needs.
pub trait FieldElem: Clone {
    fn is_zero_elem(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn inv_elem(&self) -> Option<Self>;
}

impl FieldElem for BigRational {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn inv_elem(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Solves `rows · x = rhs` for an `m × n` system with `m ≥ n`.
///
/// Returns `None` when the column rank is below `n` or when the
/// overdetermined system is inconsistent.
pub fn solve<F: FieldElem>(rows: &[Vec<F>], rhs: &[F]) -> Option<Vec<F>> {
    let m = rows.len();
    if m == 0 || rhs.len() != m {
        return None;
    }
    let n = rows[0].len();
    let mut aug: Vec<Vec<F>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..n {
        let found = (pivot_row..m).find(|&i| !aug[i][col].is_zero_elem())?;
        aug.swap(pivot_row, found);
        let inv = aug[pivot_row][col].inv_elem()?;
        for j in col..=n {
            aug[pivot_row][j] = aug[pivot_row][j].mul_elem(&inv);
        }
        for i in 0..m {
            if i == pivot_row || aug[i][col].is_zero_elem() {
                continue;
            }
            let factor = aug[i][col].clone();
            for j in col..=n {
                let t = factor.mul_elem(&aug[pivot_row][j]);
                aug[i][j] = aug[i][j].sub_elem(&t);
            }
        }
        pivot_row += 1;
    }
    // rows below the pivots must reduce to 0 = 0
    if aug[pivot_row..].iter().any(|row| !row[n].is_zero_elem()) {
        return None;
    }
    Some(aug.into_iter().take(n).map(|mut row| row.pop().unwrap()).collect())
}

/// Rank of a matrix by elimination (destructive on a copy).
pub fn rank<F: FieldElem>(rows: &[Vec<F>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a = rows.to_vec();
    let (m, n) = (a.len(), a[0].len());
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero_elem()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].inv_elem().expect("nonzero pivot");
        for i in (r + 1)..m {
            if a[i][col].is_zero_elem() {
                continue;
            }
            let f = a[i][col].mul_elem(&inv);
            for j in col..n {
                let t = f.mul_elem(&a[r][j]);
                a[i][j] = a[i][j].sub_elem(&t);
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn solves_square_system() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let b = vec![q(3, 1), q(5, 1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
    }

    #[test]
    fn detects_inconsistent_overdetermined() {
        let a = vec![vec![q(1, 1)], vec![q(2, 1)]];
        assert!(solve(&a, &[q(1, 1), q(3, 1)]).is_none());
        assert_eq!(solve(&a, &[q(1, 1), q(2, 1)]).unwrap(), vec![q(1, 1)]);
    }

    #[test]
    fn rank_of_singular() {
        let a = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert_eq!(rank(&a), 1);
    }
}
