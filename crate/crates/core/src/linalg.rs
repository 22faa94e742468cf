//! Exact linear algebra over ℚ by fraction-free (integer) row reduction.
//!
//! Rows are scaled to primitive integer vectors and eliminated with integer
//! combinations; each row is re-normalized by its content so entries stay small.

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};

use crate::scalar::Q;

/// Dense rational matrix given by rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Matrix {
    pub ncols: usize,
    pub rows: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn new(ncols: usize) -> Self {
        Matrix { ncols, rows: Vec::new() }
    }

    pub fn from_rows(ncols: usize, rows: Vec<Vec<Q>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { ncols, rows }
    }

    pub fn push_row(&mut self, row: Vec<Q>) {
        assert_eq!(row.len(), self.ncols, "row length");
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

/// Row echelon form over ℤ: pivot rows and their pivot columns.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn primitive(row: &[Q]) -> Option<Vec<BigInt>> {
    if row.iter().all(Zero::is_zero) {
        return None;
    }
    let mut l = BigInt::one();
    for x in row {
        if !x.is_zero() {
            l = l.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    Some(normalize(ints))
}

fn normalize(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &row {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    row
}

fn echelon(m: &Matrix) -> Echelon {
    let mut work: Vec<Vec<BigInt>> = m.rows.iter().filter_map(|r| primitive(r)).collect();
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..m.ncols {
        // pick the remaining row with the smallest nonzero entry in this column
        let best = work
            .iter()
            .enumerate()
            .filter(|(_, r)| !r[col].is_zero())
            .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let p = work.swap_remove(bi);
        let mut next = Vec::with_capacity(work.len());
        for r in work.into_iter() {
            if r[col].is_zero() {
                next.push(r);
                continue;
            }
            let g = p[col].gcd(&r[col]);
            let a = &p[col] / &g;
            let b = &r[col] / &g;
            let new: Vec<BigInt> = r.iter().zip(&p).map(|(x, y)| &a * x - &b * y).collect();
            if new.iter().any(|x| !x.is_zero()) {
                next.push(normalize(new));
            }
        }
        work = next;
        rows.push(p);
        pivots.push(col);
        if work.is_empty() {
            break;
        }
    }
    Echelon { rows, pivots }
}

pub fn rank(m: &Matrix) -> usize {
    echelon(m).pivots.len()
}

/// Back-substitution: solves for pivot variables given values of the free ones.
fn back_substitute(e: &Echelon, ncols: usize, free_values: &[(usize, Q)], rhs: Option<&[Q]>) -> Vec<Q> {
    let mut x = vec![Q::zero(); ncols];
    for (c, v) in free_values {
        x[*c] = v.clone();
    }
    for (i, row) in e.rows.iter().enumerate().rev() {
        let pc = e.pivots[i];
        let mut acc = rhs.map(|r| r[i].clone()).unwrap_or_else(Q::zero);
        for c in pc + 1..ncols {
            if !row[c].is_zero() && !x[c].is_zero() {
                acc -= Q::from_integer(row[c].clone()) * &x[c];
            }
        }
        x[pc] = acc / Q::from_integer(row[pc].clone());
    }
    x
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per free column
/// (that column set to 1, other free columns 0).
pub fn nullspace(m: &Matrix) -> Vec<Vec<Q>> {
    let e = echelon(m);
    let free: Vec<usize> = (0..m.ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| back_substitute(&e, m.ncols, &[(f, Q::one())], None))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    Inconsistent,
    /// The solution is not unique; `free` unknowns remain.
    Underdetermined { free: usize },
}

/// Unique solution of `M x = b`.
pub fn solve(m: &Matrix, b: &[Q]) -> Result<Vec<Q>, SolveError> {
    assert_eq!(b.len(), m.nrows(), "rhs length");
    let n = m.ncols;
    let aug = Matrix {
        ncols: n + 1,
        rows: m.rows.iter().zip(b).map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        }).collect(),
    };
    let e = echelon(&aug);
    if e.pivots.last() == Some(&n) {
        return Err(SolveError::Inconsistent);
    }
    if e.pivots.len() < n {
        return Err(SolveError::Underdetermined { free: n - e.pivots.len() });
    }
    let rhs: Vec<Q> = e.rows.iter().map(|r| Q::from_integer(r[n].clone())).collect();
    let core = Echelon {
        rows: e.rows.iter().map(|r| r[..n].to_vec()).collect(),
        pivots: e.pivots.clone(),
    };
    Ok(back_substitute(&core, n, &[], Some(&rhs)))
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.ncols;
    if m.nrows() != n {
        return None;
    }
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        cols.push(solve(m, &e).ok()?);
    }
    Some(Matrix::from_rows(n, (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect()))
}

pub fn mat_vec(m: &Matrix, x: &[Q]) -> Vec<Q> {
    m.rows
        .iter()
        .map(|r| r.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn empty_matrix_has_full_kernel() {
        let a = Matrix::new(3);
        assert_eq!(nullspace(&a).len(), 3);
    }

    #[test]
    fn solve_unique_and_failures() {
        let a = Matrix::from_rows(2, vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]]);
        assert_eq!(solve(&a, &[q(3), q(1), q(4)]).unwrap(), vec![q(2), q(1)]);
        assert_eq!(solve(&a, &[q(3), q(1), q(5)]), Err(SolveError::Inconsistent));
        let b = m(&[&[1, 1]]);
        assert_eq!(solve(&b, &[q(1)]), Err(SolveError::Underdetermined { free: 1 }));
    }

    #[test]
    fn rational_entries() {
        let a = Matrix::from_rows(2, vec![vec![qr(1, 2), qr(1, 3)], vec![qr(1, 4), qr(1, 6)]]);
        let ns = nullspace(&a);
        assert_eq!(ns, vec![vec![qr(-2, 3), q(1)]]);
        let inv = inverse(&Matrix::from_rows(2, vec![vec![q(2), q(0)], vec![q(0), q(6)]])).unwrap();
        assert_eq!(inv.rows, vec![vec![qr(1, 2), q(0)], vec![q(0), qr(1, 6)]]);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 0..7)) {
            let a = Matrix::from_rows(5, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
            let ns = nullspace(&a);
            prop_assert_eq!(ns.len() + rank(&a), 5);
            for v in &ns {
                prop_assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn kernel_dim_invariant_under_row_permutation_and_scaling(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..6),
            scale in 1i64..5,
        ) {
            let a = Matrix::from_rows(4, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
            let mut b = a.clone();
            b.rows.reverse();
            for r in b.rows.iter_mut() {
                for x in r.iter_mut() { *x *= q(scale); }
            }
            prop_assert_eq!(nullspace(&a).len(), nullspace(&b).len());
        }
    }
}
