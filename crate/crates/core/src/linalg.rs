//! Exact linear algebra over the rationals.
//!
//! Rows are cleared of denominators and reduced with Bareiss' fraction-free
//! elimination, so every intermediate entry is an integer minor of the input.
//! Kernel bases are read off with free columns in increasing order, which
//! makes representatives reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Row echelon form produced by fraction-free elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Fraction-free (Bareiss) reduction to row echelon form.
pub fn echelon(rows: &[Vec<Scalar>], cols: usize) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            integer_row(r)
        })
        .collect();
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let num = &pv * &row[j] - &lead * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division not exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        cols,
    }
}

pub fn rank(rows: &[Vec<Scalar>], cols: usize) -> usize {
    echelon(rows, cols).pivots.len()
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Back substitution: given values for the free columns, returns the
    /// full solution vector of `E x = rhs` where `rhs` is indexed by row.
    fn back_substitute(&self, free: &[Scalar], rhs: &[Scalar]) -> Vec<Scalar> {
        let mut x = free.to_vec();
        for (r, &p) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[r];
            let mut acc = rhs[r].clone();
            for c in p + 1..self.cols {
                if !row[c].is_zero() && !x[c].is_zero() {
                    acc -= Scalar::from_integer(row[c].clone()) * &x[c];
                }
            }
            x[p] = acc / Scalar::from_integer(row[p].clone());
        }
        x
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis of the null space, one vector per free column in increasing
    /// order with that column set to one.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let zeros = vec![Scalar::zero(); self.rank()];
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut free = vec![Scalar::zero(); self.cols];
                free[f] = Scalar::one();
                self.back_substitute(&free, &zeros)
            })
            .collect()
    }
}

/// Basis of `{x : M x = 0}` for `M` with the given rows.
pub fn kernel(rows: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    echelon(rows, cols).kernel()
}

/// Some solution of `M x = b`, with free variables set to zero, or `None`
/// when the system is inconsistent.
pub fn solve(rows: &[Vec<Scalar>], cols: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(rows.len(), b.len());
    let augmented: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let e = echelon(&augmented, cols + 1);
    if e.pivots.last() == Some(&cols) {
        return None;
    }
    let inner = Echelon {
        rows: e.rows.iter().map(|r| r[..cols].to_vec()).collect(),
        pivots: e.pivots.clone(),
        cols,
    };
    let rhs: Vec<Scalar> = e
        .rows
        .iter()
        .map(|r| Scalar::from_integer(r[cols].clone()))
        .collect();
    Some(inner.back_substitute(&vec![Scalar::zero(); cols], &rhs))
}

/// Transpose of a dense matrix given by rows.
pub fn transpose(rows: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    (0..cols)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect()
}

/// Coordinates of `target` in terms of `vectors` (which must be linearly
/// independent), or `None` if `target` is not in their span.
pub fn coordinates(vectors: &[Vec<Scalar>], dim: usize, target: &[Scalar]) -> Option<Vec<Scalar>> {
    if vectors.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let cols = transpose(vectors, dim);
    solve(&cols, vectors.len(), target)
}

/// Extracts a maximal independent subfamily, keeping earlier vectors first.
pub fn independent_subset(vectors: &[Vec<Scalar>], dim: usize) -> Vec<usize> {
    let mut kept: Vec<Vec<Scalar>> = Vec::new();
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        kept.push(v.clone());
        if rank(&kept, dim) == kept.len() {
            out.push(i);
        } else {
            kept.pop();
        }
    }
    out
}

/// Reduced row echelon basis of the row space (rational, leading ones).
pub fn row_space_basis(vectors: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    let e = echelon(vectors, dim);
    let mut rows: Vec<Vec<Scalar>> = e
        .rows
        .iter()
        .map(|r| r.iter().map(|x| Scalar::from_integer(x.clone())).collect())
        .collect();
    for (r, &p) in e.pivots.iter().enumerate() {
        let lead = rows[r][p].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        for s in 0..rows.len() {
            if s != r && !rows[s][p].is_zero() {
                let f = rows[s][p].clone();
                let (a, b) = if s < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&mut lo[s], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(s);
                    (&mut hi[0], &lo[r])
                };
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    fn apply(rows: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
        rows.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(apply(&a, &k[0]).iter().all(Zero::is_zero));
        assert_eq!(k[0][2], int(1));
    }

    #[test]
    fn rank_deficient_with_skipped_columns() {
        let a = m(&[&[0, 2, 4, 1], &[0, 1, 2, 0], &[0, 3, 6, 5]]);
        assert_eq!(rank(&a, 4), 2);
        for v in kernel(&a, 4) {
            assert!(apply(&a, &v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = vec![vec![ratio(1, 2), int(1)], vec![int(1), int(2)]];
        let x = solve(&a, 2, &[int(1), int(2)]).unwrap();
        assert_eq!(apply(&a, &x), vec![int(1), int(2)]);
        assert!(solve(&a, 2, &[int(1), int(3)]).is_none());
    }

    #[test]
    fn rref() {
        let a = m(&[&[2, 4], &[1, 3]]);
        assert_eq!(row_space_basis(&a, 2), m(&[&[1, 0], &[0, 1]]));
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(entries in proptest::collection::vec(-4i64..5, 12)) {
            let a: Vec<Vec<Scalar>> = entries.chunks(4).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let k = kernel(&a, 4);
            prop_assert_eq!(k.len() + rank(&a, 4), 4);
            for v in &k {
                prop_assert!(apply(&a, v).iter().all(Zero::is_zero));
            }
        }
    }
}
