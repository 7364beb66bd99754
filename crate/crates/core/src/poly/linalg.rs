//! Exact rational linear algebra: rank and right nullspace.
//!
//! Rows are scaled to integers and reduced by fraction-free (Bareiss)
//! elimination; only the final back-substitution uses rationals.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{BigInt, Rational};

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_rows(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

fn echelon(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

/// Rank of a rational matrix with `cols` columns.
pub fn rank(m: &[Vec<Rational>], cols: usize) -> usize {
    echelon(integer_rows(m, cols), cols).pivots.len()
}

/// Basis of `{ v : M v = 0 }`.
///
/// One vector per free (non-pivot) column, in increasing column order; that
/// coordinate is 1 and the other free coordinates are 0. An empty result
/// means the nullspace is trivial.
pub fn exact_nullspace(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let e = echelon(integer_rows(m, cols), cols);
    let mut is_pivot = alloc::vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = alloc::vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in e.rows.iter().zip(e.pivots.iter()).rev() {
            let mut s = Rational::zero();
            for j in pc + 1..cols {
                if !row[j].is_zero() && !v[j].is_zero() {
                    s += Rational::from_integer(row[j].clone()) * &v[j];
                }
            }
            v[pc] = -s / Rational::from_integer(row[pc].clone());
        }
        basis.push(v);
    }
    basis
}
