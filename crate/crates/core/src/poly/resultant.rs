//! Sylvester resultants and z-discriminants.

use alloc::vec::Vec;

use super::{divides, MPoly};
use crate::error::{Error, Result};
use crate::var::Var;

/// Sylvester matrix of `p` and `q` with respect to `v`.
///
/// The first `deg q` rows hold shifted coefficients of `p` (highest power
/// first), the remaining `deg p` rows those of `q`.
pub fn sylvester_matrix(p: &MPoly, q: &MPoly, v: Var) -> Vec<Vec<MPoly>> {
    let m = p.degree(v) as usize;
    let n = q.degree(v) as usize;
    let size = m + n;
    let pc: Vec<MPoly> = p.coeffs_in(v).into_iter().rev().collect();
    let qc: Vec<MPoly> = q.coeffs_in(v).into_iter().rev().collect();
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = alloc::vec![MPoly::zero(); size];
        for (j, c) in pc.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = alloc::vec![MPoly::zero(); size];
        for (j, c) in qc.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant by fraction-free Bareiss elimination. Every division is
/// exact in the polynomial ring.
pub fn bareiss_determinant(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one();
    }
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = divides(&prev, &num).expect("Bareiss step divides exactly");
            }
            m[i][k] = MPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `Res_v(p, q)` as the determinant of the Sylvester matrix.
pub fn sylvester_resultant(p: &MPoly, q: &MPoly, v: Var) -> Result<MPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree(v) == 0 || q.degree(v) == 0 {
        return Err(Error::DegreeZero(v));
    }
    Ok(bareiss_determinant(sylvester_matrix(p, q, v)))
}

/// The `v`-discriminant `Δ`, normalized by
/// `Res_v(P, ∂_v P) = (-1)^{d(d-1)/2} a_0 Δ`.
pub fn z_discriminant(p: &MPoly, v: Var) -> Result<MPoly> {
    let d = p.degree(v) as usize;
    if d < 2 {
        return Err(Error::DegreeTooLow { need: 2, got: d });
    }
    let res = sylvester_resultant(p, &p.diff(v), v)?;
    let a0 = p.lc_in(v);
    let signed = if (d * (d - 1) / 2) % 2 == 1 { -a0 } else { a0 };
    divides(&signed, &res).ok_or(Error::DiscriminantRemainder)
}
