//! Lie brackets, span membership and structure constants.
//!
//! Polynomial bases are handled exactly. Any other basis is sampled at 40
//! points and each bracket is fitted by complex least squares; the bracket
//! counts as inside the span when the fit residual is at most 1e-8.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::determining::VectorField;
use crate::error::{Error, Result};
use crate::numverify::{point, SamplePlan};
use crate::poly::{exact_nullspace, rank};
use crate::solver::coefficient_matrix;
use crate::Rational;

pub const NUMERIC_POINTS: usize = 40;
pub const NUMERIC_THRESHOLD: f64 = 1e-8;

/// `[X, Y] = (X(β₁) - Y(α₁), X(β₂) - Y(α₂))`.
pub fn bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if x.coords != y.coords {
        return Err(Error::CoordinateMismatch);
    }
    if let (Some((a1, a2)), Some((b1, b2))) = (x.polys(), y.polys()) {
        let (s, t) = (x.coords.first, x.coords.second);
        let apply = |f1: &crate::MPoly, f2: &crate::MPoly, g: &crate::MPoly| &(f1 * &g.diff(s)) + &(f2 * &g.diff(t));
        let c1 = &apply(&a1, &a2, &b1) - &apply(&b1, &b2, &a1);
        let c2 = &apply(&a1, &a2, &b2) - &apply(&b1, &b2, &a2);
        return Ok(VectorField::from_polys(&c1, &c2, x.coords));
    }
    let c1 = x.apply(&y.a1).sub(y.apply(&x.a1)).simplify();
    let c2 = x.apply(&y.a2).sub(y.apply(&x.a2)).simplify();
    Ok(VectorField { a1: c1, a2: c2, coords: x.coords })
}

#[derive(Clone, Debug, PartialEq)]
pub enum StructureConstants {
    /// `c[i][j][k]` with `[X_i, X_j] = Σ_k c[i][j][k] X_k`.
    Exact(Vec<Vec<Vec<Rational>>>),
    Numeric(Vec<Vec<Vec<Complex64>>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClosureMode {
    Exact,
    /// Least-squares fit; `max_residual` over all brackets.
    Numeric { points: usize, max_residual: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraReport {
    pub basis: Vec<VectorField>,
    pub dimension: usize,
    pub closed: bool,
    pub mode: ClosureMode,
    /// Present when `closed`.
    pub constants: Option<StructureConstants>,
    /// First bracket `(i, j)` that left the span.
    pub offending: Option<(usize, usize)>,
}

impl AlgebraReport {
    /// Antisymmetry and the Jacobi identity on exact constants.
    pub fn constants_consistent(&self) -> bool {
        let Some(StructureConstants::Exact(c)) = &self.constants else {
            return false;
        };
        let n = self.dimension;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return false;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut acc = Rational::zero();
                        for l in 0..n {
                            acc += &c[i][j][l] * &c[l][k][m];
                            acc += &c[j][k][l] * &c[l][i][m];
                            acc += &c[k][i][l] * &c[l][j][m];
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `true` when every structure constant vanishes.
    pub fn is_abelian(&self) -> bool {
        match &self.constants {
            Some(StructureConstants::Exact(c)) => c.iter().flatten().flatten().all(Zero::is_zero),
            Some(StructureConstants::Numeric(c)) => c.iter().flatten().flatten().all(|z| z.norm() <= NUMERIC_THRESHOLD),
            None => false,
        }
    }
}

/// Coordinates of `target` in the span of the rows `basis`, if any.
fn exact_coordinates(basis: &[Vec<Rational>], target: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    // null vectors of [b_1 ... b_n t] with a nonzero last entry
    let n = basis.len();
    let columns: Vec<Vec<Rational>> = (0..cols)
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let null = exact_nullspace(&columns, n + 1);
    let v = null.into_iter().find(|v| !v[n].is_zero())?;
    let scale = -Rational::one() / &v[n];
    Some(v[..n].iter().map(|q| q * &scale).collect())
}

/// Coordinates of a polynomial field in the span of polynomial fields.
pub fn span_coordinates(basis: &[VectorField], x: &VectorField) -> Option<Vec<Rational>> {
    let mut all = basis.to_vec();
    all.push(x.clone());
    let (rows, cols) = coefficient_matrix(&all)?;
    if rows.len() == 1 {
        return rows[0].iter().all(Zero::is_zero).then(Vec::new);
    }
    exact_coordinates(&rows[..basis.len()], &rows[basis.len()], cols)
}

/// Linear independence of polynomial fields over ℚ.
pub fn independent(basis: &[VectorField]) -> Option<bool> {
    let (rows, cols) = coefficient_matrix(basis)?;
    Some(rank(&rows, cols) == basis.len())
}

/// Brackets every pair and tests membership in the span of `basis`.
pub fn closure_check(basis: &[VectorField]) -> Result<AlgebraReport> {
    if let Some(c) = basis.first().map(|f| f.coords) {
        if basis.iter().any(|f| f.coords != c) {
            return Err(Error::CoordinateMismatch);
        }
    }
    match independent(basis) {
        Some(true) => exact_closure(basis),
        Some(false) => Err(Error::LinearlyDependent),
        None => numeric_closure(basis),
    }
}

fn exact_closure(basis: &[VectorField]) -> Result<AlgebraReport> {
    let n = basis.len();
    let mut c = alloc::vec![alloc::vec![alloc::vec![Rational::zero(); n]; n]; n];
    let mut offending = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let b = bracket(&basis[i], &basis[j])?;
            match span_coordinates(basis, &b) {
                Some(k) => {
                    for (l, q) in k.into_iter().enumerate() {
                        c[j][i][l] = -q.clone();
                        c[i][j][l] = q;
                    }
                }
                None => {
                    offending = Some((i, j));
                    break 'outer;
                }
            }
        }
    }
    Ok(AlgebraReport {
        basis: basis.to_vec(),
        dimension: n,
        closed: offending.is_none(),
        mode: ClosureMode::Exact,
        constants: offending.is_none().then_some(StructureConstants::Exact(c)),
        offending,
    })
}

fn sample_field(x: &VectorField, pts: &[(f64, f64)]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(2 * pts.len());
    for &(s, t) in pts {
        let at = point(x.coords, s, t);
        for e in [&x.a1, &x.a2] {
            let v = e.eval_complex(&at)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Modified Gram-Schmidt QR of the columns `a`; returns `(q, r)` or `None`
/// when the columns are numerically dependent.
fn qr(a: &[Vec<Complex64>]) -> Option<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> {
    let n = a.len();
    let mut q: Vec<Vec<Complex64>> = a.to_vec();
    let mut r = alloc::vec![alloc::vec![Complex64::zero(); n]; n];
    for k in 0..n {
        let scale = a[k].iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        for i in 0..k {
            let dot: Complex64 = q[i].iter().zip(&q[k]).map(|(u, v)| u.conj() * v).sum();
            r[i][k] = dot;
            let qi = q[i].clone();
            for (v, u) in q[k].iter_mut().zip(&qi) {
                *v -= dot * u;
            }
        }
        let norm = libm::sqrt(q[k].iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm <= 1e-9 * scale {
            return None;
        }
        r[k][k] = Complex64::new(norm, 0.0);
        for v in q[k].iter_mut() {
            *v /= norm;
        }
    }
    Some((q, r))
}

fn least_squares(q: &[Vec<Complex64>], r: &[Vec<Complex64>], b: &[Complex64]) -> Vec<Complex64> {
    let n = q.len();
    let qb: Vec<Complex64> = q.iter().map(|qi| qi.iter().zip(b).map(|(u, v)| u.conj() * v).sum()).collect();
    let mut x = alloc::vec![Complex64::zero(); n];
    for i in (0..n).rev() {
        let mut acc = qb[i];
        for j in i + 1..n {
            acc -= r[i][j] * x[j];
        }
        x[i] = acc / r[i][i];
    }
    x
}

fn numeric_closure(basis: &[VectorField]) -> Result<AlgebraReport> {
    let n = basis.len();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            brackets.push(((i, j), bracket(&basis[i], &basis[j])?));
        }
    }
    let plan = SamplePlan::with_points(4 * NUMERIC_POINTS);
    let pts: Vec<(f64, f64)> = plan
        .points
        .iter()
        .copied()
        .filter(|&p| {
            let one = [p];
            basis.iter().all(|f| sample_field(f, &one).is_ok())
                && brackets.iter().all(|(_, b)| sample_field(b, &one).is_ok())
        })
        .take(NUMERIC_POINTS)
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptyPlan);
    }
    let cols: Vec<Vec<Complex64>> = basis.iter().map(|f| sample_field(f, &pts)).collect::<Result<_>>()?;
    let (q, r) = qr(&cols).ok_or(Error::LinearlyDependent)?;
    let mut c = alloc::vec![alloc::vec![alloc::vec![Complex64::zero(); n]; n]; n];
    let mut max_residual = 0.0f64;
    let mut offending = None;
    for ((i, j), b) in &brackets {
        let target = sample_field(b, &pts)?;
        let k = least_squares(&q, &r, &target);
        let mut res = 0.0f64;
        for (row, t) in target.iter().enumerate() {
            let fit: Complex64 = (0..n).map(|l| k[l] * cols[l][row]).sum();
            res = res.max((fit - t).norm());
        }
        max_residual = max_residual.max(res);
        if res > NUMERIC_THRESHOLD && offending.is_none() {
            offending = Some((*i, *j));
        }
        for (l, z) in k.into_iter().enumerate() {
            c[*i][*j][l] = z;
            c[*j][*i][l] = -z;
        }
    }
    Ok(AlgebraReport {
        basis: basis.to_vec(),
        dimension: n,
        closed: offending.is_none(),
        mode: ClosureMode::Numeric { points: pts.len(), max_residual },
        constants: offending.is_none().then_some(StructureConstants::Numeric(c)),
        offending,
    })
}
