//! Darboux polynomials and the invariance of the discriminant curve.
//!
//! A curve `g = 0` is invariant under `X` when `X(g) = K g`; `K` is its
//! cofactor. For a symmetry `X` of a web the slope differences satisfy
//! `X(p_i - p_j) = λ_ij (p_i - p_j)` with
//! `λ_ij = -(∂_s α₁ - ∂_t α₂ + ∂_t α₁ (p_i + p_j))`, so the reduced
//! discriminant `Δ̃ = ∏ (p_i - p_j)²` has cofactor `2 Σ λ_ij`.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::determining::{is_exact_symmetry, VectorField};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numverify::{self, point, NumericWeb, SamplePlan, DEFAULT_TOL};
use crate::poly::{divides, exact_nullspace, MPoly, Monomial};
use crate::ratfunc::RatFunc;
use crate::web::{Web, WebForm};
use crate::{BigInt, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Cofactor {
    pub curve: RatFunc,
    pub cofactor: RatFunc,
    pub field: VectorField,
}

fn polynomial_field(x: &VectorField) -> Result<(MPoly, MPoly)> {
    x.polys().ok_or(Error::NotRational)
}

fn apply_poly(a: &(MPoly, MPoly), x: &VectorField, g: &MPoly) -> MPoly {
    &(&a.0 * &g.diff(x.coords.first)) + &(&a.1 * &g.diff(x.coords.second))
}

/// `K` with `X(g) = K g`, or `None` when `g` is not invariant.
pub fn cofactor(x: &VectorField, g: &MPoly) -> Result<Option<Cofactor>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let a = polynomial_field(x)?;
    let xg = apply_poly(&a, x, g);
    Ok(divides(g, &xg).map(|k| Cofactor {
        curve: RatFunc::from_poly(g.clone()),
        cofactor: RatFunc::from_poly(k),
        field: x.clone(),
    }))
}

/// Cofactor of a rational curve. For polynomial `X` the numerator and the
/// denominator are divided separately and `K = K_num - K_den`; otherwise
/// `K = X(r) / r`.
pub fn ratfunc_cofactor(x: &VectorField, r: &RatFunc) -> Result<Option<Cofactor>> {
    if r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if x.polys().is_some() {
        let (Some(kn), Some(kd)) = (cofactor(x, r.num())?, cofactor(x, r.den())?) else {
            return Ok(None);
        };
        return Ok(Some(Cofactor { curve: r.clone(), cofactor: &kn.cofactor - &kd.cofactor, field: x.clone() }));
    }
    let xr = x.apply_ratfunc(r).ok_or(Error::NotRational)?;
    let k = xr.checked_div(r).ok_or(Error::DivisionByZero)?;
    Ok(Some(Cofactor { curve: r.clone(), cofactor: k, field: x.clone() }))
}

/// `X ∈ Der(g)`: the curve `g = 0` is invariant under `X`.
pub fn der_membership(x: &VectorField, g: &MPoly) -> Result<bool> {
    Ok(cofactor(x, g)?.is_some())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairCofactor {
    pub i: usize,
    pub j: usize,
    pub lambda: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    pub pairs: Vec<PairCofactor>,
    /// Exact identity check when everything is rational.
    pub exact: bool,
    /// Largest scaled deviation at the samples for the numeric check.
    pub max_deviation: Option<f64>,
}

fn require_symmetry(w: &Web, x: &VectorField, plan: &SamplePlan) -> Result<bool> {
    if w.coords() != x.coords {
        return Err(Error::CoordinateMismatch);
    }
    if w.rational_slopes().is_some() && x.ratfuncs().is_some() {
        let eqs = crate::determining::determining_system(w, x)?;
        if let Some(leaf) = eqs.iter().position(|e| !e.is_zero()) {
            return Err(Error::NotASymmetry { leaf });
        }
        return Ok(true);
    }
    if w.slopes().is_some() && is_exact_symmetry(w, x)? {
        return Ok(false);
    }
    let report = numverify::residual(w, x, plan)?;
    if report.max >= DEFAULT_TOL {
        let leaf = report.per_leaf.iter().position(|r| *r >= DEFAULT_TOL).unwrap_or(0);
        return Err(Error::NotASymmetry { leaf });
    }
    Ok(false)
}

fn lambda_expr(x: &VectorField, pi: &Expr, pj: &Expr) -> Expr {
    let (s, t) = (x.coords.first, x.coords.second);
    x.a1.diff(s)
        .sub(x.a2.diff(t))
        .add(x.a1.diff(t).mul(pi.clone().add(pj.clone())))
        .neg()
        .simplify()
}

/// `λ_ij` for all `i < j`, after checking that `X` is a symmetry.
pub fn pairwise_slope_cofactors(w: &Web, x: &VectorField) -> Result<PairReport> {
    pairwise_slope_cofactors_on(w, x, &SamplePlan::default())
}

pub fn pairwise_slope_cofactors_on(w: &Web, x: &VectorField, plan: &SamplePlan) -> Result<PairReport> {
    let exact = require_symmetry(w, x, plan)?;
    let slopes = w.slopes().ok_or(Error::NoClosedFormSlopes)?;
    let mut pairs = Vec::new();
    let mut checks = Vec::new();
    for i in 0..slopes.len() {
        for j in i + 1..slopes.len() {
            let lambda = lambda_expr(x, &slopes[i].expr, &slopes[j].expr);
            let diff = slopes[i].expr.clone().sub(slopes[j].expr.clone());
            if exact {
                let d = diff.to_ratfunc().ok_or(Error::NotRational)?;
                let lhs = x.apply_ratfunc(&d).ok_or(Error::NotRational)?;
                let l = lambda.to_ratfunc().ok_or(Error::NotRational)?;
                if lhs != &l * &d {
                    return Err(Error::Invalid(alloc::format!("slope pair ({i}, {j}) identity failed")));
                }
            } else {
                checks.push((x.apply(&diff), lambda.clone().mul(diff)));
            }
            pairs.push(PairCofactor { i, j, lambda });
        }
    }
    let max_deviation = if exact { None } else { Some(max_deviation(w, &checks, plan)?) };
    Ok(PairReport { pairs, exact, max_deviation })
}

/// Largest `|a - b| / max(1, |a|, |b|)` over retained plan points.
fn max_deviation(w: &Web, pairs: &[(Expr, Expr)], plan: &SamplePlan) -> Result<f64> {
    let coords = w.coords();
    let mut worst = 0.0f64;
    let mut used = 0;
    let nw = NumericWeb::new(w)?;
    for &(s, t) in &plan.points {
        if let Ok(leaves) = nw.leaves_at(s, t) {
            if numverify::reduced_discriminant_at(&leaves).norm() <= numverify::DISCRIMINANT_FLOOR {
                continue;
            }
        }
        let at = point(coords, s, t);
        let vals: Result<Vec<_>> =
            pairs.iter().map(|(a, b)| Ok((a.eval_complex(&at)?, b.eval_complex(&at)?))).collect();
        let Ok(vals) = vals else { continue };
        if vals.iter().any(|(a, b)| !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite())) {
            continue;
        }
        used += 1;
        for (a, b) in vals {
            let scale = 1.0f64.max(a.norm()).max(b.norm());
            worst = worst.max((a - b).norm() / scale);
        }
    }
    if used == 0 {
        return Err(Error::EmptyPlan);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminantCofactor {
    /// `K = 2 Σ λ_ij`.
    pub cofactor: Expr,
    pub reduced_discriminant: Expr,
    /// `X(Δ̃) = K Δ̃` was checked exactly.
    pub exact: bool,
    pub verified: bool,
    pub max_deviation: Option<f64>,
    /// Cofactor of the full discriminant `Δ` for coefficient-form webs and
    /// polynomial `X`; `None` when not applicable or not invariant.
    pub full: Option<Cofactor>,
}

/// `2 Σ_{i<j} λ_ij` from the coefficients:
/// `Σ (p_i + p_j) = (d - 1) Σ p_i = -(d - 1) a_1 / a_0`.
fn cofactor_from_coefficients(w: &Web, x: &VectorField) -> Result<Expr> {
    let d = w.degree() as i64;
    let cs = w.coefficients()?;
    let (s, t) = (x.coords.first, x.coords.second);
    let sum_p = Expr::from_ratfunc(&RatFunc::new(-cs[1].clone(), cs[0].clone()).expect("a_0 is nonzero"));
    let pairs = Expr::integer(d * (d - 1) / 2);
    let k = x.a1.diff(t).mul(Expr::integer(d - 1)).mul(sum_p).neg().sub(pairs.mul(x.a1.diff(s).sub(x.a2.diff(t))));
    Ok(k.scale(Rational::from_integer(2.into())).simplify())
}

/// Cofactor of the reduced discriminant under a symmetry `X`.
pub fn discriminant_cofactor(w: &Web, x: &VectorField) -> Result<DiscriminantCofactor> {
    discriminant_cofactor_on(w, x, &SamplePlan::default())
}

pub fn discriminant_cofactor_on(w: &Web, x: &VectorField, plan: &SamplePlan) -> Result<DiscriminantCofactor> {
    require_symmetry(w, x, plan)?;
    let k = match w.form() {
        WebForm::Slopes(slopes) => {
            let mut acc = Vec::new();
            for i in 0..slopes.len() {
                for j in i + 1..slopes.len() {
                    acc.push(lambda_expr(x, &slopes[i].expr, &slopes[j].expr));
                }
            }
            Expr::sum(acc).scale(Rational::from_integer(2.into())).simplify()
        }
        WebForm::Coefficients(_) => cofactor_from_coefficients(w, x)?,
    };
    let reduced = w.reduced_discriminant_expr()?;
    let exact_data = match (w.reduced_discriminant(), x.ratfuncs(), k.to_ratfunc()) {
        (Ok(r), Some(_), Some(kr)) => Some((r, kr)),
        _ => None,
    };
    let (exact, verified, max_dev) = match exact_data {
        Some((r, kr)) => {
            let lhs = x.apply_ratfunc(&r).ok_or(Error::NotRational)?;
            (true, lhs == &kr * &r, None)
        }
        None => {
            let dev = max_deviation(w, &[(x.apply(&reduced), k.clone().mul(reduced.clone()))], plan)?;
            (false, dev <= DEFAULT_TOL, Some(dev))
        }
    };
    let full = match (w.form(), x.polys()) {
        (WebForm::Coefficients(_), Some(_)) if w.degree() >= 2 => cofactor(x, &w.discriminant()?)?,
        _ => None,
    };
    Ok(DiscriminantCofactor { cofactor: k, reduced_discriminant: reduced, exact, verified, max_deviation: max_dev, full })
}

/// Numeric counterpart of [`discriminant_cofactor`] at a scaled tolerance.
pub fn numeric_cofactor_check(w: &Web, x: &VectorField, k: &Expr, plan: &SamplePlan) -> Result<f64> {
    let reduced = w.reduced_discriminant_expr()?;
    max_deviation(w, &[(x.apply(&reduced), k.clone().mul(reduced))], plan)
}

/// Integer `λ ≠ 0` with `Σ λ_i K_i = 0`, gcd 1 and first nonzero entry
/// positive.
pub fn first_integral_search(cofactors: &[MPoly]) -> Result<Option<Vec<BigInt>>> {
    if cofactors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut monos: Vec<Monomial> = cofactors.iter().flat_map(|k| k.terms().map(|(m, _)| *m)).collect();
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<Rational>> =
        monos.iter().map(|m| cofactors.iter().map(|k| k.coefficient(m)).collect()).collect();
    let null = if rows.is_empty() {
        // all cofactors vanish: every curve is itself a first integral
        let mut v = alloc::vec![Rational::zero(); cofactors.len()];
        v[0] = Rational::from_integer(1.into());
        alloc::vec![v]
    } else {
        exact_nullspace(&rows, cofactors.len())
    };
    let Some(v) = null.into_iter().next() else {
        return Ok(None);
    };
    let l = v.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    for n in ints.iter_mut() {
        *n = &*n / &g;
    }
    if ints.iter().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative()) {
        for n in ints.iter_mut() {
            *n = -&*n;
        }
    }
    Ok(Some(ints))
}

/// `g_1^{λ_1} ··· g_p^{λ_p}`.
pub fn first_integral(curves: &[MPoly], lambda: &[BigInt]) -> Expr {
    let factors = curves
        .iter()
        .zip(lambda)
        .map(|(g, l)| Expr::pow(Expr::from_poly(g), Rational::from_integer(l.clone())))
        .collect();
    Expr::product(factors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxBound {
    /// Degree of `X`.
    pub degree: u32,
    /// `m (m + 1) / 2 + 1`.
    pub threshold: usize,
    pub curves: usize,
    pub guaranteed: bool,
}

/// Whether the number of invariant curves reaches the count that forces a
/// cofactor relation.
pub fn darboux_bound_report(x: &VectorField, curves: &[MPoly]) -> Result<DarbouxBound> {
    let (a1, a2) = polynomial_field(x)?;
    let degree = a1.total_degree().unwrap_or(0).max(a2.total_degree().unwrap_or(0));
    let m = degree as usize;
    let threshold = m * (m + 1) / 2 + 1;
    Ok(DarbouxBound { degree, threshold, curves: curves.len(), guaranteed: curves.len() >= threshold })
}
