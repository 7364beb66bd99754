//! Planar d-webs in coefficient form, prepared (slope) form, or given by
//! first integrals of their foliations.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{Expr, Point};
use crate::numverify::SamplePlan;
use crate::poly::{divides, sylvester_resultant, z_discriminant, MPoly};
use crate::ratfunc::RatFunc;
use crate::var::{Coords, Var};
use crate::Rational;

/// Seed of the fixed sample used for sampled distinctness checks.
const DISTINCTNESS_SEED: u64 = 0x7765_6273;
const DISTINCTNESS_POINTS: usize = 20;

/// One prepared slope `p_i`, with its rational-function form when it has one.
#[derive(Clone, Debug, PartialEq)]
pub struct Slope {
    pub expr: Expr,
    pub rational: Option<RatFunc>,
}

impl Slope {
    fn new(expr: Expr) -> Slope {
        let expr = expr.simplify();
        let rational = expr.to_ratfunc();
        Slope { expr, rational }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WebForm {
    /// `a_0, ..., a_d` with `P_F = a_0 z^d + ... + a_d`.
    Coefficients(Vec<MPoly>),
    /// Monic prepared form `∏ (z - p_i)`.
    Slopes(Vec<Slope>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Web {
    coords: Coords,
    form: WebForm,
    foliations: Option<Vec<Expr>>,
    label: String,
}

fn check_vars(coords: Coords, vars: &[Var]) -> Result<()> {
    match vars.iter().find(|v| !coords.contains(**v)) {
        Some(v) => Err(Error::ForeignVariable(*v)),
        None => Ok(()),
    }
}

fn point_of(coords: Coords, s: f64, t: f64) -> Point {
    Point::new().with_real(coords.first, s).with_real(coords.second, t)
}

fn sampled_equal(coords: Coords, a: &Expr, b: &Expr) -> bool {
    let plan = SamplePlan::uniform(DISTINCTNESS_POINTS, 0.5, 2.5, DISTINCTNESS_SEED);
    let mut compared = 0;
    for &(s, t) in &plan.points {
        let p = point_of(coords, s, t);
        if let (Ok(va), Ok(vb)) = (a.eval_complex(&p), b.eval_complex(&p)) {
            compared += 1;
            if (va - vb).norm() > 1e-12 * (1.0 + va.norm()) {
                return false;
            }
        }
    }
    compared > 0
}

impl Web {
    /// Coefficient form from `a_0, ..., a_d`.
    pub fn from_coefficients(coeffs: Vec<MPoly>, coords: Coords) -> Result<Web> {
        if coeffs.len() < 2 {
            return Err(Error::EmptyWeb);
        }
        if coeffs[0].is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        for c in &coeffs {
            check_vars(coords, &c.variables())?;
        }
        Ok(Web { coords, form: WebForm::Coefficients(coeffs), foliations: None, label: String::new() })
    }

    /// Coefficient form read off a presentation polynomial in `z`.
    pub fn from_presentation(p: &MPoly, coords: Coords) -> Result<Web> {
        let mut cs = p.coeffs_in(Var::Z);
        cs.reverse();
        Web::from_coefficients(cs, coords)
    }

    /// Prepared form from slopes `p_1, ..., p_d`.
    pub fn from_slopes(slopes: Vec<Expr>, coords: Coords) -> Result<Web> {
        if slopes.is_empty() {
            return Err(Error::EmptyWeb);
        }
        for s in &slopes {
            check_vars(coords, &s.variables())?;
        }
        let slopes: Vec<Slope> = slopes.into_iter().map(Slope::new).collect();
        for i in 0..slopes.len() {
            for j in i + 1..slopes.len() {
                let same = match (&slopes[i].rational, &slopes[j].rational) {
                    (Some(a), Some(b)) => a == b,
                    _ => sampled_equal(coords, &slopes[i].expr, &slopes[j].expr),
                };
                if same {
                    return Err(Error::NotInGeneralPosition(i, j));
                }
            }
        }
        Ok(Web { coords, form: WebForm::Slopes(slopes), foliations: None, label: String::new() })
    }

    /// Prepared form with `p_i = -∂_1 F_i / ∂_2 F_i`.
    pub fn from_foliations(foliations: Vec<Expr>, coords: Coords) -> Result<Web> {
        let mut slopes = Vec::with_capacity(foliations.len());
        for (i, f) in foliations.iter().enumerate() {
            check_vars(coords, &f.variables())?;
            let fs = f.diff(coords.first);
            let ft = f.diff(coords.second).simplify();
            if ft.is_zero() || sampled_vanishes(coords, &ft) {
                return Err(Error::VerticalLeaf { index: i, var: coords.second });
            }
            slopes.push(fs.neg().div(ft).simplify());
        }
        let mut w = Web::from_slopes(slopes, coords)?;
        w.foliations = Some(foliations);
        Ok(w)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Web {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn form(&self) -> &WebForm {
        &self.form
    }

    pub fn foliations(&self) -> Option<&[Expr]> {
        self.foliations.as_deref()
    }

    pub fn degree(&self) -> usize {
        match &self.form {
            WebForm::Coefficients(c) => c.len() - 1,
            WebForm::Slopes(s) => s.len(),
        }
    }

    pub fn slopes(&self) -> Option<&[Slope]> {
        match &self.form {
            WebForm::Slopes(s) => Some(s),
            WebForm::Coefficients(_) => None,
        }
    }

    /// All slopes as rational functions, when the web is in prepared form
    /// and every slope is rational.
    pub fn rational_slopes(&self) -> Option<Vec<RatFunc>> {
        self.slopes()?.iter().map(|s| s.rational.clone()).collect()
    }

    pub fn require_rational_slopes(&self) -> Result<Vec<RatFunc>> {
        self.rational_slopes().ok_or(Error::NotRational)
    }

    /// `a_0, ..., a_d`. Rational slopes `n_i/d_i` give
    /// `P_F = ∏ (d_i z - n_i)`, so `a_0 = ∏ d_i`.
    pub fn coefficients(&self) -> Result<Vec<MPoly>> {
        match &self.form {
            WebForm::Coefficients(c) => Ok(c.clone()),
            WebForm::Slopes(_) => {
                let mut cs = self.presentation_polynomial()?.coeffs_in(Var::Z);
                cs.reverse();
                Ok(cs)
            }
        }
    }

    /// `P_F(z; s, t)`.
    pub fn presentation_polynomial(&self) -> Result<MPoly> {
        match &self.form {
            WebForm::Coefficients(c) => {
                let d = c.len() - 1;
                let mut p = MPoly::zero();
                for (k, a) in c.iter().enumerate() {
                    p += &(a * &MPoly::var(Var::Z).pow((d - k) as u32));
                }
                Ok(p)
            }
            WebForm::Slopes(_) => {
                let slopes = self.require_rational_slopes()?;
                let mut p = MPoly::one();
                for s in &slopes {
                    let factor = &(s.den() * &MPoly::var(Var::Z)) - s.num();
                    p = &p * &factor;
                }
                Ok(p)
            }
        }
    }

    /// `Res_z(P_F, ∂_z P_F)`.
    pub fn resultant(&self) -> Result<MPoly> {
        let p = self.presentation_polynomial()?;
        if self.degree() == 1 {
            // Res(a_0 z + a_1, a_0) = a_0
            return Ok(p.lc_in(Var::Z));
        }
        sylvester_resultant(&p, &p.diff(Var::Z), Var::Z)
    }

    /// The z-discriminant `Δ` of the presentation polynomial.
    pub fn discriminant(&self) -> Result<MPoly> {
        z_discriminant(&self.presentation_polynomial()?, Var::Z)
    }

    /// `Δ̃ = ∏_{i<j} (p_i - p_j)^2`, equal to `Δ / a_0^{2d-2}`.
    pub fn reduced_discriminant(&self) -> Result<RatFunc> {
        match &self.form {
            WebForm::Slopes(_) => {
                let slopes = self.require_rational_slopes()?;
                let mut acc = RatFunc::one();
                for i in 0..slopes.len() {
                    for j in i + 1..slopes.len() {
                        let d = &slopes[i] - &slopes[j];
                        acc = &acc * &(&d * &d);
                    }
                }
                Ok(acc)
            }
            WebForm::Coefficients(c) => {
                let d = self.degree();
                if d == 1 {
                    return Ok(RatFunc::one());
                }
                let delta = self.discriminant()?;
                Ok(RatFunc::new(delta, c[0].pow((2 * d - 2) as u32)).expect("a_0 is nonzero"))
            }
        }
    }

    /// `Δ̃` as an expression, also for non-rational slopes.
    pub fn reduced_discriminant_expr(&self) -> Result<Expr> {
        if let Ok(r) = self.reduced_discriminant() {
            return Ok(Expr::from_ratfunc(&r));
        }
        let slopes = self.slopes().ok_or(Error::NotRational)?;
        let mut fs = Vec::new();
        for i in 0..slopes.len() {
            for j in i + 1..slopes.len() {
                fs.push(Expr::powi(slopes[i].expr.clone().sub(slopes[j].expr.clone()), 2));
            }
        }
        Ok(Expr::product(fs))
    }

    /// Whether the factorization condition holds at an exact point:
    /// `R_{P_F} ≠ 0` in coefficient form, pairwise distinct slopes otherwise.
    pub fn check_factorization_condition(&self, point: (Rational, Rational)) -> Result<bool> {
        let coords = self.coords;
        let at = |v: Var| {
            if v == coords.first {
                Some(point.0.clone())
            } else if v == coords.second {
                Some(point.1.clone())
            } else {
                None
            }
        };
        match &self.form {
            WebForm::Coefficients(_) => {
                let r = self.resultant()?;
                Ok(!r.eval(&at).ok_or(Error::UnboundVariable(Var::Z))?.is_zero())
            }
            WebForm::Slopes(slopes) => {
                let mut vals = Vec::with_capacity(slopes.len());
                for (i, s) in slopes.iter().enumerate() {
                    match &s.rational {
                        Some(r) => vals.push(Err(r.eval(&at).ok_or(Error::SlopePole(i))?)),
                        None => {
                            let p = point_of(
                                coords,
                                crate::poly::rational_to_f64(&point.0),
                                crate::poly::rational_to_f64(&point.1),
                            );
                            let v = s.expr.eval_complex(&p).map_err(|_| Error::SlopePole(i))?;
                            vals.push(Ok(v));
                        }
                    }
                }
                for i in 0..vals.len() {
                    for j in i + 1..vals.len() {
                        let equal = match (&vals[i], &vals[j]) {
                            (Err(a), Err(b)) => a == b,
                            (a, b) => {
                                let fa = a.clone().unwrap_or_else(|q| crate::Complex64::new(crate::poly::rational_to_f64(&q), 0.0));
                                let fb = b.clone().unwrap_or_else(|q| crate::Complex64::new(crate::poly::rational_to_f64(&q), 0.0));
                                (fa - fb).norm() <= 1e-12
                            }
                        };
                        if equal {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }
}

fn sampled_vanishes(coords: Coords, e: &Expr) -> bool {
    if e.is_rational() {
        return false;
    }
    let plan = SamplePlan::uniform(DISTINCTNESS_POINTS, 0.5, 2.5, DISTINCTNESS_SEED);
    plan.points.iter().all(|&(s, t)| match e.eval_complex(&point_of(coords, s, t)) {
        Ok(v) => v.norm() < 1e-14,
        Err(_) => true,
    })
}

/// A change of coordinates given by the old coordinates as expressions in
/// the new ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    pub old: Coords,
    pub new: Coords,
    pub first: Expr,
    pub second: Expr,
}

impl Substitution {
    pub fn new(old: Coords, new: Coords, first: Expr, second: Expr) -> Result<Substitution> {
        check_vars(new, &first.variables())?;
        check_vars(new, &second.variables())?;
        Ok(Substitution { old, new, first, second })
    }

    pub fn apply(&self, e: &Expr) -> Expr {
        let (a, b) = (self.old.first, self.old.second);
        e.substitute_all(&|v| {
            if v == a {
                Some(self.first.clone())
            } else if v == b {
                Some(self.second.clone())
            } else {
                None
            }
        })
    }
}

/// Rewrite first integrals in new coordinates.
pub fn change_vars_foliations(foliations: &[Expr], sub: &Substitution) -> Vec<Expr> {
    foliations.iter().map(|f| sub.apply(f).simplify()).collect()
}

/// Transport a web through a change of coordinates.
///
/// Foliation-defined webs substitute their first integrals; prepared webs
/// transform slopes by `q = (p X_u - Y_u) / (Y_v - p X_v)`; coefficient
/// webs need a polynomial substitution and are rewritten as polynomials in
/// the new slope.
pub fn change_vars(web: &Web, sub: &Substitution) -> Result<Web> {
    if web.coords != sub.old {
        return Err(Error::CoordinateMismatch);
    }
    let (u, v) = (sub.new.first, sub.new.second);
    let label = web.label.clone();
    if let Some(fs) = &web.foliations {
        return Ok(Web::from_foliations(change_vars_foliations(fs, sub), sub.new)?.with_label(label));
    }
    let xu = sub.first.diff(u);
    let xv = sub.first.diff(v);
    let yu = sub.second.diff(u);
    let yv = sub.second.diff(v);
    match &web.form {
        WebForm::Slopes(slopes) => {
            let mut out = Vec::new();
            for (i, s) in slopes.iter().enumerate() {
                let p = sub.apply(&s.expr);
                let den = yv.clone().sub(p.clone().mul(xv.clone())).simplify();
                if den.is_zero() {
                    return Err(Error::VerticalLeaf { index: i, var: v });
                }
                out.push(p.mul(xu.clone()).sub(yu.clone()).div(den).simplify());
            }
            Ok(Web::from_slopes(out, sub.new)?.with_label(label))
        }
        WebForm::Coefficients(cs) => {
            let poly = |e: &Expr| e.to_poly().ok_or(Error::NotRational);
            let (px, py) = (poly(&sub.first)?, poly(&sub.second)?);
            let (xu, xv, yu, yv) = (poly(&xu)?, poly(&xv)?, poly(&yu)?, poly(&yv)?);
            let z = MPoly::var(Var::Z);
            let dy = &yu + &(&yv * &z);
            let dx = &xu + &(&xv * &z);
            let d = cs.len() - 1;
            let mut p = MPoly::zero();
            for (k, a) in cs.iter().enumerate() {
                let a = a.substitute(web.coords.first, &px).substitute(web.coords.second, &py);
                // a_k (dy/dx)^{d-k} (dx)^d
                p += &(&(&a * &dy.pow((d - k) as u32)) * &dx.pow(k as u32));
            }
            if p.degree(Var::Z) as usize != d {
                return Err(Error::DegreeMismatch { declared: d, found: p.degree(Var::Z) as usize });
            }
            Ok(Web::from_presentation(&p, sub.new)?.with_label(label))
        }
    }
}

/// `Δ = a_0^{2d-2} ∏ (p_i - p_j)^2` as a single check for prepared webs with
/// rational slopes.
pub fn product_formula_holds(web: &Web) -> Result<bool> {
    let d = web.degree();
    let a0 = web.coefficients()?.remove(0);
    let delta = web.discriminant()?;
    let rhs = &RatFunc::from_poly(a0.pow((2 * d - 2) as u32)) * &web.reduced_discriminant()?;
    Ok(RatFunc::from_poly(delta) == rhs)
}

/// Exact form of the resultant identity `Res = (-1)^{d(d-1)/2} a_0 Δ`.
pub fn resultant_identity_holds(web: &Web) -> Result<bool> {
    let d = web.degree();
    let a0 = web.coefficients()?.remove(0);
    let res = web.resultant()?;
    let delta = web.discriminant()?;
    let mut rhs = &a0 * &delta;
    if (d * (d - 1) / 2) % 2 == 1 {
        rhs = -rhs;
    }
    Ok(res == rhs && divides(&a0, &res).is_some())
}
