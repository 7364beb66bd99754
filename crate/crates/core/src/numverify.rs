//! Seeded numeric verification of symmetry certificates.
//!
//! Slopes are evaluated from closed forms when available and otherwise as
//! complex roots of `P_F` at each sample point, with gradients
//! `∂p = -∂P / ∂_z P`. A point is kept only when every slope, the field and
//! its first derivatives evaluate to finite values and `|Δ̃| > 1e-6`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::determining::VectorField;
use crate::error::{Error, Result};
use crate::expr::{Expr, Point};
use crate::poly::MPoly;
use crate::var::{Coords, Var};
use crate::web::{Web, WebForm};

pub const DEFAULT_SEED: u64 = 0x5745_4253_594d;
pub const DEFAULT_POINTS: usize = 64;
pub const DEFAULT_LO: f64 = 0.5;
pub const DEFAULT_HI: f64 = 2.5;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Sample points with `|Δ̃|` at or below this are skipped.
pub const DISCRIMINANT_FLOOR: f64 = 1e-6;

/// Points drawn uniformly from `[lo, hi]²` by a seeded ChaCha8 stream.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
    pub points: Vec<(f64, f64)>,
}

impl SamplePlan {
    pub fn uniform(n: usize, lo: f64, hi: f64, seed: u64) -> SamplePlan {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..n).map(|_| (rng.gen_range(lo..hi), rng.gen_range(lo..hi))).collect();
        SamplePlan { seed, lo, hi, points }
    }

    pub fn with_points(n: usize) -> SamplePlan {
        SamplePlan::uniform(n, DEFAULT_LO, DEFAULT_HI, DEFAULT_SEED)
    }
}

impl Default for SamplePlan {
    fn default() -> SamplePlan {
        SamplePlan::with_points(DEFAULT_POINTS)
    }
}

pub(crate) fn point(coords: Coords, s: f64, t: f64) -> Point {
    Point::new().with_real(coords.first, s).with_real(coords.second, t)
}

fn finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}

/// Value and gradient of one slope at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafJet {
    pub p: Complex64,
    pub ps: Complex64,
    pub pt: Complex64,
}

#[derive(Clone, Debug)]
enum Kind {
    Slopes(Vec<[Expr; 3]>),
    Coefficients { coeffs: Vec<MPoly>, ps: MPoly, pt: MPoly, pz: MPoly },
}

/// A web prepared for repeated numeric evaluation.
#[derive(Clone, Debug)]
pub struct NumericWeb {
    coords: Coords,
    kind: Kind,
}

fn eval_poly(p: &MPoly, at: &Point) -> Result<Complex64> {
    p.eval_complex(&|v| at.get(v)).ok_or(Error::UnboundVariable(Var::Z))
}

impl NumericWeb {
    pub fn new(w: &Web) -> Result<NumericWeb> {
        let coords = w.coords();
        let kind = match w.form() {
            WebForm::Slopes(slopes) => Kind::Slopes(
                slopes
                    .iter()
                    .map(|s| [s.expr.clone(), s.expr.diff(coords.first), s.expr.diff(coords.second)])
                    .collect(),
            ),
            WebForm::Coefficients(cs) => {
                let p = w.presentation_polynomial()?;
                Kind::Coefficients {
                    coeffs: cs.clone(),
                    ps: p.diff(coords.first),
                    pt: p.diff(coords.second),
                    pz: p.diff(Var::Z),
                }
            }
        };
        Ok(NumericWeb { coords, kind })
    }

    pub fn degree(&self) -> usize {
        match &self.kind {
            Kind::Slopes(s) => s.len(),
            Kind::Coefficients { coeffs, .. } => coeffs.len() - 1,
        }
    }

    /// Slopes and their gradients at `(s, t)`. Roots of `P_F` come out in
    /// lexicographic `(re, im)` order.
    pub fn leaves_at(&self, s: f64, t: f64) -> Result<Vec<LeafJet>> {
        let at = point(self.coords, s, t);
        match &self.kind {
            Kind::Slopes(jets) => jets
                .iter()
                .map(|[p, ps, pt]| {
                    Ok(LeafJet {
                        p: finite(p.eval_complex(&at)?)?,
                        ps: finite(ps.eval_complex(&at)?)?,
                        pt: finite(pt.eval_complex(&at)?)?,
                    })
                })
                .collect(),
            Kind::Coefficients { coeffs, ps, pt, pz } => {
                let c: Vec<Complex64> = coeffs.iter().map(|a| eval_poly(a, &at)).collect::<Result<_>>()?;
                let roots = poly_roots(&c)?;
                roots
                    .into_iter()
                    .map(|r| {
                        let at = at.with(Var::Z, r);
                        let dz = eval_poly(pz, &at)?;
                        if dz.norm() < 1e-300 {
                            return Err(Error::DivisionByZero);
                        }
                        Ok(LeafJet {
                            p: r,
                            ps: finite(-eval_poly(ps, &at)? / dz)?,
                            pt: finite(-eval_poly(pt, &at)? / dz)?,
                        })
                    })
                    .collect()
            }
        }
    }
}

/// `∏_{i<j} (p_i - p_j)²` from numeric slopes.
pub fn reduced_discriminant_at(leaves: &[LeafJet]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            let d = leaves[i].p - leaves[j].p;
            acc *= d * d;
        }
    }
    acc
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = c[0];
    let mut dp = Complex64::new(0.0, 0.0);
    for a in &c[1..] {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Complex roots of `c[0] z^n + ... + c[n]` by Aberth iteration with a
/// final Newton polish.
pub fn poly_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    if c.is_empty() || c[0].norm() == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let n = c.len() - 1;
    let lead = c[0];
    let c: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    if n == 1 {
        return Ok(alloc::vec![-c[1]]);
    }
    let radius = c[1..]
        .iter()
        .enumerate()
        .map(|(k, a)| libm::pow(a.norm(), 1.0 / (k + 1) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    sum += Complex64::new(1.0, 0.0) / (z[k] - z[j]);
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            *r -= step;
        }
    }
    for r in &z {
        finite(*r)?;
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

/// `α₁, α₂` and their first partial derivatives.
#[derive(Clone, Debug)]
pub struct FieldJet {
    coords: Coords,
    exprs: [Expr; 6],
}

/// Values of a [`FieldJet`]: `[α₁, α₂, ∂_s α₁, ∂_t α₁, ∂_s α₂, ∂_t α₂]`.
pub type JetValues = [Complex64; 6];

impl FieldJet {
    pub fn new(x: &VectorField) -> FieldJet {
        let (s, t) = (x.coords.first, x.coords.second);
        FieldJet {
            coords: x.coords,
            exprs: [x.a1.clone(), x.a2.clone(), x.a1.diff(s), x.a1.diff(t), x.a2.diff(s), x.a2.diff(t)],
        }
    }

    pub fn eval(&self, s: f64, t: f64) -> Result<JetValues> {
        let at = point(self.coords, s, t);
        let mut out = [Complex64::new(0.0, 0.0); 6];
        for (o, e) in out.iter_mut().zip(&self.exprs) {
            *o = finite(e.eval_complex(&at)?)?;
        }
        Ok(out)
    }
}

/// Determining expression of one leaf from numeric data.
pub fn leaf_residual(leaf: &LeafJet, j: &JetValues) -> Complex64 {
    let [a1, a2, a1s, a1t, a2s, a2t] = *j;
    -a1 * leaf.ps - a2 * leaf.pt + a2s + (a2t - a1s) * leaf.p - a1t * leaf.p * leaf.p
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    /// Largest `|E_i|` over all leaves and retained points.
    pub max: f64,
    /// Largest `|E_i|` per leaf.
    pub per_leaf: Vec<f64>,
    pub worst_point: (f64, f64),
    pub points_used: usize,
    pub points_excluded: usize,
}

/// Evaluate the determining expressions of `x` on `plan`.
pub fn residual(w: &Web, x: &VectorField, plan: &SamplePlan) -> Result<ResidualReport> {
    if w.coords() != x.coords {
        return Err(Error::CoordinateMismatch);
    }
    let nw = NumericWeb::new(w)?;
    let jet = FieldJet::new(x);
    let mut report = ResidualReport {
        max: 0.0,
        per_leaf: alloc::vec![0.0; nw.degree()],
        worst_point: (f64::NAN, f64::NAN),
        points_used: 0,
        points_excluded: 0,
    };
    for &(s, t) in &plan.points {
        let data = nw.leaves_at(s, t).and_then(|l| Ok((jet.eval(s, t)?, l)));
        let (j, leaves) = match data {
            Ok((j, l)) if reduced_discriminant_at(&l).norm() > DISCRIMINANT_FLOOR => (j, l),
            _ => {
                report.points_excluded += 1;
                continue;
            }
        };
        report.points_used += 1;
        for (k, leaf) in leaves.iter().enumerate() {
            let r = leaf_residual(leaf, &j).norm();
            if r > report.per_leaf[k] {
                report.per_leaf[k] = r;
            }
            if r > report.max || report.worst_point.0.is_nan() {
                report.max = report.max.max(r);
                report.worst_point = (s, t);
            }
        }
    }
    if report.points_used == 0 {
        return Err(Error::EmptyPlan);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub passed: bool,
    pub tolerance: f64,
    pub report: ResidualReport,
}

/// `passed` when the residual stays below `tol` on every retained point.
pub fn verify_certificate(w: &Web, x: &VectorField, plan: &SamplePlan, tol: f64) -> Result<Certificate> {
    let report = residual(w, x, plan)?;
    Ok(Certificate { passed: report.max < tol, tolerance: tol, report })
}

/// Invariance residual of first integrals: `X` maps the foliation `F = c`
/// to itself exactly when `dF ∧ d(XF) = 0`. Works for foliations with
/// vertical leaves, where slopes are undefined.
pub fn foliation_residual(
    foliations: &[Expr],
    coords: Coords,
    x: &VectorField,
    plan: &SamplePlan,
) -> Result<ResidualReport> {
    if x.coords != coords {
        return Err(Error::CoordinateMismatch);
    }
    if foliations.is_empty() {
        return Err(Error::EmptyWeb);
    }
    let (s, t) = (coords.first, coords.second);
    let wedges: Vec<Expr> = foliations
        .iter()
        .map(|f| {
            let xf = x.apply(f);
            f.diff(s).mul(xf.diff(t)).sub(f.diff(t).mul(xf.diff(s)))
        })
        .collect();
    let mut report = ResidualReport {
        max: 0.0,
        per_leaf: alloc::vec![0.0; wedges.len()],
        worst_point: (f64::NAN, f64::NAN),
        points_used: 0,
        points_excluded: 0,
    };
    for &(a, b) in &plan.points {
        let at = point(coords, a, b);
        let vals: Result<Vec<f64>> = wedges.iter().map(|e| Ok(finite(e.eval_complex(&at)?)?.norm())).collect();
        let Ok(vals) = vals else {
            report.points_excluded += 1;
            continue;
        };
        report.points_used += 1;
        for (k, r) in vals.into_iter().enumerate() {
            report.per_leaf[k] = report.per_leaf[k].max(r);
            if r > report.max || report.worst_point.0.is_nan() {
                report.max = report.max.max(r);
                report.worst_point = (a, b);
            }
        }
    }
    if report.points_used == 0 {
        return Err(Error::EmptyPlan);
    }
    Ok(report)
}

pub fn verify_foliation_certificate(
    foliations: &[Expr],
    coords: Coords,
    x: &VectorField,
    plan: &SamplePlan,
    tol: f64,
) -> Result<Certificate> {
    let report = foliation_residual(foliations, coords, x, plan)?;
    Ok(Certificate { passed: report.max < tol, tolerance: tol, report })
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close_scaled(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * 1.0f64.max(a.norm()).max(b.norm())
}
