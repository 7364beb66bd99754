//! Determining equations of web symmetries and their normalized form.
//!
//! For a leaf with slope `p` and a field `X = α₁∂_s + α₂∂_t` the
//! determining expression is
//! `-α₁ ∂_s p - α₂ ∂_t p + ∂_s α₂ + (∂_t α₂ - ∂_s α₁) p - ∂_t α₁ p²`.
//! Writing `M` for the slope-gradient rows, `V` for the Vandermonde rows
//! `(1, p, p²)` and `w = (-∂_s α₂, ∂_s α₁ - ∂_t α₂, ∂_t α₁)`, the system is
//! `M α + V w = 0`, so with `G = V₁₃⁻¹ M₁₃` the first three leaves read
//! `w + G α = 0` and the remaining leaves give `C α = 0` with
//! `C = -M₄ + V₄ G`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::poly::MPoly;
use crate::ratfunc::RatFunc;
use crate::var::{Coords, Var};
use crate::web::Web;

/// `X = α₁ ∂_s + α₂ ∂_t` in the coordinates `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorField {
    pub a1: Expr,
    pub a2: Expr,
    pub coords: Coords,
}

impl VectorField {
    pub fn new(a1: Expr, a2: Expr, coords: Coords) -> Result<VectorField> {
        for v in a1.variables().into_iter().chain(a2.variables()) {
            if !coords.contains(v) {
                return Err(Error::ForeignVariable(v));
            }
        }
        Ok(VectorField { a1: a1.canon(), a2: a2.canon(), coords })
    }

    pub fn parse(a1: &str, a2: &str, coords: Coords) -> Result<VectorField> {
        VectorField::new(parse(a1)?, parse(a2)?, coords)
    }

    pub fn from_polys(a1: &MPoly, a2: &MPoly, coords: Coords) -> VectorField {
        VectorField { a1: Expr::from_poly(a1), a2: Expr::from_poly(a2), coords }
    }

    pub fn from_ratfuncs(a1: &RatFunc, a2: &RatFunc, coords: Coords) -> VectorField {
        VectorField { a1: Expr::from_ratfunc(a1), a2: Expr::from_ratfunc(a2), coords }
    }

    pub fn zero(coords: Coords) -> VectorField {
        VectorField { a1: Expr::zero(), a2: Expr::zero(), coords }
    }

    pub fn is_zero(&self) -> bool {
        self.a1.simplifies_to_zero() && self.a2.simplifies_to_zero()
    }

    pub fn ratfuncs(&self) -> Option<(RatFunc, RatFunc)> {
        Some((self.a1.to_ratfunc()?, self.a2.to_ratfunc()?))
    }

    pub fn polys(&self) -> Option<(MPoly, MPoly)> {
        Some((self.a1.to_poly()?, self.a2.to_poly()?))
    }

    /// `X(f) = α₁ ∂_s f + α₂ ∂_t f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let (s, t) = (self.coords.first, self.coords.second);
        self.a1.clone().mul(f.diff(s)).add(self.a2.clone().mul(f.diff(t)))
    }

    pub fn apply_ratfunc(&self, f: &RatFunc) -> Option<RatFunc> {
        let (a1, a2) = self.ratfuncs()?;
        Some(&(&a1 * &f.diff(self.coords.first)) + &(&a2 * &f.diff(self.coords.second)))
    }

    pub fn scale(&self, c: Expr) -> VectorField {
        VectorField {
            a1: c.clone().mul(self.a1.clone()),
            a2: c.mul(self.a2.clone()),
            coords: self.coords,
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        if self.coords != other.coords {
            return Err(Error::CoordinateMismatch);
        }
        Ok(VectorField {
            a1: self.a1.clone().add(other.a1.clone()),
            a2: self.a2.clone().add(other.a2.clone()),
            coords: self.coords,
        })
    }

    pub fn simplify(&self) -> VectorField {
        VectorField { a1: self.a1.simplify(), a2: self.a2.simplify(), coords: self.coords }
    }

    /// Render as `a1*∂_s + a2*∂_t`, omitting zero components.
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (c, v) in [(&self.a1, self.coords.first), (&self.a2, self.coords.second)] {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(format!("d/d{v}"));
            } else {
                parts.push(format!("({c})*d/d{v}"));
            }
        }
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join(" + ")
        }
    }
}

impl core::fmt::Display for VectorField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.display())
    }
}

/// First prolongation coefficient `η = ∂_s α₂ + z(∂_t α₂ - ∂_s α₁) - z² ∂_t α₁`.
pub fn prolong(x: &VectorField) -> Expr {
    let (s, t) = (x.coords.first, x.coords.second);
    let z = Expr::var(Var::Z);
    Expr::sum(alloc::vec![
        x.a2.diff(s),
        z.clone().mul(x.a2.diff(t).sub(x.a1.diff(s))),
        Expr::powi(z, 2).mul(x.a1.diff(t)).neg(),
    ])
}

fn leaf_expr(p: &Expr, x: &VectorField) -> Expr {
    let (s, t) = (x.coords.first, x.coords.second);
    Expr::sum(alloc::vec![
        x.a1.clone().mul(p.diff(s)).neg(),
        x.a2.clone().mul(p.diff(t)).neg(),
        x.a2.diff(s),
        x.a2.diff(t).sub(x.a1.diff(s)).mul(p.clone()),
        x.a1.diff(t).mul(Expr::powi(p.clone(), 2)).neg(),
    ])
}

/// Determining expression of leaf `i` (0-based) for a concrete field,
/// simplified. Zero means the field is a symmetry of that leaf.
pub fn determining_equation(w: &Web, i: usize, x: &VectorField) -> Result<Expr> {
    if w.coords() != x.coords {
        return Err(Error::CoordinateMismatch);
    }
    let slopes = w.slopes().ok_or(Error::NoClosedFormSlopes)?;
    let slope = slopes.get(i).ok_or(Error::LeafIndex(i))?;
    if let (Some(p), Some((a1, a2))) = (&slope.rational, x.ratfuncs()) {
        let row = LeafRow::new(p, x.coords);
        return Ok(Expr::from_ratfunc(&row.apply(&a1, &a2, x.coords)));
    }
    Ok(leaf_expr(&slope.expr, x).simplify())
}

/// Every leaf's determining expression.
pub fn determining_system(w: &Web, x: &VectorField) -> Result<Vec<Expr>> {
    (0..w.degree()).map(|i| determining_equation(w, i, x)).collect()
}

/// `true` when every determining expression simplifies to zero. A `false`
/// for a transcendental field only means the simplifier found no proof.
pub fn is_exact_symmetry(w: &Web, x: &VectorField) -> Result<bool> {
    Ok(determining_system(w, x)?.iter().all(Expr::is_zero))
}

/// Linear differential operator of one leaf: coefficients of
/// `α₁, α₂, ∂_s α₁, ∂_t α₁, ∂_s α₂, ∂_t α₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafRow {
    pub a1: RatFunc,
    pub a2: RatFunc,
    pub a1_s: RatFunc,
    pub a1_t: RatFunc,
    pub a2_s: RatFunc,
    pub a2_t: RatFunc,
}

impl LeafRow {
    pub fn new(p: &RatFunc, coords: Coords) -> LeafRow {
        LeafRow {
            a1: -p.diff(coords.first),
            a2: -p.diff(coords.second),
            a1_s: -p.clone(),
            a1_t: -(p * p),
            a2_s: RatFunc::one(),
            a2_t: p.clone(),
        }
    }

    pub fn apply(&self, a1: &RatFunc, a2: &RatFunc, coords: Coords) -> RatFunc {
        let (s, t) = (coords.first, coords.second);
        let terms = [
            &self.a1 * a1,
            &self.a2 * a2,
            &self.a1_s * &a1.diff(s),
            &self.a1_t * &a1.diff(t),
            &self.a2_s * &a2.diff(s),
            &self.a2_t * &a2.diff(t),
        ];
        terms.iter().fold(RatFunc::zero(), |acc, x| &acc + x)
    }

    pub fn coefficients(&self) -> [&RatFunc; 6] {
        [&self.a1, &self.a2, &self.a1_s, &self.a1_t, &self.a2_s, &self.a2_t]
    }
}

type Mat3 = [[RatFunc; 3]; 3];

fn vandermonde_row(p: &RatFunc) -> [RatFunc; 3] {
    [RatFunc::one(), p.clone(), p * p]
}

fn gradient_row(p: &RatFunc, coords: Coords) -> [RatFunc; 2] {
    [p.diff(coords.first), p.diff(coords.second)]
}

fn adjugate_inverse(m: &Mat3) -> Result<Mat3> {
    let c = |r: usize, k: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
        &(&m[r1][k1] * &m[r2][k2]) - &(&m[r1][k2] * &m[r2][k1])
    };
    let det = &(&(&m[0][0] * &c(0, 0)) + &(&m[0][1] * &c(0, 1))) + &(&m[0][2] * &c(0, 2));
    let inv_det = det.recip().ok_or(Error::SingularVandermonde)?;
    let mut out: Mat3 = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // inverse = adj / det with adj[i][j] = cofactor[j][i]
            *cell = &c(j, i) * &inv_det;
        }
    }
    Ok(out)
}

fn mat_vec_rows(a: &Mat3, m: &[[RatFunc; 2]; 3]) -> [[RatFunc; 2]; 3] {
    let mut out: [[RatFunc; 2]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..2 {
            let mut acc = RatFunc::zero();
            for k in 0..3 {
                acc = &acc + &(&a[i][k] * &m[k][j]);
            }
            out[i][j] = acc;
        }
    }
    out
}

/// The normalized system: three differential rows `w + G α = 0` and
/// `d - 3` algebraic compatibility rows `C α = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedSystem {
    pub degree: usize,
    pub coords: Coords,
    /// Rows of `G`, in the order of `(-∂_s α₂, ∂_s α₁ - ∂_t α₂, ∂_t α₁)`.
    pub g_rows: [[RatFunc; 2]; 3],
    /// Rows of `C`, one per leaf after the third.
    pub compat: Vec<[RatFunc; 2]>,
    pub vandermonde_inverse: Mat3,
    slopes: Vec<RatFunc>,
}

/// Build the normalized system from the first three slopes in input order.
pub fn normalized_system(w: &Web) -> Result<NormalizedSystem> {
    let d = w.degree();
    if d < 3 {
        return Err(Error::DegreeTooLow { need: 3, got: d });
    }
    let slopes = w.require_rational_slopes()?;
    let coords = w.coords();
    let v: Mat3 = [vandermonde_row(&slopes[0]), vandermonde_row(&slopes[1]), vandermonde_row(&slopes[2])];
    let m = [gradient_row(&slopes[0], coords), gradient_row(&slopes[1], coords), gradient_row(&slopes[2], coords)];
    let inv = adjugate_inverse(&v)?;
    let g = mat_vec_rows(&inv, &m);
    let compat = slopes[3..]
        .iter()
        .map(|p| {
            let vr = vandermonde_row(p);
            let mr = gradient_row(p, coords);
            let mut row: [RatFunc; 2] = Default::default();
            for j in 0..2 {
                let mut acc = -mr[j].clone();
                for k in 0..3 {
                    acc = &acc + &(&vr[k] * &g[k][j]);
                }
                row[j] = acc;
            }
            row
        })
        .collect();
    Ok(NormalizedSystem { degree: d, coords, g_rows: g, compat, vandermonde_inverse: inv, slopes })
}

impl NormalizedSystem {
    pub fn slopes(&self) -> &[RatFunc] {
        &self.slopes
    }

    /// `V₁₃ G = M₁₃` and `V₁₃ V₁₃⁻¹ = I`.
    pub fn reconstruction_holds(&self) -> bool {
        let v: Vec<[RatFunc; 3]> = self.slopes[..3].iter().map(vandermonde_row).collect();
        for (i, vi) in v.iter().enumerate() {
            let m = gradient_row(&self.slopes[i], self.coords);
            for j in 0..2 {
                let mut acc = RatFunc::zero();
                for k in 0..3 {
                    acc = &acc + &(&vi[k] * &self.g_rows[k][j]);
                }
                if acc != m[j] {
                    return false;
                }
            }
            for j in 0..3 {
                let mut acc = RatFunc::zero();
                for k in 0..3 {
                    acc = &acc + &(&vi[k] * &self.vandermonde_inverse[k][j]);
                }
                let want = if i == j { RatFunc::one() } else { RatFunc::zero() };
                if acc != want {
                    return false;
                }
            }
        }
        true
    }

    /// `C = -M₄ + V₄ (V₁₃⁻¹ M₁₃)`, recomputed from the stored inverse.
    pub fn compatibility_holds(&self) -> bool {
        let m13 = [
            gradient_row(&self.slopes[0], self.coords),
            gradient_row(&self.slopes[1], self.coords),
            gradient_row(&self.slopes[2], self.coords),
        ];
        if self.compat.len() != self.degree - 3 {
            return false;
        }
        for (row, p) in self.compat.iter().zip(&self.slopes[3..]) {
            let vr = vandermonde_row(p);
            // V₄ V₁₃⁻¹ first, then times M₁₃
            let mut vinv = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
            for (k, slot) in vinv.iter_mut().enumerate() {
                for l in 0..3 {
                    *slot = &*slot + &(&vr[l] * &self.vandermonde_inverse[l][k]);
                }
            }
            let mr = gradient_row(p, self.coords);
            for j in 0..2 {
                let mut acc = -mr[j].clone();
                for k in 0..3 {
                    acc = &acc + &(&vinv[k] * &m13[k][j]);
                }
                if acc != row[j] {
                    return false;
                }
            }
        }
        true
    }

    /// `C α` for a rational field.
    pub fn apply_compatibility(&self, x: &VectorField) -> Option<Vec<RatFunc>> {
        let (a1, a2) = x.ratfuncs()?;
        Some(self.compat.iter().map(|r| &(&r[0] * &a1) + &(&r[1] * &a2)).collect())
    }

    /// Index of differential row `k` (0, 1, 2): `d`, `d - 1`, `d - 2`.
    pub fn g_index(&self, k: usize) -> usize {
        self.degree - k
    }

    /// Compatibility row `k` belongs to leaf `k + 4` and has index `d - 3 - k`.
    pub fn compat_index(&self, k: usize) -> usize {
        self.degree - 3 - k
    }
}

/// Closed-form Lagrange coefficients of the first three differential rows.
///
/// Row 1 is `Σ_i p_j p_k ∂p_i / ((p_j - p_i)(p_k - p_i))`, row 2 is
/// `-Σ_i (p_j + p_k) ∂p_i / (...)` and row 3 is `Σ_i ∂p_i / (...)`, with
/// `∂ = ∂_s` for the `g` column and `∂_t` for the `h` column.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitCoefficients {
    pub g: [RatFunc; 3],
    pub h: [RatFunc; 3],
}

pub fn explicit_g_coefficients(w: &Web) -> Result<ExplicitCoefficients> {
    let d = w.degree();
    if d < 3 {
        return Err(Error::DegreeTooLow { need: 3, got: d });
    }
    let slopes = w.require_rational_slopes()?;
    let coords = w.coords();
    let p = &slopes[..3];
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i] == p[j] {
                return Err(Error::NotInGeneralPosition(i, j));
            }
        }
    }
    let column = |v: Var| -> [RatFunc; 3] {
        let mut out: [RatFunc; 3] = Default::default();
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let denom = &(&p[j] - &p[i]) * &(&p[k] - &p[i]);
            let dp = p[i].diff(v).checked_div(&denom).expect("distinct slopes");
            out[0] = &out[0] + &(&(&p[j] * &p[k]) * &dp);
            out[1] = &out[1] - &(&(&p[j] + &p[k]) * &dp);
            out[2] = &out[2] + &dp;
        }
        out
    };
    Ok(ExplicitCoefficients { g: column(coords.first), h: column(coords.second) })
}
