//! Polynomial symmetries of rational-slope webs by exact linear algebra.
//!
//! Both components are written as generic polynomials of total degree at
//! most `N`. Each leaf's determining expression is multiplied by the lcm of
//! the denominators of its operator coefficients; every monomial coefficient
//! of the result gives one linear equation over ℚ.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::determining::{LeafRow, VectorField};
use crate::error::{Error, Result};
use crate::poly::{exact_nullspace, lcm, rank, MPoly, Monomial};
use crate::ratfunc::RatFunc;
use crate::var::Coords;
use crate::web::Web;
use crate::Rational;

/// Default cap on the number of unknown coefficients.
pub const DEFAULT_MAX_UNKNOWNS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_unknowns: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_unknowns: DEFAULT_MAX_UNKNOWNS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryBasis {
    pub fields: Vec<VectorField>,
    pub degree: u32,
    pub coords: Coords,
    /// Whether degrees `N` and `N + 1` give the same span.
    pub stabilized: bool,
    /// Monic cleared denominators; the equivalence with the original
    /// equations may fail on their zero sets.
    pub excluded: Vec<MPoly>,
    pub unknowns: usize,
    pub equations: usize,
}

impl SymmetryBasis {
    pub fn dimension(&self) -> usize {
        self.fields.len()
    }
}

/// Monomials in `(s, t)` of total degree at most `n`, ascending.
pub fn ansatz_monomials(coords: Coords, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=n {
        for j in 0..=deg {
            let i = deg - j;
            out.push(Monomial::default().with(coords.first, i as u16).with(coords.second, j as u16));
        }
    }
    out.sort();
    out
}

/// Number of unknowns of the degree-`n` ansatz.
pub fn unknown_count(n: u32) -> usize {
    let m = (n as usize + 1) * (n as usize + 2) / 2;
    2 * m
}

struct Raw {
    fields: Vec<VectorField>,
    excluded: Vec<MPoly>,
    unknowns: usize,
    equations: usize,
}

fn cleared_row(row: &LeafRow) -> (Vec<MPoly>, MPoly) {
    let l = row.coefficients().iter().fold(MPoly::one(), |acc, c| lcm(&acc, c.den()));
    let polys = row
        .coefficients()
        .iter()
        .map(|c| {
            let scaled = *c * &RatFunc::from_poly(l.clone());
            scaled.as_polynomial().expect("lcm clears every denominator").clone()
        })
        .collect();
    (polys, l)
}

fn solve_raw(w: &Web, n: u32, limits: &Limits) -> Result<Raw> {
    let slopes = w.require_rational_slopes()?;
    let coords = w.coords();
    let unknowns = unknown_count(n);
    if unknowns > limits.max_unknowns {
        return Err(Error::ResourceLimit { needed: unknowns, limit: limits.max_unknowns });
    }
    let monos = ansatz_monomials(coords, n);
    let half = monos.len();
    let (s, t) = (coords.first, coords.second);

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut excluded: Vec<MPoly> = Vec::new();
    for p in &slopes {
        let (c, l) = cleared_row(&LeafRow::new(p, coords));
        if !l.is_constant() && !excluded.contains(&l) {
            excluded.push(l);
        }
        // c = [α₁, α₂, ∂_s α₁, ∂_t α₁, ∂_s α₂, ∂_t α₂]
        let mut eqs: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        for (k, m) in monos.iter().enumerate() {
            let mono = MPoly::term(Rational::from_integer(1.into()), *m);
            let ds = mono.diff(s);
            let dt = mono.diff(t);
            let as_a1 = &(&(&c[0] * &mono) + &(&c[2] * &ds)) + &(&c[3] * &dt);
            let as_a2 = &(&(&c[1] * &mono) + &(&c[4] * &ds)) + &(&c[5] * &dt);
            for (col, poly) in [(k, as_a1), (half + k, as_a2)] {
                for (mon, q) in poly.terms() {
                    let row = eqs.entry(*mon).or_insert_with(|| alloc::vec![Rational::zero(); unknowns]);
                    row[col] += q;
                }
            }
        }
        rows.extend(eqs.into_values());
    }
    let equations = rows.len();
    let null = exact_nullspace(&rows, unknowns);
    let fields = null
        .iter()
        .map(|v| {
            let a1 = MPoly::from_terms(monos.iter().zip(&v[..half]).map(|(m, q)| (*m, q.clone())));
            let a2 = MPoly::from_terms(monos.iter().zip(&v[half..]).map(|(m, q)| (*m, q.clone())));
            VectorField::from_polys(&a1, &a2, coords)
        })
        .collect::<Vec<_>>();

    for f in &fields {
        let (a1, a2) = f.ratfuncs().expect("polynomial field");
        for (i, p) in slopes.iter().enumerate() {
            if !LeafRow::new(p, coords).apply(&a1, &a2, coords).is_zero() {
                return Err(Error::NotASymmetry { leaf: i });
            }
        }
    }
    Ok(Raw { fields, excluded, unknowns, equations })
}

/// All polynomial symmetries of total degree at most `n`.
pub fn solve_polynomial(w: &Web, n: u32) -> Result<SymmetryBasis> {
    solve_polynomial_with(w, n, &Limits::default())
}

pub fn solve_polynomial_with(w: &Web, n: u32, limits: &Limits) -> Result<SymmetryBasis> {
    let raw = solve_raw(w, n, limits)?;
    let next = solve_raw(w, n + 1, limits)?;
    Ok(SymmetryBasis {
        stabilized: raw.fields.len() == next.fields.len(),
        degree: n,
        coords: w.coords(),
        fields: raw.fields,
        excluded: raw.excluded,
        unknowns: raw.unknowns,
        equations: raw.equations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    /// Dimension of the polynomial algebra at `N = 0, 1, ...`.
    pub dimensions: Vec<usize>,
    /// First `N` with the same dimension at `N` and `N + 1`.
    pub stabilized_at: Option<u32>,
}

pub fn stabilization_scan(w: &Web, nmax: u32) -> Result<ScanReport> {
    stabilization_scan_with(w, nmax, &Limits::default())
}

pub fn stabilization_scan_with(w: &Web, nmax: u32, limits: &Limits) -> Result<ScanReport> {
    let dimensions =
        (0..=nmax).map(|n| solve_raw(w, n, limits).map(|r| r.fields.len())).collect::<Result<Vec<_>>>()?;
    let stabilized_at = dimensions.windows(2).position(|p| p[0] == p[1]).map(|n| n as u32);
    Ok(ScanReport { dimensions, stabilized_at })
}

/// Coefficient vectors of polynomial fields over a shared monomial index.
pub fn coefficient_matrix(fields: &[VectorField]) -> Option<(Vec<Vec<Rational>>, usize)> {
    let polys: Vec<(MPoly, MPoly)> = fields.iter().map(VectorField::polys).collect::<Option<_>>()?;
    let mut index: BTreeMap<(u8, Monomial), usize> = BTreeMap::new();
    for (a1, a2) in &polys {
        for (tag, p) in [(0u8, a1), (1u8, a2)] {
            for (m, _) in p.terms() {
                let next = index.len();
                index.entry((tag, *m)).or_insert(next);
            }
        }
    }
    let cols = index.len();
    let rows = polys
        .iter()
        .map(|(a1, a2)| {
            let mut row = alloc::vec![Rational::zero(); cols];
            for (tag, p) in [(0u8, a1), (1u8, a2)] {
                for (m, q) in p.terms() {
                    row[index[&(tag, *m)]] = q.clone();
                }
            }
            row
        })
        .collect();
    Some((rows, cols))
}

/// Exact span equality of two lists of polynomial fields.
pub fn same_span(a: &[VectorField], b: &[VectorField]) -> bool {
    let all: Vec<VectorField> = a.iter().chain(b).cloned().collect();
    let Some((rows, cols)) = coefficient_matrix(&all) else {
        return false;
    };
    let ra = rank(&rows[..a.len()], cols);
    let rb = rank(&rows[a.len()..], cols);
    let rab = rank(&rows, cols);
    ra == rab && rb == rab
}
