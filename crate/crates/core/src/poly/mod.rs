//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`] under the
//! graded-lexicographic order, so iteration order, leading terms and
//! rendering are deterministic.

mod gcd;
mod linalg;
mod resultant;

pub use gcd::{gcd, lcm};
pub use linalg::{exact_nullspace, rank};
pub use resultant::{bareiss_determinant, sylvester_matrix, sylvester_resultant, z_discriminant};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::{self, Write as _};
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::var::{Var, MAX_VARS};
use crate::{BigInt, Rational};

/// Exponent vector over all indeterminate slots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(v: Var) -> Monomial {
        Monomial::ONE.with(v, 1)
    }

    pub fn with(mut self, v: Var, e: u16) -> Monomial {
        self.0[v.index()] = e;
        self
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o += *e;
        }
        out
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o = o.checked_sub(*e)?;
        }
        Some(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| (Var::from_index(i).unwrap(), *e))
    }
}

impl Ord for Monomial {
    /// Graded lex: total degree first, then exponents from the largest
    /// variable down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial over ℚ. The zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> MPoly {
        MPoly::term(c, Monomial::ONE)
    }

    pub fn integer(n: i64) -> MPoly {
        MPoly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> MPoly {
        MPoly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> MPoly {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Variables with a nonzero exponent in some term, ascending.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = [false; MAX_VARS];
        for m in self.terms.keys() {
            for (v, _) in m.vars() {
                seen[v.index()] = true;
            }
        }
        (0..MAX_VARS).filter(|&i| seen[i]).map(|i| Var::from_index(i).unwrap()).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn diff(&self, v: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(m.with(v, e - 1), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let deg = self.degree(v) as usize;
        let mut out = alloc::vec![MPoly::zero(); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].add_term(m.with(v, 0), c.clone());
        }
        out
    }

    /// Inverse of [`MPoly::coeffs_in`].
    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = Monomial::ONE.with(v, k as u16);
            for (m, q) in c.terms() {
                out.add_term(m.mul(&vk), q.clone());
            }
        }
        out
    }

    /// Leading coefficient as a polynomial in `v`.
    pub fn lc_in(&self, v: Var) -> MPoly {
        self.coeffs_in(v).pop().unwrap_or_default()
    }

    /// Replace `v` by the polynomial `q`.
    pub fn substitute(&self, v: Var, q: &MPoly) -> MPoly {
        let coeffs = self.coeffs_in(v);
        // Horner
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Exact evaluation; every variable present must be bound.
    pub fn eval(&self, point: &dyn Fn(Var) -> Option<Rational>) -> Option<Rational> {
        let mut vals: [Option<Rational>; MAX_VARS] = Default::default();
        for v in self.variables() {
            vals[v.index()] = Some(point(v)?);
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                t *= num_traits::pow(vals[v.index()].clone().unwrap(), e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    pub fn eval_complex(&self, point: &dyn Fn(Var) -> Option<Complex64>) -> Option<Complex64> {
        let mut vals = [Complex64::new(0.0, 0.0); MAX_VARS];
        for v in self.variables() {
            vals[v.index()] = point(v)?;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational_to_f64(c), 0.0);
            for (v, e) in m.vars() {
                t *= vals[v.index()].powi(e as i32);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Divide by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num, den)
    }

    /// Primitive integer polynomial with positive leading coefficient.
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let mut c = self.content();
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Map every coefficient through `f`, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Rename variables; `f` must be injective on the variables present.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut nm = Monomial::ONE;
            for (v, e) in m.vars() {
                let w = f(v);
                nm.0[w.index()] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }
}

/// Exact division `f / g`, or `None` when `g` does not divide `f`.
///
/// Multivariate division by a single divisor under graded-lex order: the
/// quotient exists iff every intermediate remainder has its leading
/// monomial divisible by that of `g`.
pub fn divides(g: &MPoly, f: &MPoly) -> Option<MPoly> {
    let (lm, lc) = g.leading_term()?;
    let (lm, lc) = (*lm, lc.clone());
    let mut r = f.clone();
    let mut q = MPoly::zero();
    while let Some((rm, rc)) = r.leading_term() {
        let m = rm.div(&lm)?;
        let c = rc / &lc;
        q.add_term(m, c.clone());
        let sub = g.mul_monomial(&m).scale(&c);
        r = &r - &sub;
    }
    Some(q)
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // big values: shift down before converting
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 900).max(0);
    let shift_d = (db - 900).max(0);
    let n = (q.numer() >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    n / d * libm::exp2((shift_n - shift_d) as f64)
}

pub(crate) fn write_rational(out: &mut String, q: &Rational) {
    if q.is_integer() {
        let _ = write!(out, "{}", q.numer());
    } else {
        let _ = write!(out, "{}/{}", q.numer(), q.denom());
    }
}

impl fmt::Display for MPoly {
    /// Descending graded-lex order, parseable by the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (v, e) in m.vars() {
                if e == 1 {
                    factors.push(alloc::format!("{v}"));
                } else {
                    factors.push(alloc::format!("{v}^{e}"));
                }
            }
            if factors.is_empty() {
                write_rational(&mut out, &a);
            } else {
                if !a.is_one() {
                    write_rational(&mut out, &a);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        f.write_str(&out)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}
