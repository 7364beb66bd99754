//! Multivariate gcd by recursive primitive remainder sequences.
//!
//! ℚ[x_1..x_n] is treated as R[v] with R = ℚ[other variables], a UFD, and
//! the gcd is content gcd times the primitive part of the last nonzero
//! pseudo-remainder. Results are monic.

use super::{divides, MPoly};
use crate::var::Var;

pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    gcd_rec(a, b).monic()
}

pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    let q = divides(&g, a).expect("gcd divides its argument");
    (&q * b).monic()
}

fn main_var(a: &MPoly, b: &MPoly) -> Option<Var> {
    let mut vs = a.variables();
    vs.extend(b.variables());
    vs.into_iter().max()
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let v = main_var(a, b).expect("non-constant polynomials have variables");
    let (da, db) = (a.degree(v), b.degree(v));
    if da == 0 {
        return gcd_rec(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_rec(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = divides(&ca, a).expect("content divides");
    let pb = divides(&cb, b).expect("content divides");
    let c = gcd_rec(&ca, &cb);

    let (mut f, mut g) = if da >= db { (pa, pb) } else { (pb, pa) };
    let last = loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            break g;
        }
        if r.degree(v) == 0 {
            break MPoly::one();
        }
        f = g;
        g = primitive_in(&r, v);
    };
    (&c * &primitive_in(&last, v)).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &MPoly, v: Var) -> MPoly {
    let mut acc = MPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_in(p: &MPoly, v: Var) -> MPoly {
    let c = content_in(p, v);
    divides(&c, p).expect("content divides").monic()
}

/// Pseudo-remainder of `f` by `g` in `v`.
pub(crate) fn pseudo_rem(f: &MPoly, g: &MPoly, v: Var) -> MPoly {
    let dg = g.degree(v);
    let lg = g.lc_in(v);
    let mut r = f.clone();
    while !r.is_zero() && r.degree(v) >= dg {
        let dr = r.degree(v);
        let lr = r.lc_in(v);
        let shift = super::Monomial::ONE.with(v, dr - dg);
        r = &(&lg * &r) - &(&lr * &g.mul_monomial(&shift));
    }
    r
}
