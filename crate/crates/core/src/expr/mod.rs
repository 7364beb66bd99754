//! Expression trees with exact rational constants.
//!
//! Every [`Expr`] built through the smart constructors ([`Expr::sum`],
//! [`Expr::product`], [`Expr::pow`], [`Expr::ln`], [`Expr::exp`]) is in
//! canonical form:
//!
//! * sums and products are flattened and their children sorted by the
//!   derived total order on nodes;
//! * like terms and like bases are merged, zero summands and unit factors
//!   are dropped, a product holds at most one constant and it comes first;
//! * `t^0 = 1`, `t^1 = t`, and integer powers of products distribute.
//!
//! Raw trees built from the public variants can be brought into this form
//! with [`Expr::canon`]. Canonical form is syntactic; [`Expr::simplify`]
//! additionally normalizes through rational functions.

mod eval;
mod parse;
mod render;

pub use eval::Point;
pub use parse::parse;
pub use render::render;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::MPoly;
use crate::ratfunc::RatFunc;
use crate::var::Var;
use crate::{BigInt, Rational};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    Const(Rational),
    Var(Var),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    /// Base raised to an exact rational exponent.
    Pow(Box<Expr>, Rational),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Rational::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(Rational::one())
    }

    pub fn integer(n: i64) -> Expr {
        Expr::Const(int(n))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::Const(Rational::new(n.into(), d.into()))
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Canonical sum of canonical children.
    pub fn sum(children: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        for c in children {
            match c {
                Expr::Sum(cs) => flat.extend(cs),
                other => flat.push(other),
            }
        }
        let mut constant = Rational::zero();
        let mut like: BTreeMap<Expr, Rational> = BTreeMap::new();
        for t in flat {
            match t {
                Expr::Const(c) => constant += c,
                other => {
                    let (c, rest) = split_coefficient(other);
                    *like.entry(rest).or_insert_with(Rational::zero) += c;
                }
            }
        }
        let mut out = Vec::new();
        for (rest, c) in like {
            if c.is_zero() {
                continue;
            }
            out.push(scale_term(c, rest));
        }
        if !constant.is_zero() {
            out.push(Expr::Const(constant));
        }
        out.sort();
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::Sum(out),
        }
    }

    /// Canonical product of canonical children.
    pub fn product(children: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        for c in children {
            match c {
                Expr::Prod(cs) => flat.extend(cs),
                other => flat.push(other),
            }
        }
        let mut coeff = Rational::one();
        let mut bases: BTreeMap<Expr, Rational> = BTreeMap::new();
        for f in flat {
            match f {
                Expr::Const(c) => coeff *= c,
                Expr::Pow(b, q) => *bases.entry(*b).or_insert_with(Rational::zero) += q,
                other => *bases.entry(other).or_insert_with(Rational::zero) += Rational::one(),
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        let mut factors = Vec::new();
        let mut respin = false;
        for (b, q) in bases {
            if q.is_zero() {
                continue;
            }
            let f = Expr::pow(b, q);
            match f {
                Expr::Const(c) => coeff *= c,
                Expr::Prod(_) => {
                    respin = true;
                    factors.push(f);
                }
                other => factors.push(other),
            }
        }
        if respin {
            factors.push(Expr::Const(coeff));
            return Expr::product(factors);
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        factors.sort();
        if factors.is_empty() {
            return Expr::Const(coeff);
        }
        if !coeff.is_one() {
            factors.insert(0, Expr::Const(coeff));
        }
        if factors.len() == 1 {
            return factors.pop().unwrap();
        }
        Expr::Prod(factors)
    }

    /// Canonical `base^q`.
    pub fn pow(base: Expr, q: Rational) -> Expr {
        if q.is_zero() {
            return Expr::one();
        }
        if q.is_one() {
            return base;
        }
        match base {
            Expr::Const(c) => const_pow(c, q),
            Expr::Pow(inner, r) if q.is_integer() => Expr::pow(*inner, r * q),
            Expr::Prod(fs) if q.is_integer() => {
                Expr::product(fs.into_iter().map(|f| Expr::pow(f, q.clone())).collect())
            }
            b => Expr::Pow(Box::new(b), q),
        }
    }

    pub fn powi(base: Expr, n: i64) -> Expr {
        Expr::pow(base, int(n))
    }

    pub fn ln(arg: Expr) -> Expr {
        if arg.is_one() {
            return Expr::zero();
        }
        Expr::Ln(Box::new(arg))
    }

    pub fn exp(arg: Expr) -> Expr {
        if arg.is_zero() {
            return Expr::one();
        }
        Expr::Exp(Box::new(arg))
    }

    pub fn neg(self) -> Expr {
        Expr::product(alloc::vec![Expr::integer(-1), self])
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::sum(alloc::vec![self, rhs])
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::sum(alloc::vec![self, rhs.neg()])
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::product(alloc::vec![self, rhs])
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::product(alloc::vec![self, Expr::powi(rhs, -1)])
    }

    pub fn scale(self, c: Rational) -> Expr {
        Expr::product(alloc::vec![Expr::Const(c), self])
    }

    /// Rebuild bottom-up through the smart constructors.
    pub fn canon(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Sum(cs) => Expr::sum(cs.iter().map(Expr::canon).collect()),
            Expr::Prod(cs) => Expr::product(cs.iter().map(Expr::canon).collect()),
            Expr::Pow(b, q) => Expr::pow(b.canon(), q.clone()),
            Expr::Ln(a) => Expr::ln(a.canon()),
            Expr::Exp(a) => Expr::exp(a.canon()),
        }
    }

    /// Partial derivative, canonical.
    pub fn diff(&self, v: Var) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(w) => {
                if *w == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Sum(cs) => Expr::sum(cs.iter().map(|c| c.diff(v)).collect()),
            Expr::Prod(cs) => {
                let mut terms = Vec::new();
                for i in 0..cs.len() {
                    let d = cs[i].diff(v);
                    if d.is_zero() {
                        continue;
                    }
                    let mut fs: Vec<Expr> = cs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, f)| f.clone())
                        .collect();
                    fs.push(d);
                    terms.push(Expr::product(fs));
                }
                Expr::sum(terms)
            }
            Expr::Pow(b, q) => {
                let d = b.diff(v);
                if d.is_zero() {
                    return Expr::zero();
                }
                Expr::product(alloc::vec![
                    Expr::Const(q.clone()),
                    Expr::pow((**b).clone(), q - Rational::one()),
                    d
                ])
            }
            Expr::Ln(a) => {
                let d = a.diff(v);
                if d.is_zero() {
                    return Expr::zero();
                }
                Expr::product(alloc::vec![d, Expr::powi((**a).clone(), -1)])
            }
            Expr::Exp(a) => {
                let d = a.diff(v);
                if d.is_zero() {
                    return Expr::zero();
                }
                Expr::product(alloc::vec![self.clone(), d])
            }
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Sum(cs) | Expr::Prod(cs) => cs.iter().any(|c| c.contains_var(v)),
            Expr::Pow(b, _) | Expr::Ln(b) | Expr::Exp(b) => b.contains_var(v),
        }
    }

    /// Variables occurring in the expression, ascending.
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(w) => out.push(*w),
            Expr::Sum(cs) | Expr::Prod(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
            Expr::Pow(b, _) | Expr::Ln(b) | Expr::Exp(b) => b.collect_vars(out),
        }
    }

    /// True when the tree has no `ln`, `exp` or non-integer power.
    pub fn is_rational(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Sum(cs) | Expr::Prod(cs) => cs.iter().all(Expr::is_rational),
            Expr::Pow(b, q) => q.is_integer() && b.is_rational(),
            Expr::Ln(_) | Expr::Exp(_) => false,
        }
    }

    /// Replace every occurrence of `v` by `by`, canonical.
    pub fn substitute(&self, v: Var, by: &Expr) -> Expr {
        self.substitute_all(&|w| (w == v).then(|| by.clone()))
    }

    /// Simultaneous substitution.
    pub fn substitute_all(&self, map: &dyn Fn(Var) -> Option<Expr>) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(w) => map(*w).unwrap_or_else(|| self.clone()),
            Expr::Sum(cs) => Expr::sum(cs.iter().map(|c| c.substitute_all(map)).collect()),
            Expr::Prod(cs) => Expr::product(cs.iter().map(|c| c.substitute_all(map)).collect()),
            Expr::Pow(b, q) => Expr::pow(b.substitute_all(map), q.clone()),
            Expr::Ln(a) => Expr::ln(a.substitute_all(map)),
            Expr::Exp(a) => Expr::exp(a.substitute_all(map)),
        }
    }

    /// Rational-function form in lowest terms, or `None` when the tree has
    /// a transcendental node or divides by zero.
    pub fn to_ratfunc(&self) -> Option<RatFunc> {
        if !self.is_rational() {
            return None;
        }
        self.to_ratfunc_with(&mut |_| None)
    }

    fn to_ratfunc_with(&self, atom: &mut dyn FnMut(&Expr) -> Option<Var>) -> Option<RatFunc> {
        match self {
            Expr::Const(c) => Some(RatFunc::constant(c.clone())),
            Expr::Var(v) => Some(RatFunc::var(*v)),
            Expr::Sum(cs) => {
                let mut acc = RatFunc::zero();
                for c in cs {
                    acc = &acc + &c.to_ratfunc_with(atom)?;
                }
                Some(acc)
            }
            Expr::Prod(cs) => {
                let mut acc = RatFunc::one();
                for c in cs {
                    acc = &acc * &c.to_ratfunc_with(atom)?;
                }
                Some(acc)
            }
            Expr::Pow(b, q) if q.is_integer() => {
                let n: i32 = num_traits::ToPrimitive::to_i32(q.numer())?;
                b.to_ratfunc_with(atom)?.pow(n)
            }
            other => atom(other).map(RatFunc::var),
        }
    }

    /// Syntactic canonicalization followed by rational-function
    /// normalization. Transcendental subterms (`ln`, `exp`, fractional
    /// powers) are treated as independent indeterminates, so cancellations
    /// such as `e^t (1 - u) / (u e^t)` are found; the result is reassembled
    /// as an expression.
    pub fn simplify(&self) -> Expr {
        let canon = self.canon();
        let mut atoms: Vec<Expr> = Vec::new();
        let mut overflow = false;
        let r = canon.to_ratfunc_with(&mut |e| {
            let e = simplify_inside(e);
            if let Some(i) = atoms.iter().position(|a| *a == e) {
                return Var::atom(i);
            }
            let slot = Var::atom(atoms.len());
            if slot.is_none() {
                overflow = true;
            } else {
                atoms.push(e);
            }
            slot
        });
        match r {
            Some(r) if !overflow => {
                let back = Expr::from_ratfunc(&r);
                back.substitute_all(&|v| {
                    if v.is_named() {
                        None
                    } else {
                        atoms.get(v.index() - crate::var::NAMED_VARS).cloned()
                    }
                })
            }
            _ => canon,
        }
    }

    /// `simplify`, then a rational-function view when one exists.
    pub fn simplify_to_ratfunc(&self) -> Option<RatFunc> {
        self.simplify().to_ratfunc()
    }

    /// Exact zero test through [`Expr::simplify`].
    pub fn simplifies_to_zero(&self) -> bool {
        self.simplify().is_zero()
    }

    pub fn from_poly(p: &MPoly) -> Expr {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let mut fs = alloc::vec![Expr::Const(c.clone())];
            for (v, e) in m.vars() {
                fs.push(Expr::powi(Expr::Var(v), e as i64));
            }
            terms.push(Expr::product(fs));
        }
        Expr::sum(terms)
    }

    pub fn from_ratfunc(r: &RatFunc) -> Expr {
        let n = Expr::from_poly(r.num());
        if r.is_polynomial() {
            return n;
        }
        let d = Expr::from_poly(r.den());
        Expr::product(alloc::vec![n, Expr::powi(d, -1)])
    }

    /// Polynomial view, if the expression is a polynomial.
    pub fn to_poly(&self) -> Option<MPoly> {
        let r = self.to_ratfunc()?;
        r.as_polynomial().cloned()
    }
}

/// Canonicalize arguments of a transcendental node before it becomes an atom.
fn simplify_inside(e: &Expr) -> Expr {
    match e {
        Expr::Ln(a) => Expr::ln(a.simplify()),
        Expr::Exp(a) => Expr::exp(a.simplify()),
        Expr::Pow(b, q) => Expr::pow(b.simplify(), q.clone()),
        other => other.clone(),
    }
}

fn split_coefficient(e: Expr) -> (Rational, Expr) {
    match e {
        Expr::Prod(mut fs) => {
            if let Some(Expr::Const(_)) = fs.first() {
                let Expr::Const(c) = fs.remove(0) else { unreachable!() };
                let rest = if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Prod(fs) };
                (c, rest)
            } else {
                (Rational::one(), Expr::Prod(fs))
            }
        }
        other => (Rational::one(), other),
    }
}

fn scale_term(c: Rational, rest: Expr) -> Expr {
    if c.is_one() {
        return rest;
    }
    let mut fs = alloc::vec![Expr::Const(c)];
    match rest {
        Expr::Prod(r) => fs.extend(r),
        other => fs.push(other),
    }
    Expr::Prod(fs)
}

fn const_pow(c: Rational, q: Rational) -> Expr {
    if q.is_integer() {
        if c.is_zero() && q.is_negative() {
            return Expr::Pow(Box::new(Expr::Const(c)), q);
        }
        let n = num_traits::ToPrimitive::to_i32(q.numer()).expect("exponent fits in i32");
        return Expr::Const(num_traits::Pow::pow(&c, n));
    }
    if c.is_zero() {
        return if q.is_positive() { Expr::zero() } else { Expr::Pow(Box::new(Expr::Const(c)), q) };
    }
    if c.is_one() {
        return Expr::one();
    }
    if c.is_positive() {
        // exact k-th roots of perfect powers
        if let Some(k) = num_traits::ToPrimitive::to_u32(q.denom()) {
            let rn = num_integer::Roots::nth_root(c.numer(), k);
            let rd = num_integer::Roots::nth_root(c.denom(), k);
            if num_traits::Pow::pow(&rn, k) == *c.numer() && num_traits::Pow::pow(&rd, k) == *c.denom() {
                return const_pow(Rational::new(rn, rd), Rational::from_integer(q.numer().clone()));
            }
        }
    }
    Expr::Pow(Box::new(Expr::Const(c)), q)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Expr {
        Expr::Var(v)
    }
}

impl From<&MPoly> for Expr {
    fn from(p: &MPoly) -> Expr {
        Expr::from_poly(p)
    }
}

impl From<&RatFunc> for Expr {
    fn from(r: &RatFunc) -> Expr {
        Expr::from_ratfunc(r)
    }
}

impl core::str::FromStr for Expr {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Expr, crate::Error> {
        parse(s)
    }
}
