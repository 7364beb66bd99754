//! Rational functions: quotients of [`MPoly`] in lowest terms.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::poly::{divides, gcd, MPoly};
use crate::var::Var;
use crate::Rational;

/// `num / den` with `gcd(num, den) = 1` and `den` monic under graded-lex.
/// Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    /// Normalizes; `None` when `den` is zero.
    pub fn new(num: MPoly, den: MPoly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::zero());
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (divides(&g, &num).expect("gcd divides"), divides(&g, &den).expect("gcd divides"))
        };
        let lc = den.leading_coefficient();
        if lc != Rational::from_integer(1.into()) {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Some(RatFunc { num, den })
    }

    pub fn zero() -> RatFunc {
        RatFunc { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        RatFunc { num: p, den: MPoly::one() }
    }

    pub fn constant(c: Rational) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn integer(n: i64) -> RatFunc {
        RatFunc::from_poly(MPoly::integer(n))
    }

    pub fn var(v: Var) -> RatFunc {
        RatFunc::from_poly(MPoly::var(v))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly, MPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Option<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, n: i32) -> Option<RatFunc> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs();
        Some(RatFunc { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Quotient rule.
    pub fn diff(&self, v: Var) -> RatFunc {
        if self.is_polynomial() {
            return RatFunc::from_poly(self.num.diff(v));
        }
        let n = &(&self.num.diff(v) * &self.den) - &(&self.num * &self.den.diff(v));
        RatFunc::new(n, self.den.pow(2)).expect("nonzero denominator")
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn variables(&self) -> alloc::vec::Vec<Var> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs.sort();
        vs.dedup();
        vs
    }

    /// Exact value, `None` at a pole or with an unbound variable.
    pub fn eval(&self, point: &dyn Fn(Var) -> Option<Rational>) -> Option<Rational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }

    pub fn eval_complex(&self, point: &dyn Fn(Var) -> Option<Complex64>) -> Option<Complex64> {
        let d = self.den.eval_complex(point)?;
        if d.norm() == 0.0 {
            return None;
        }
        Some(self.num.eval_complex(point)? / d)
    }

    pub fn substitute(&self, v: Var, by: &RatFunc) -> Option<RatFunc> {
        let sub = |p: &MPoly| -> RatFunc {
            // Σ c_k v^k with v = n/d  ->  Σ c_k n^k d^{D-k} / d^D
            let cs = p.coeffs_in(v);
            let deg = cs.len() - 1;
            let mut acc = MPoly::zero();
            for (k, c) in cs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc += &(&(c * &by.num.pow(k as u32)) * &by.den.pow((deg - k) as u32));
            }
            RatFunc::new(acc, by.den.pow(deg as u32)).expect("nonzero denominator")
        };
        sub(&self.num).checked_div(&sub(&self.den))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Option<RatFunc> {
        if rhs.is_zero() {
            return None;
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Default for RatFunc {
    fn default() -> RatFunc {
        RatFunc::zero()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use alloc::string::ToString;
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let ds = self.den.to_string();
        if self.den.len() > 1 || ds.contains('*') || ds.contains('/') {
            write!(f, "/({ds})")
        } else {
            write!(f, "/{ds}")
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(n, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; see [`RatFunc::checked_div`].
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}
