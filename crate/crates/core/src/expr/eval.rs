//! Complex double-precision evaluation with principal branches.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::Expr;
use crate::error::{Error, Result};
use crate::poly::rational_to_f64;
use crate::var::{Var, MAX_VARS};

/// Assignment of complex values to variables.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    vals: [Option<Complex64>; MAX_VARS],
}

impl Point {
    pub fn new() -> Point {
        Point::default()
    }

    pub fn with(mut self, v: Var, c: Complex64) -> Point {
        self.vals[v.index()] = Some(c);
        self
    }

    pub fn with_real(self, v: Var, r: f64) -> Point {
        self.with(v, Complex64::new(r, 0.0))
    }

    pub fn set(&mut self, v: Var, c: Complex64) {
        self.vals[v.index()] = Some(c);
    }

    pub fn get(&self, v: Var) -> Option<Complex64> {
        self.vals[v.index()]
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re < 0.0
}

impl Expr {
    /// Evaluate at `point`. `ln t` and `t^q` for non-integer `q` use the
    /// principal branch and reject bases on the closed negative real axis.
    pub fn eval_complex(&self, point: &Point) -> Result<Complex64> {
        let z = self.eval_inner(point)?;
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn eval_inner(&self, point: &Point) -> Result<Complex64> {
        Ok(match self {
            Expr::Const(c) => Complex64::new(rational_to_f64(c), 0.0),
            Expr::Var(v) => point.get(*v).ok_or(Error::UnboundVariable(*v))?,
            Expr::Sum(cs) => {
                let mut acc = Complex64::zero();
                for c in cs {
                    acc += c.eval_inner(point)?;
                }
                acc
            }
            Expr::Prod(cs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for c in cs {
                    acc *= c.eval_inner(point)?;
                }
                acc
            }
            Expr::Pow(b, q) => {
                let base = b.eval_inner(point)?;
                if q.is_integer() {
                    let n = num_traits::ToPrimitive::to_i32(q.numer()).ok_or(Error::NonFinite)?;
                    if base.is_zero() && n < 0 {
                        return Err(Error::DivisionByZero);
                    }
                    base.powi(n)
                } else if base.is_zero() {
                    if q.is_positive() {
                        Complex64::zero()
                    } else {
                        return Err(Error::DivisionByZero);
                    }
                } else if on_cut(base) {
                    return Err(Error::BranchCut);
                } else {
                    (base.ln() * rational_to_f64(q)).exp()
                }
            }
            Expr::Ln(a) => {
                let t = a.eval_inner(point)?;
                if t.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                if on_cut(t) {
                    return Err(Error::BranchCut);
                }
                t.ln()
            }
            Expr::Exp(a) => a.eval_inner(point)?.exp(),
        })
    }

    /// Real evaluation helper over the named variables.
    pub fn eval_real(&self, assignments: &[(Var, f64)]) -> Result<Complex64> {
        let mut p = Point::new();
        for (v, r) in assignments {
            p.set(*v, Complex64::new(*r, 0.0));
        }
        self.eval_complex(&p)
    }
}
