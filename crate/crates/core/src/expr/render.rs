//! Parseable text rendering. `parse(render(e)) == e` for canonical `e`.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::Expr;
use crate::poly::write_rational;
use crate::var::Var;
use crate::Rational;

pub fn render(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Const(c) => write_rational(out, c),
        Expr::Var(v) => {
            use core::fmt::Write;
            let _ = write!(out, "{v}");
        }
        Expr::Sum(cs) => write_sum(out, cs),
        Expr::Prod(cs) => write_prod(out, cs),
        Expr::Pow(b, q) => {
            if q.is_negative() {
                out.push_str("1/");
                write_pow(out, b, &-q.clone());
            } else {
                write_pow(out, b, q);
            }
        }
        Expr::Ln(a) => {
            out.push_str("ln(");
            write_expr(out, a);
            out.push(')');
        }
        Expr::Exp(a) => {
            out.push_str("exp(");
            write_expr(out, a);
            out.push(')');
        }
    }
}

fn is_negative_term(e: &Expr) -> bool {
    match e {
        Expr::Const(c) => c.is_negative(),
        Expr::Prod(fs) => matches!(fs.first(), Some(Expr::Const(c)) if c.is_negative()),
        _ => false,
    }
}

fn write_sum(out: &mut String, cs: &[Expr]) {
    // positive terms, then negative ones, constant last
    let nonconst = || cs.iter().filter(|c| !matches!(c, Expr::Const(_)));
    let mut order: Vec<&Expr> = nonconst().filter(|c| !is_negative_term(c)).collect();
    order.extend(nonconst().filter(|c| is_negative_term(c)));
    order.extend(cs.iter().filter(|c| matches!(c, Expr::Const(_))));
    for (i, t) in order.into_iter().enumerate() {
        let neg = is_negative_term(t);
        let shown = if neg { t.clone().neg() } else { t.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if matches!(shown, Expr::Sum(_)) {
            out.push('(');
            write_expr(out, &shown);
            out.push(')');
        } else {
            write_expr(out, &shown);
        }
    }
}

fn write_factor(out: &mut String, f: &Expr) {
    match f {
        Expr::Sum(_) => {
            out.push('(');
            write_expr(out, f);
            out.push(')');
        }
        Expr::Pow(b, q) => write_pow(out, b, q),
        _ => write_expr(out, f),
    }
}

fn write_prod(out: &mut String, fs: &[Expr]) {
    let mut coeff = Rational::one();
    let mut num: Vec<Expr> = Vec::new();
    let mut den: Vec<Expr> = Vec::new();
    for f in fs {
        match f {
            Expr::Const(c) => coeff = c.clone(),
            Expr::Pow(b, q) if q.is_negative() => den.push(Expr::pow((**b).clone(), -q.clone())),
            other => num.push(other.clone()),
        }
    }
    // variables in coordinate order, whatever their exponents
    num.sort_by_key(|e| (base_var(e).is_none(), base_var(e)));
    den.sort_by_key(|e| (base_var(e).is_none(), base_var(e)));
    if coeff.is_negative() {
        out.push('-');
        coeff = -coeff;
    }
    let mut first = true;
    if !coeff.is_one() || num.is_empty() {
        write_rational(out, &coeff);
        first = false;
    }
    for f in &num {
        if !first {
            out.push('*');
        }
        write_factor(out, f);
        first = false;
    }
    for f in &den {
        out.push('/');
        match f {
            Expr::Prod(_) => {
                out.push('(');
                write_expr(out, f);
                out.push(')');
            }
            _ => write_factor(out, f),
        }
    }
}

fn base_var(e: &Expr) -> Option<Var> {
    match e {
        Expr::Var(v) => Some(*v),
        Expr::Pow(b, _) => match **b {
            Expr::Var(v) => Some(v),
            _ => None,
        },
        _ => None,
    }
}

fn write_pow(out: &mut String, b: &Expr, q: &Rational) {
    let wrap = match b {
        Expr::Sum(_) | Expr::Prod(_) | Expr::Pow(..) => true,
        Expr::Const(c) => c.is_negative() || !c.is_integer(),
        _ => false,
    };
    if wrap {
        out.push('(');
        write_expr(out, b);
        out.push(')');
    } else {
        write_expr(out, b);
    }
    if q.is_one() {
        return;
    }
    out.push('^');
    if q.is_integer() && q.is_positive() {
        write_rational(out, q);
    } else {
        out.push('(');
        write_rational(out, q);
        out.push(')');
    }
}
