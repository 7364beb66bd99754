//! Exact-arithmetic engine for Lie symmetry algebras of implicit planar webs.
//!
//! A planar d-web is given by a first-order ODE `a_0 (y')^d + ... + a_d = 0`
//! with polynomial coefficients, by its prepared slopes `p_1, ..., p_d`, or by
//! first integrals `F_1, ..., F_d` of its foliations. The crate builds the
//! determining equations of the infinitesimal symmetries of such a web, solves
//! them in the polynomial class by exact linear algebra over the rationals,
//! checks the Lie algebra structure of the result and its relation to the
//! discriminant curve (Darboux polynomials). Non-rational candidates are
//! checked numerically.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod darboux;
pub mod determining;
pub mod error;
pub mod expr;
pub mod lie;
pub mod numverify;
pub mod poly;
pub mod ratfunc;
pub mod solver;
pub mod var;
pub mod web;

pub use determining::{NormalizedSystem, VectorField};
pub use error::{Error, Result};
pub use expr::Expr;
pub use poly::MPoly;
pub use ratfunc::RatFunc;
pub use var::{Coords, Var};
pub use web::Web;

/// Exact rational numbers over arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
