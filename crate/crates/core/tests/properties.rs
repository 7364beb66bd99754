use num_bigint::BigInt;
use proptest::prelude::*;

use websym::darboux::cofactor;
use websym::determining::prolong;
use websym::expr::parse;
use websym::lie::bracket;
use websym::numverify::{residual, SamplePlan};
use websym::poly::{exact_nullspace, rank, sylvester_resultant, Monomial};
use websym::{Coords, Expr, MPoly, Rational, Var, VectorField, Web};

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn mono(i: u16, j: u16) -> Monomial {
    Monomial::default().with(Var::X, i).with(Var::Y, j)
}

/// Polynomial in `x, y` of total degree at most 2.
fn poly2() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(-3i64..=3, 6).prop_map(|c| {
        let ms = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        MPoly::from_terms(ms.iter().zip(c).map(|(&(i, j), n)| (mono(i, j), q(n))))
    })
}

fn field() -> impl Strategy<Value = VectorField> {
    (poly2(), poly2()).prop_map(|(a, b)| VectorField::from_polys(&a, &b, Coords::XY))
}

fn raw_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var(Var::X)),
        Just(Expr::Var(Var::Y)),
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Expr::Const(Rational::new(n.into(), d.into()))),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Sum),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Prod),
            (inner.clone(), -2i64..=3).prop_map(|(b, e)| Expr::Pow(Box::new(b), q(e))),
            inner.clone().prop_map(|b| Expr::Pow(Box::new(b), Rational::new(1.into(), 2.into()))),
            inner.clone().prop_map(|e| Expr::Ln(Box::new(e))),
            inner.prop_map(|e| Expr::Exp(Box::new(e))),
        ]
    })
}

/// Polynomial in `z` of degree 1 or 2 with coefficients linear in `x` and a
/// nonzero constant leading coefficient.
fn zpoly() -> impl Strategy<Value = MPoly> {
    (1u16..=2, prop::collection::vec((-3i64..=3, -3i64..=3), 3), prop_oneof![-2i64..=-1, 1i64..=2]).prop_map(
        |(deg, cs, lead)| {
            let mut terms = vec![(Monomial::default().with(Var::Z, deg), q(lead))];
            for (k, (c0, c1)) in cs.into_iter().take(deg as usize).enumerate() {
                let z = Monomial::default().with(Var::Z, k as u16);
                terms.push((z, q(c0)));
                terms.push((z.with(Var::X, 1), q(c1)));
            }
            MPoly::from_terms(terms)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn canonicalization_is_idempotent(e in raw_expr()) {
        let c = e.canon();
        prop_assert_eq!(c.canon(), c);
    }

    #[test]
    fn rendering_parses_back(e in raw_expr()) {
        let c = e.canon();
        let again = parse(&c.to_string()).unwrap();
        prop_assert_eq!(again, c);
    }

    #[test]
    fn bracket_is_antisymmetric(a in field(), b in field()) {
        let s = bracket(&a, &b).unwrap().add(&bracket(&b, &a).unwrap()).unwrap();
        prop_assert!(s.simplify().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn jacobi_identity(a in field(), b in field(), c in field()) {
        let br = |x: &VectorField, y: &VectorField| bracket(x, y).unwrap();
        let s = br(&a, &br(&b, &c)).add(&br(&b, &br(&c, &a))).unwrap().add(&br(&c, &br(&a, &b))).unwrap();
        prop_assert!(s.simplify().is_zero());
    }

    #[test]
    fn rank_nullity(
        m in (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], c), r)
        })
    ) {
        let cols = m[0].len();
        let m: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&n| q(n)).collect()).collect();
        let null = exact_nullspace(&m, cols);
        prop_assert_eq!(rank(&m, cols) + null.len(), cols);
        for v in &null {
            for row in &m {
                let s: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert_eq!(s, q(0));
            }
        }
        prop_assert_eq!(rank(&null, cols), null.len());
    }

    #[test]
    fn resultant_is_multiplicative(f in zpoly(), g in zpoly(), h in zpoly()) {
        let fg = &f * &g;
        let lhs = sylvester_resultant(&fg, &h, Var::Z).unwrap();
        let rhs = &sylvester_resultant(&f, &h, Var::Z).unwrap() * &sylvester_resultant(&g, &h, Var::Z).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prolongation_is_linear(a in field(), b in field(), c in -3i64..=3) {
        let sum = a.add(&b.scale(Expr::integer(c))).unwrap();
        let lhs = prolong(&sum);
        let rhs = prolong(&a).add(prolong(&b).mul(Expr::integer(c)));
        prop_assert!(lhs.sub(rhs).simplifies_to_zero());
    }

    #[test]
    fn residual_scales_linearly(a in field(), c in prop_oneof![-5i64..=-1, 1i64..=5]) {
        let web = Web::from_slopes(vec![parse("1").unwrap(), parse("-1").unwrap(), parse("y/x").unwrap()], Coords::XY)
            .unwrap();
        let plan = SamplePlan::with_points(16);
        let base = residual(&web, &a, &plan).unwrap();
        let scaled = residual(&web, &a.scale(Expr::integer(c)), &plan).unwrap();
        let want = base.max * c.unsigned_abs() as f64;
        prop_assert!((scaled.max - want).abs() <= 1e-12 * want.max(1.0));
    }

    #[test]
    fn cofactor_is_additive(p1 in poly2(), p2 in poly2(), r1 in poly2(), r2 in poly2(), i in 0u16..3, j in 0u16..3) {
        // X = x p ∂x + y r ∂y keeps x^i y^j with cofactor i p + j r
        let (x, y) = (MPoly::var(Var::X), MPoly::var(Var::Y));
        let fx = VectorField::from_polys(&(&x * &p1), &(&y * &r1), Coords::XY);
        let gx = VectorField::from_polys(&(&x * &p2), &(&y * &r2), Coords::XY);
        let curve = MPoly::from_terms([(mono(i, j), q(1))]);
        let k = |v: &VectorField| cofactor(v, &curve).unwrap().expect("Darboux").cofactor;
        let sum = fx.add(&gx).unwrap();
        prop_assert_eq!(k(&sum), &k(&fx) + &k(&gx));
    }
}

#[test]
fn derivative_matches_finite_differences() {
    let plan = SamplePlan::with_points(100);
    let cases = ["x^2*y + ln(x)", "exp(x*y)/(1 + y^2)", "x^(1/3)*ln(x + y)", "(x - y)^(-2)*exp(-x)"];
    for src in cases {
        let e = parse(src).unwrap();
        for v in [Var::X, Var::Y] {
            let d = e.diff(v);
            for &(a, b) in &plan.points {
                let h = 1e-5;
                let (da, db) = if v == Var::X { (h, 0.0) } else { (0.0, h) };
                let f = |s: f64, t: f64| e.eval_real(&[(Var::X, s), (Var::Y, t)]);
                let (Ok(fp), Ok(fm), Ok(exact)) = (f(a + da, b + db), f(a - da, b - db), d.eval_real(&[(Var::X, a), (Var::Y, b)]))
                else {
                    continue;
                };
                let fd = (fp - fm) / (2.0 * h);
                assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "{src} d/d{v} at ({a}, {b})");
            }
        }
    }
}
