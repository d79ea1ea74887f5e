use gaugekit::expr::{
    parse_expr, rat, BigRational, ExprError, Monomial, Polynomial, RationalFunction, Symbol,
    SymbolTable, Valuation,
};
use num_traits::Signed;
use proptest::prelude::*;

const NAMES: [&str; 8] = ["q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"];

fn table() -> SymbolTable {
    let mut t = SymbolTable::new();
    for n in NAMES {
        t.insert(n).unwrap();
    }
    t
}

fn p(text: &str) -> RationalFunction {
    parse_expr(text, &table()).unwrap()
}

fn sym(name: &str) -> Symbol {
    table().get(name).unwrap()
}

fn point(values: &[(&str, i64)]) -> Valuation {
    let mut v = Valuation::new();
    for &(n, x) in values {
        v.set(sym(n), rat(x));
    }
    v
}

#[test]
fn parses_orbital_generator() {
    let f = p("q2*p3 - q3*p2");
    assert!(f.denominator().is_one());
    assert_eq!(f.numerator().len(), 2);
    assert_eq!(f.render(&table()), p(&f.render(&table())).render(&table()));
}

#[test]
fn zero_literal_is_zero() {
    let z = p("0");
    assert!(z.is_zero());
    assert_eq!(z, RationalFunction::zero());
}

#[test]
fn self_quotient_is_one() {
    assert_eq!(p("(q1^2 - q4^2)/(q1^2 - q4^2)"), p("1"));
}

#[test]
fn zero_tests() {
    assert!((&p("q1*p2") - &p("q1*p2")).is_zero());
    let s = p("q2^2 + q3^2");
    assert!((&p("(q2^2 + q3^2)^2") - &(&s * &s)).is_zero());
    assert!(!p("q1*p2 - q2*p1").is_zero());
}

#[test]
fn derivatives() {
    assert_eq!(p("q2*p3 - q3*p2").diff(sym("p3")), p("q2"));
    let g = p("q2/(q3*(q2^2 + q3^2))");
    assert_eq!(
        g.diff(sym("q2")),
        p("(q3^2 - q2^2)/(q3*(q2^2 + q3^2)^2)")
    );
    assert!(p("7/3").diff(sym("q1")).is_zero());
}

// Quotient rule checked against a difference quotient at an exact point.
#[test]
fn derivative_matches_finite_ratio() {
    let g = p("q2/(q3*(q2^2 + q3^2))");
    let at = |x: BigRational| {
        let mut v = point(&[("q3", 2)]);
        v.set(sym("q2"), x);
        g.eval(&v).unwrap()
    };
    let h = BigRational::new(1.into(), 1_000_000.into());
    let x = rat(3);
    let ratio = (at(&x + &h) - at(&x - &h)) / (&h + &h);
    let exact = g.diff(sym("q2")).eval(&point(&[("q2", 3), ("q3", 2)])).unwrap();
    let err = (ratio - exact).abs();
    assert!(err < BigRational::new(1.into(), 1_000_000_000.into()));
}

#[test]
fn substitution() {
    let f = p("q1*p2 + 3");
    assert_eq!(f.substitute(&[]).unwrap(), f);
    let g = p("1/(q1 - q4)");
    assert!(matches!(
        g.substitute(&[(sym("q1"), p("q4"))]),
        Err(ExprError::IdenticallyZeroDenominator)
    ));
    assert_eq!(
        f.substitute(&[(sym("q1"), p("q4 + q3"))]).unwrap(),
        p("q4*p2 + q3*p2 + 3")
    );
}

#[test]
fn evaluation() {
    let v = point(&[("q2", 1), ("q3", 2), ("p2", 3), ("p3", 5)]);
    assert_eq!(p("q2*p3 - q3*p2").eval(&v).unwrap(), rat(-1));
    assert_eq!(RationalFunction::zero().eval(&Valuation::new()).unwrap(), rat(0));
    let w = point(&[("q1", 2), ("q4", 2)]);
    assert!(matches!(
        p("1/(q1^2 - q4^2)").eval(&w),
        Err(ExprError::DenominatorVanishesAtPoint)
    ));
}

#[test]
fn parse_errors() {
    let t = table();
    assert!(matches!(parse_expr("q9 + 1", &t), Err(ExprError::UnknownSymbol { .. })));
    assert!(matches!(parse_expr("q1 +", &t), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse_expr("q1/0", &t), Err(ExprError::DivisionByZeroLiteral { .. })));
    assert!(parse_expr("q1/(q2 - q2)", &t).is_err());
}

fn poly_strategy(max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0u16..3, 8), -5i64..=5),
        0..=max_terms,
    )
    .prop_map(|terms| {
        Polynomial::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (Monomial::from_exponents(&e), rat(c))),
        )
    })
}

/// Denominators of the form `c + sum of squares` never vanish at rational points.
fn rf_strategy() -> impl Strategy<Value = RationalFunction> {
    (poly_strategy(4), poly_strategy(2), 1i64..4, any::<bool>()).prop_map(|(num, d, c, plain)| {
        let num = RationalFunction::from_poly(num);
        if plain {
            return num;
        }
        let den = &RationalFunction::from_poly(&d * &d) + &RationalFunction::from_int(c);
        num.checked_div(&den).unwrap()
    })
}

fn point_strategy() -> impl Strategy<Value = Valuation> {
    prop::collection::vec(-6i64..=6, 8).prop_map(|xs| {
        let mut v = Valuation::new();
        for (n, x) in NAMES.iter().zip(xs) {
            v.set(sym(n), rat(x));
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(f in rf_strategy(), g in rf_strategy(), h in rf_strategy()) {
        prop_assert!((&(&(&f + &g) + &h) - &(&f + &(&g + &h))).is_zero());
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn render_round_trips(f in rf_strategy()) {
        let t = table();
        prop_assert_eq!(parse_expr(&f.render(&t), &t).unwrap(), f);
    }

    #[test]
    fn diff_is_linear_and_leibniz(f in rf_strategy(), g in rf_strategy(), k in 0usize..8) {
        let s = sym(NAMES[k]);
        prop_assert_eq!((&f + &g).diff(s), &f.diff(s) + &g.diff(s));
        prop_assert_eq!((&f * &g).diff(s), &(&f.diff(s) * &g) + &(&f * &g.diff(s)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in rf_strategy(), g in rf_strategy(), v in point_strategy()) {
        let (a, b) = (f.eval(&v).unwrap(), g.eval(&v).unwrap());
        prop_assert_eq!((&f + &g).eval(&v).unwrap(), &a + &b);
        prop_assert_eq!((&f - &g).eval(&v).unwrap(), &a - &b);
        prop_assert_eq!((&f * &g).eval(&v).unwrap(), &a * &b);
    }

    #[test]
    fn zero_difference_evaluates_to_zero(f in rf_strategy(), g in rf_strategy(), v in point_strategy()) {
        let d = &(&(&f + &g) * &f) - &(&(&f * &f) + &(&g * &f));
        prop_assert!(d.is_zero());
        prop_assert_eq!(d.eval(&v).unwrap(), rat(0));
    }
}
