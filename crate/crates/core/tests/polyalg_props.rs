use proptest::prelude::*;
use relaxocp::polyalg::{Monomial, Polynomial, VariableSpace};

fn space() -> VariableSpace {
    VariableSpace::new(["t", "y", "u"]).unwrap()
}

fn terms(coef: impl Strategy<Value = f64>) -> impl Strategy<Value = Vec<(Vec<u32>, f64)>> {
    prop::collection::vec((prop::collection::vec(0u32..4, 3), coef), 0..7)
}

fn build(t: &[(Vec<u32>, f64)]) -> Polynomial {
    Polynomial::from_terms(
        &space(),
        t.iter().map(|(e, c)| (Monomial::new(e.clone()), *c)),
    )
}

fn int_coef() -> impl Strategy<Value = f64> {
    (-5i32..=5).prop_map(|c| c as f64)
}

fn real_coef() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

/// Sum of absolute term values at a point, the natural scale for rounding.
fn magnitude(p: &Polynomial, x: &[f64]) -> f64 {
    p.terms().map(|(m, c)| (c * m.eval(x)).abs()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn evaluation_is_multiplicative(
        a in terms(real_coef()),
        b in terms(real_coef()),
        x in prop::collection::vec(-1.5f64..1.5, 3),
    ) {
        let (p, q) = (build(&a), build(&b));
        let pq = &p * &q;
        let lhs = pq.evaluate(&x).unwrap();
        let rhs = p.evaluate(&x).unwrap() * q.evaluate(&x).unwrap();
        let scale = 1.0 + magnitude(&p, &x) * magnitude(&q, &x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn product_rule_is_exact(a in terms(int_coef()), b in terms(int_coef()), var in 0usize..3) {
        let (p, q) = (build(&a), build(&b));
        let name = ["t", "y", "u"][var];
        let lhs = (&p * &q).differentiate(name).unwrap();
        let rhs = &(&p.differentiate(name).unwrap() * &q) + &(&p * &q.differentiate(name).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_substitution(a in terms(real_coef())) {
        let p = build(&a);
        let s = space();
        let bindings: Vec<(&str, Polynomial)> =
            ["t", "y", "u"].iter().map(|n| (*n, s.var(n).unwrap())).collect();
        prop_assert_eq!(p.substitute(&bindings).unwrap(), p);
    }

    #[test]
    fn print_parse_round_trip(a in terms(real_coef())) {
        let p = build(&a);
        let text = p.to_string();
        let q = Polynomial::parse(&text, &space()).unwrap();
        prop_assert_eq!(&q, &p, "{}", text);
        prop_assert_eq!(q.to_string(), text);
    }

    #[test]
    fn product_degree_adds(a in terms(int_coef()), b in terms(int_coef())) {
        let (p, q) = (build(&a), build(&b));
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert_eq!((&p * &q).degree(), p.degree() + q.degree());
    }
}
