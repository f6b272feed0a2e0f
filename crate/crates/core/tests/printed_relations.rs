//! The intermediate relations printed for each mixed pattern, written out
//! term by term and checked against the general market resolution.

use proptest::prelude::*;

use triopoly::{resolve_market, MarketState, ModelParams, Pattern, Rational};

fn r(n: i64) -> Rational {
    Rational::integer(n)
}

fn params() -> impl Strategy<Value = ModelParams> {
    (5i64..=50, 1i64..=63, 0i64..40, 0i64..40).prop_map(|(a, k, ca, cc)| {
        let c = |j| Rational::frac(j, 8);
        ModelParams::new(r(a), Rational::frac(k, 64), c(ca), c(ca), c(cc)).unwrap()
    })
}

fn chosen() -> impl Strategy<Value = [Rational; 3]> {
    let v = || (0i64..=80, 1i64..=8).prop_map(|(n, d)| Rational::frac(n, d));
    [v(), v(), v()]
}

fn resolve(params: &ModelParams, pattern: Pattern, chosen: &[Rational; 3]) -> MarketState {
    resolve_market(params, pattern.assignment(), chosen).unwrap()
}

proptest! {
    #[test]
    fn qqp_relations(params in params(), v in chosen()) {
        let (a, b) = (params.a(), params.b());
        let [xa, xb, pc] = &v;
        let s = resolve(&params, Pattern::P2, &v);
        let b2 = b * b;
        let pa = (r(1) - b) * a + &(&b2 * xb) - &(b * xb) + &(&b2 * xa) - xa + &(b * pc);
        let pb = (r(1) - b) * a + &(&b2 * xb) - xb + &(&b2 * xa) - &(b * xa) + &(b * pc);
        let xc = a - &(b * xb) - &(b * xa) - pc;
        prop_assert_eq!(&s.p()[0], &pa);
        prop_assert_eq!(&s.p()[1], &pb);
        prop_assert_eq!(&s.x()[2], &xc);
    }

    #[test]
    fn qpq_relations(params in params(), v in chosen()) {
        let (a, b) = (params.a(), params.b());
        let [xa, pb, xc] = &v;
        let s = resolve(&params, Pattern::P3, &v);
        let b2 = b * b;
        let pa = (r(1) - b) * a + &(&b2 * xc) - &(b * xc) + &(&b2 * xa) - xa + &(b * pb);
        let pc = (r(1) - b) * a + &(&b2 * xc) - xc + &(&b2 * xa) - &(b * xa) + &(b * pb);
        let xb = a - &(b * xc) - &(b * xa) - pb;
        prop_assert_eq!(&s.p()[0], &pa);
        prop_assert_eq!(&s.p()[2], &pc);
        prop_assert_eq!(&s.x()[1], &xb);
    }

    #[test]
    fn ppq_relations(params in params(), v in chosen()) {
        let (a, b) = (params.a(), params.b());
        let [pa, pb, xc] = &v;
        let s = resolve(&params, Pattern::P4, &v);
        let b2 = b * b;
        let one_minus = r(1) - b;
        let one_plus = r(1) + b;
        let pc = (&one_minus * a + &(r(2) * &b2 * xc) - &(b * xc) - xc + &(b * pa) + &(b * pb)) / &one_plus;
        let xb = (&one_minus * a + &(&b2 * xc) - &(b * xc) + &(b * pa) - pb) / &(&one_minus * &one_plus);
        let xa = (&one_minus * a + &(&b2 * xc) - &(b * xc) - pa + &(b * pb)) / &(&one_minus * &one_plus);
        prop_assert_eq!(&s.p()[2], &pc);
        prop_assert_eq!(&s.x()[1], &xb);
        prop_assert_eq!(&s.x()[0], &xa);
    }

    #[test]
    fn pqp_relations(params in params(), v in chosen()) {
        let (a, b) = (params.a(), params.b());
        let [pa, xb, pc] = &v;
        let s = resolve(&params, Pattern::P5, &v);
        let b2 = b * b;
        let one_minus = r(1) - b;
        let one_plus = r(1) + b;
        let pb = (&one_minus * a + &(r(2) * &b2 * xb) - &(b * xb) - xb + &(b * pc) + &(b * pa)) / &one_plus;
        let xa = (&one_minus * a + &(&b2 * xb) - &(b * xb) + &(b * pc) - pa) / &(&one_minus * &one_plus);
        let xc = (&one_minus * a + &(&b2 * xb) - &(b * xb) - pc + &(b * pa)) / &(&one_minus * &one_plus);
        prop_assert_eq!(&s.p()[1], &pb);
        prop_assert_eq!(&s.x()[0], &xa);
        prop_assert_eq!(&s.x()[2], &xc);
    }

    /// All-price demand with each firm's cross-price term summing the two
    /// rivals' prices.
    #[test]
    fn ppp_direct_demand(params in params(), v in chosen()) {
        let (a, b) = (params.a(), params.b());
        let s = resolve(&params, Pattern::P6, &v);
        let den = (r(1) - b) * &(r(1) + &(r(2) * b));
        for i in 0..3 {
            let rivals: Rational = (0..3).filter(|&j| j != i).map(|j| v[j].clone()).sum();
            let x = ((r(1) - b) * a - &((r(1) + b) * &v[i]) + &(b * &rivals)) / &den;
            prop_assert_eq!(&s.x()[i], &x);
        }
    }
}
