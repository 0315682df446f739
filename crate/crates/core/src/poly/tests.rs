use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;

fn q() -> FieldSpec {
    FieldSpec::rational()
}

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn px(s: &str, n: usize) -> SparsePoly {
    SparsePoly::parse(s, q(), n).unwrap()
}

#[test]
fn arithmetic_examples() {
    assert_eq!(&px("x1 + x2", 2) + &px("x1 - x2", 2), px("2*x1", 2));
    assert_eq!(&px("x1 - x2", 2) * &px("x1 + x2", 2), px("x1^2 - x2^2", 2));
    assert!((&px("x1 + 3", 2) * &SparsePoly::zero(q(), 2)).is_zero());
}

#[test]
fn ring_mismatch_is_an_error() {
    let a = px("x1", 2);
    let b = SparsePoly::parse("x1", fp(7), 2).unwrap();
    assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
    let c = px("x1", 3);
    assert!(matches!(a.checked_mul(&c), Err(Error::ArityMismatch { .. })));
}

#[test]
fn eval_examples() {
    let f = px("x1^2*x2", 2);
    let pt = [q().from_u64(2), q().from_u64(3)];
    assert_eq!(f.eval(&pt).unwrap(), q().from_u64(12));
    let g = px("3*x1*x2 - x2 + 7", 2);
    assert_eq!(g.eval(&[q().zero(), q().zero()]).unwrap(), q().from_u64(7));
    let f7 = fp(7);
    let h = SparsePoly::parse("x1^5", f7, 1).unwrap();
    assert_eq!(h.eval(&[f7.from_u64(2)]).unwrap(), f7.from_u64(4));
    assert!(h.eval(&[]).is_err());
}

#[test]
fn derivative_examples() {
    assert_eq!(px("x1^2*x2", 2).derivative(0).unwrap(), px("2*x1*x2", 2));
    for p in [2u64, 3, 5, 7] {
        let f = SparsePoly::var(fp(p), 1, 0).pow(p as u32);
        assert!(f.derivative(0).unwrap().is_zero());
    }
    let f3 = fp(3);
    let x = SparsePoly::var(f3, 1, 0);
    assert!(x.pow(3).derivative(0).unwrap().is_zero());
    assert_eq!(x.pow(4).derivative(0).unwrap(), x.pow(3));
    assert!(px("x1", 2).derivative(2).is_err());
}

#[test]
fn substitute_examples() {
    let z = |s: &str, n| SparsePoly::parse_with(s, q(), n, Vars::Z1).unwrap();
    let f = px("x1*x2", 2);
    assert_eq!(f.substitute(&[z("z1", 1), z("z1", 1)]).unwrap(), z("z1^2", 1));
    let g = px("x1 + x2", 2);
    assert_eq!(g.substitute(&[z("z1", 1), z("5", 1)]).unwrap(), z("z1 + 5", 1));
    let h = px("3*x1^2*x2 - x2 + 1", 2);
    assert_eq!(h.substitute(&[px("x1", 2), px("x2", 2)]).unwrap(), h);
    let bad = SparsePoly::parse("x1", fp(5), 1).unwrap();
    assert!(g.substitute(&[z("z1", 1), bad]).is_err());
}

#[test]
fn gcd_examples() {
    assert_eq!(px("x1^2 - x2^2", 2).gcd(&px("x1 - x2", 2)).unwrap(), px("x1 - x2", 2));
    assert_eq!(px("2*x1 + 3*x2 - 1", 2).gcd(&px("x1 - 5*x2 + 2", 2)).unwrap(), px("1", 2));
    assert_eq!(px("x1^2*x2 + x1*x2^2", 2).gcd(&px("x1*x2", 2)).unwrap(), px("x1*x2", 2));
    let z = SparsePoly::zero(q(), 2);
    assert_eq!(z.gcd(&z), Err(Error::BothZero));
    assert_eq!(z.gcd(&px("3*x1 + 3", 2)).unwrap(), px("x1 + 1", 2));
}

#[test]
fn gcd_three_variables() {
    let common = px("x1*x2 - x3^2 + 1", 3);
    let a = &common * &px("x1 + x3", 3);
    let b = &common * &px("x2^2 - x1", 3);
    assert_eq!(a.gcd(&b).unwrap(), common.normalize());
    let c = &common.pow(2) * &px("x3", 3);
    assert_eq!(c.gcd(&a).unwrap(), common.normalize());
}

#[test]
fn resultant_examples() {
    assert_eq!(px("x1 + 1", 1).resultant(&px("x1 - 1", 1), 0).unwrap(), px("-2", 1));
    let f = px("x1^2 + x1*x2 + 3", 2);
    assert!(f.resultant(&f, 0).unwrap().is_zero());
    assert_eq!(
        px("x1^2 - x2", 2).resultant(&px("x1 - x2", 2), 0).unwrap(),
        px("x2^2 - x2", 2)
    );
    assert_eq!(
        px("x2 + 1", 2).resultant(&px("x1", 2), 0),
        Err(Error::ZeroVariableDegree(0))
    );
}

#[test]
fn kronecker_examples() {
    let d3 = BigUint::from(3u32);
    let k = kronecker(&px("x1 + x2", 2), &d3).unwrap();
    let t = |s: &str| SparsePoly::parse_with(s, q(), 1, Vars::T).unwrap();
    assert_eq!(k.to_sparse_poly().unwrap(), t("t^3 + t^9"));
    assert!(kronecker(&px("x1*x2 - x1*x2", 2), &d3).unwrap().is_zero());
    let k = kronecker(&px("x1^2 + x2", 2), &d3).unwrap();
    assert_eq!(k.to_sparse_poly().unwrap(), t("t^6 + t^9"));
    assert!(kronecker(&px("x1^3", 2), &d3).is_err());
    // huge exponents stay exact
    let big = BigUint::from(10u32).pow(30);
    let k = kronecker(&px("x1 + x2^2", 2), &big).unwrap();
    assert_eq!(k.degree(), Some(&(&big * &big * 2u32)));
    assert_eq!(k.to_sparse_poly(), Err(Error::ExponentOverflow));
}

#[test]
fn text_format() {
    let f = fp(101);
    let p = SparsePoly::parse("3*x1^2*x2 - x3 + 7", f, 3).unwrap();
    assert_eq!(p.to_string(), "3*x1^2*x2 - x3 + 7");
    let p = SparsePoly::parse(" ( x1 + 1 ) ^ 2 ", q(), 1).unwrap();
    assert_eq!(p.to_string(), "x1^2 + 2*x1 + 1");
    let p = SparsePoly::parse("x1/2 - 3/4", q(), 1).unwrap();
    assert_eq!(p.to_string(), "1/2*x1 - 3/4");
    assert_eq!(SparsePoly::parse("-x1", f, 1).unwrap().to_string(), "-x1");
    assert_eq!(SparsePoly::zero(f, 2).to_string(), "0");
    let z = SparsePoly::parse_with("z0 + 2*z2", f, 3, Vars::Z0).unwrap();
    assert_eq!(z.display_with(Vars::Z0).to_string(), "z0 + 2*z2");
    assert!(SparsePoly::parse("x4", f, 3).is_err());
    assert!(SparsePoly::parse("x0", f, 3).is_err());
    assert!(SparsePoly::parse("x1 +", f, 3).is_err());
    assert!(SparsePoly::parse("x1 $ 2", f, 3).is_err());
    assert_eq!(SparsePoly::parse_infer("x1*x5", f, Vars::X).unwrap().nvars(), 5);
}

#[test]
fn grlex_leading_term() {
    let p = px("x2^3 + x1*x2 + x1^2", 2);
    assert_eq!(p.leading_term().unwrap().0.exps(), &[0, 3]);
    let p = px("x1*x2^2 + x1^2*x2", 2);
    assert_eq!(p.leading_term().unwrap().0.exps(), &[2, 1]);
}

#[test]
fn exact_division() {
    let a = px("x1^3 - x2^3", 2);
    assert_eq!(a.div_exact(&px("x1 - x2", 2)).unwrap(), px("x1^2 + x1*x2 + x2^2", 2));
    assert!(a.div_exact(&px("x1 + x2", 2)).is_none());
}

fn arb_poly(field: FieldSpec, nvars: usize, terms: usize, deg: u32) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, nvars), -9i64..=9), 0..=terms).prop_map(
        move |ts| {
            SparsePoly::from_terms(field, nvars, ts.into_iter().map(|(e, c)| (e, field.from_i64(c)))).unwrap()
        },
    )
}

fn arb_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::rational()), Just(fp(3)), Just(fp(101))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in arb_field().prop_flat_map(|f| (arb_poly(f, 3, 4, 3), arb_poly(f, 3, 4, 3), arb_poly(f, 3, 4, 3)))) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn product_rule((a, b) in arb_field().prop_flat_map(|f| (arb_poly(f, 2, 4, 4), arb_poly(f, 2, 4, 4))), i in 0usize..2) {
        let lhs = (&a * &b).derivative(i).unwrap();
        let rhs = &(&a * &b.derivative(i).unwrap()) + &(&b * &a.derivative(i).unwrap());
        prop_assert_eq!(lhs, rhs);
        let lin = (&a + &b).derivative(i).unwrap();
        prop_assert_eq!(lin, &a.derivative(i).unwrap() + &b.derivative(i).unwrap());
    }

    #[test]
    fn substitute_is_homomorphism(
        (a, b, imgs) in arb_field().prop_flat_map(|f| (arb_poly(f, 2, 3, 2), arb_poly(f, 2, 3, 2), prop::collection::vec(arb_poly(f, 2, 2, 2), 2)))
    ) {
        let s = |p: &SparsePoly| p.substitute(&imgs).unwrap();
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
    }

    #[test]
    fn gcd_divides((a, b, g) in arb_field().prop_flat_map(|f| (arb_poly(f, 2, 3, 2), arb_poly(f, 2, 3, 2), arb_poly(f, 2, 2, 2)))) {
        let f = &a * &g;
        let h = &b * &g;
        prop_assume!(!f.is_zero() || !h.is_zero());
        let d = f.gcd(&h).unwrap();
        prop_assert!(f.div_exact(&d).is_some());
        prop_assert!(h.div_exact(&d).is_some());
        prop_assert!(d.is_monic());
        prop_assert_eq!(d.gcd(&d).unwrap(), d.clone());
        if !g.is_zero() {
            prop_assert!(d.div_exact(&g.normalize()).is_some());
        }
    }

    #[test]
    fn resultant_vanishes_iff_common_factor((a, b) in arb_field().prop_flat_map(|f| (arb_poly(f, 2, 3, 2), arb_poly(f, 2, 3, 2))), share in any::<bool>()) {
        let (a, b) = if share {
            let c = &a + &SparsePoly::var(a.field(), 2, 0);
            (&a * &c, &b * &c)
        } else {
            (a, b)
        };
        prop_assume!(a.degree_in(0) > Some(0) && b.degree_in(0) > Some(0));
        let r = a.resultant(&b, 0).unwrap();
        let g = a.gcd(&b).unwrap();
        prop_assert_eq!(r.is_zero(), g.degree_in(0) > Some(0));
    }

    #[test]
    fn kronecker_injective_below_base((a, b) in (arb_poly(fp(101), 3, 4, 2), arb_poly(fp(101), 3, 4, 2))) {
        // total degree of the inputs is at most 6
        let d = BigUint::from(7u32);
        let ka = kronecker(&a, &d).unwrap();
        let kb = kronecker(&b, &d).unwrap();
        prop_assert_eq!(a == b, ka == kb);
    }

    #[test]
    fn text_round_trip(a in arb_field().prop_flat_map(|f| arb_poly(f, 3, 5, 3))) {
        let s = a.to_string();
        let back = SparsePoly::parse(&s, a.field(), 3).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), s);
    }
}

#[test]
fn extension_coefficients_round_trip() {
    let f9 = FieldSpec::extension(3, 2).unwrap();
    let p = SparsePoly::parse("(w + 1)*x1^2 - w*x2 + 2", f9, 2).unwrap();
    let text = p.to_string();
    assert_eq!(SparsePoly::parse(&text, f9, 2).unwrap(), p);
    let g = SparsePoly::parse("x1^2 + x1", fp(2), 1).unwrap();
    let f4 = FieldSpec::extension(2, 2).unwrap();
    // vanishes on all of F_2 but not at the generator of F_4
    assert!(g.eval(&[fp(2).zero()]).unwrap().is_zero());
    assert!(g.eval(&[fp(2).one()]).unwrap().is_zero());
    assert!(!g.eval(&[f4.generator().unwrap()]).unwrap().is_zero());
    assert!(g.eval(&[q().one()]).is_err());
    assert_eq!(g.lift(f4).unwrap().eval(&[f4.generator().unwrap()]).unwrap(), f4.one());
}
