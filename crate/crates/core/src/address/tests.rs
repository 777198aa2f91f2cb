use std::cmp::Ordering;

use proptest::prelude::*;

use super::*;
use crate::model::TractId::Exp;

fn ext(s: &str) -> ExternalAddress {
    parse_address(s).unwrap()
}

fn pt(s: &str) -> AddressPoint {
    parse_point(s).unwrap()
}

fn phi(p: &AddressPoint) -> f64 {
    embed_ordinate(p).unwrap()
}

#[test]
fn lex_examples() {
    assert_eq!(lex_compare(&pt("0"), &pt("1;0")).unwrap(), Ordering::Less);
    assert_eq!(lex_compare(&pt("0 2;0"), &pt("0, cut(2)")).unwrap(), Ordering::Less);
    assert_eq!(lex_compare(&pt("-inf"), &pt("-9;0")).unwrap(), Ordering::Less);
    assert_eq!(lex_compare(&pt("0 3;0"), &pt("0, cut(2)")).unwrap(), Ordering::Greater);
    assert_eq!(lex_compare(&pt("0 1;0"), &pt("0 1 0 0;0")).unwrap(), Ordering::Equal);
    assert_eq!(lex_compare(&pt("cut(1)"), &pt("cut(1)")).unwrap(), Ordering::Equal);
    assert_eq!(lex_compare(&pt("0 1"), &pt("0 1 0")).unwrap(), Ordering::Greater);
}

#[test]
fn lex_rejects_mixed_alphabets() {
    assert!(matches!(lex_compare(&pt("0"), &pt("0.U")), Err(Error::ModelMismatch(_))));
}

#[test]
fn extended_symbol_invariants() {
    for k in -5..5 {
        let cut = ExtendedSymbol::Cut(Exp(k));
        assert_eq!(cut.compare(&ExtendedSymbol::Tract(Exp(k))).unwrap(), Ordering::Greater);
        assert_eq!(cut.compare(&ExtendedSymbol::Tract(Exp(k + 1))).unwrap(), Ordering::Less);
    }
}

#[test]
fn canonical_forms() {
    assert_eq!(ext("0 1 0 1"), ext("0 1"));
    assert_eq!(ext("1 0 1;0 1"), ext("1 0"));
    assert!(ext("1 0 1;0 1").preperiod().is_empty());
    assert_eq!(ext("2 1 0 1;0 1").preperiod(), &[Exp(2)]);
    assert_eq!(ext("2 0;1 0"), ext("2;0 1"));
}

#[test]
fn shift_examples() {
    assert_eq!(ext("1 2;3").shift(), ext("2;3"));
    assert_eq!(ext("0").shift(), ext("0"));
    assert_eq!(ext(";0 1").shift(), ext(";1 0"));
    assert_eq!(ext("5;0 1").shift(), ext("0 1"));
}

#[test]
fn intermediate_examples() {
    let between = |a: &str, b: &str| intermediate_between(&ext(a), &ext(b)).unwrap();
    assert_eq!(between("0", "1;0"), IntermediateAddress::new(vec![], Exp(0)).unwrap());
    assert_eq!(between("0", "0 1;0"), IntermediateAddress::new(vec![Exp(0)], Exp(0)).unwrap());
    let mid = between("0", "5;0");
    assert_eq!(mid, IntermediateAddress::new(vec![], Exp(2)).unwrap());
    let p = AddressPoint::Inter(mid);
    assert_eq!(lex_compare(&pt("0"), &p).unwrap(), Ordering::Less);
    assert_eq!(lex_compare(&p, &pt("5;0")).unwrap(), Ordering::Less);
    // Argument order does not matter.
    assert_eq!(between("5;0", "0"), between("0", "5;0"));
    assert!(matches!(intermediate_between(&ext("0"), &ext("0 0")), Err(Error::EqualInputs)));
    assert!(matches!(external_between(&pt("-inf"), &pt("+inf")), Err(Error::InvalidArgument(_))));
    assert_eq!(between("-3;0", "0"), IntermediateAddress::new(vec![], Exp(-2)).unwrap());
}

#[test]
fn circular_examples() {
    let c = circular_normalize(&ext("3 1;0")).unwrap();
    assert_eq!((c.representative, c.k), (ext("0 1;0"), 3));
    let c = circular_normalize(&ext("0")).unwrap();
    assert_eq!((c.representative, c.k), (ext("0"), 0));
    let c = circular_normalize(&ext("-2;5")).unwrap();
    assert_eq!((c.representative, c.k), (ext("0;5"), -2));
    let sine = circular_normalize(&ext("2.U;0.L")).unwrap();
    assert_eq!((sine.representative, sine.k), (ext("0.U;0.L"), 2));
    let comp = ExternalAddress::constant(TractId::Composite(vec![Exp(1), Exp(0)]));
    assert!(matches!(circular_normalize(&comp), Err(Error::UnsupportedAlphabet(_))));
}

#[test]
fn external_between_cases() {
    let cases = [
        ("0", "1;0"),
        ("0", "0 1;0"),
        ("cut(0)", "1;-7"),
        ("0 cut(0)", "cut(0)"),
        ("cut(0)", "cut(1)"),
        ("cut(0)", "cut(2)"),
        ("-inf", "cut(0)"),
        ("cut(0)", "+inf"),
        ("0", "0 cut(0)"),
        ("-5 cut(-5)", "-4"),
    ];
    for (a, b) in cases {
        let (a, b) = (pt(a), pt(b));
        let e = AddressPoint::Ext(external_between(&a, &b).unwrap());
        assert_eq!(lex_compare(&a, &e).unwrap(), Ordering::Less, "{a} < {e}");
        assert_eq!(lex_compare(&e, &b).unwrap(), Ordering::Less, "{e} < {b}");
    }
}

fn symbol() -> impl Strategy<Value = TractId> {
    (-4i64..=4).prop_map(Exp)
}

fn external() -> impl Strategy<Value = ExternalAddress> {
    (prop::collection::vec(symbol(), 0..4), prop::collection::vec(symbol(), 1..4))
        .prop_map(|(pre, per)| ExternalAddress::new(pre, per).unwrap())
}

fn intermediate() -> impl Strategy<Value = IntermediateAddress> {
    (prop::collection::vec(symbol(), 0..4), symbol()).prop_map(|(p, c)| IntermediateAddress::new(p, c).unwrap())
}

fn point() -> impl Strategy<Value = AddressPoint> {
    prop_oneof![
        1 => Just(AddressPoint::MinusInf),
        1 => Just(AddressPoint::PlusInf),
        6 => external().prop_map(AddressPoint::Ext),
        4 => intermediate().prop_map(AddressPoint::Inter),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lex_is_a_total_order(a in point(), b in point(), c in point()) {
        let ab = lex_compare(&a, &b).unwrap();
        prop_assert_eq!(ab, lex_compare(&b, &a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        let bc = lex_compare(&b, &c).unwrap();
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(lex_compare(&a, &c).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn embedding_is_strictly_monotone(a in point(), b in point()) {
        match lex_compare(&a, &b).unwrap() {
            Ordering::Less => prop_assert!(phi(&a) < phi(&b)),
            Ordering::Greater => prop_assert!(phi(&a) > phi(&b)),
            Ordering::Equal => prop_assert_eq!(phi(&a), phi(&b)),
        }
        prop_assert!((0.0..=1.0).contains(&phi(&a)));
    }

    #[test]
    fn intermediates_separate_externals(a in external(), b in external()) {
        prop_assume!(a != b);
        let m = AddressPoint::Inter(intermediate_between(&a, &b).unwrap());
        let (lo, hi) = if lex_compare_ext(&a, &b).unwrap() == Ordering::Less { (a, b) } else { (b, a) };
        let (lo, hi) = (AddressPoint::Ext(lo), AddressPoint::Ext(hi));
        prop_assert_eq!(lex_compare(&lo, &m).unwrap(), Ordering::Less);
        prop_assert_eq!(lex_compare(&m, &hi).unwrap(), Ordering::Less);
        prop_assert!(phi(&lo) < phi(&m) && phi(&m) < phi(&hi));
    }

    #[test]
    fn externals_separate_any_points(a in point(), b in point()) {
        let infinite = |p: &AddressPoint| matches!(p, AddressPoint::MinusInf | AddressPoint::PlusInf);
        prop_assume!(a != b && !(infinite(&a) && infinite(&b)));
        let e = AddressPoint::Ext(external_between(&a, &b).unwrap());
        let (lo, hi) = if lex_compare(&a, &b).unwrap() == Ordering::Less { (a, b) } else { (b, a) };
        prop_assert_eq!(lex_compare(&lo, &e).unwrap(), Ordering::Less);
        prop_assert_eq!(lex_compare(&e, &hi).unwrap(), Ordering::Less);
        prop_assert!(phi(&lo) < phi(&e) && phi(&e) < phi(&hi));
    }

    #[test]
    fn embedding_commutes_with_shift(a in external()) {
        let k = a.symbol(0).to_index().unwrap();
        let lhs = phi(&AddressPoint::Ext(a.clone()));
        let rhs = symbol_offset(k) + symbol_weight(k) * phi(&AddressPoint::Ext(a.shift()));
        prop_assert!((lhs - rhs).abs() < 1e-15);
        prop_assert!(symbol_offset(k) < lhs && lhs < symbol_offset(k) + symbol_weight(k));
    }

    #[test]
    fn circular_normalize_is_idempotent(a in external(), m in -5i64..=5) {
        let c = circular_normalize(&a).unwrap();
        prop_assert_eq!(circular_normalize(&c.representative).unwrap().representative, c.representative.clone());
        let moved = translate_first(&a, m).unwrap();
        prop_assert_eq!(circular_normalize(&moved).unwrap().representative, c.representative);
        prop_assert_eq!(circular_normalize(&moved).unwrap().k, c.k + m);
    }

    #[test]
    fn display_round_trips(a in point()) {
        prop_assert_eq!(parse_point(&a.to_string()).unwrap(), a);
    }
}
