use proptest::prelude::*;
use sminima::forms::{form_from_ideal, ideal_from_form, m_form, m_form_box, m_form_via_ideal, BinaryQuadraticForm};
use sminima::rational::q;
use sminima::NumberField;

/// Primitive forms of discriminant 8, -4 and -20 (both classes for -20).
fn forms() -> Vec<BinaryQuadraticForm> {
    vec![
        BinaryQuadraticForm::new(1, 0, -2),
        BinaryQuadraticForm::new(-1, 2, 1),
        BinaryQuadraticForm::new(1, 0, 1),
        BinaryQuadraticForm::new(1, 0, 5),
        BinaryQuadraticForm::new(2, 2, 3),
    ]
}

#[test]
fn discriminants_are_as_listed() {
    let ds: Vec<i64> = forms().iter().map(|f| i64::try_from(f.discriminant()).unwrap()).collect();
    assert_eq!(ds, vec![8, 8, -4, -20, -20]);
}

#[test]
fn half_point_of_x2_minus_2y2() {
    let f = BinaryQuadraticForm::new(1, 0, -2);
    let p = (q(1, 2), q(0, 1));
    assert_eq!(m_form(&f, &p).unwrap(), q(1, 4));
    assert_eq!(m_form_box(&f, &p, 30), q(1, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// `f(x, y) N(a) = N(x a_1 + y a_2)` for the ideal built from `f`, and the
    /// form read back from that ideal is `f` itself (up to sign for
    /// indefinite forms with negative leading coefficient).
    #[test]
    fn norm_identity(which in 0usize..5, x in -40i64..40, y in -40i64..40, den in 1i64..15) {
        let f = &forms()[which];
        let fi = ideal_from_form(f).unwrap();
        let k = &fi.field;
        let (px, py) = (q(x, den), q(y, den));
        let (u, v) = if fi.swapped { (&py, &px) } else { (&px, &py) };
        let z = &fi.basis[0].scale(u) + &fi.basis[1].scale(v);
        let lhs = f.eval(&px, &py);
        let n = k.norm(&z) / k.ideal_norm(&fi.ideal);
        let sign = if f.a < 0.into() { q(-1, 1) } else { q(1, 1) };
        prop_assert_eq!(lhs, sign * n);
        let back = form_from_ideal(k, &fi.ideal, &fi.basis).unwrap();
        prop_assert_eq!(back.discriminant(), f.discriminant());
    }

    /// The ideal route, the direct route and a plain box search agree.
    #[test]
    fn minima_agree(which in 0usize..5, x in 0i64..30, y in 0i64..30, den in 1i64..11) {
        let f = &forms()[which];
        let p = (q(x, den), q(y, den));
        let direct = m_form_box(f, &p, 30);
        prop_assert_eq!(m_form(f, &p).unwrap(), direct.clone());
        prop_assert_eq!(m_form_via_ideal(f, &p).unwrap(), direct);
    }
}

#[test]
fn forms_of_the_maximal_orders() {
    let cases: [(&[i64], BinaryQuadraticForm); 3] = [
        (&[-2, 0, 1], BinaryQuadraticForm::new(1, 0, -2)),
        (&[1, 0, 1], BinaryQuadraticForm::new(1, 0, 1)),
        (&[5, 0, 1], BinaryQuadraticForm::new(1, 0, 5)),
    ];
    for (poly, want) in cases {
        let k = NumberField::new(poly).unwrap();
        let f = form_from_ideal(&k, &k.unit_ideal(), &[k.one(), k.theta()]).unwrap();
        assert_eq!(f, want);
    }
    let k = NumberField::new(&[5, 0, 1]).unwrap();
    let a = k.ideal_from_gens(&[k.int(2), k.elem_i(&[1, 1])]).unwrap();
    let f = form_from_ideal(&k, &a, &[k.int(2), k.elem_i(&[1, 1])]).unwrap();
    assert_eq!(f, BinaryQuadraticForm::new(2, 2, 3));
}
