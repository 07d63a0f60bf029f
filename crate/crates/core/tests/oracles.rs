//! Values worked out by hand or by an independent computation, frozen.

use indkit::exactpoly::int;
use indkit::liealg::lie_closure;
use indkit::plane::{
    check_y_term, degenerate_phi_power, free_word_eval, has_nonnegative_integer_coeffs, parse_word, phi, phi_power,
    phi_power_truncated, s_normal_form, syllable_length,
};
use indkit::vectorfield::partial_basis_field;
use indkit::{PolyMap, VectorField};

#[test]
fn phi_is_u_after_v() {
    assert_eq!(phi().to_string(), "(x^4 + 2*x^2*y + y^2 + x, x^2 + y)");
    let uv = PolyMap::parse("(x + y^2, y)").unwrap().compose(&PolyMap::parse("(x, y + x^2)").unwrap()).unwrap();
    assert_eq!(uv, phi());
    assert_eq!(phi().jacobian().1, indkit::Polynomial::one(2));
}

#[test]
fn y_term_coefficients() {
    let expect = [1, 2, 42, 3144, 609480, 241260344];
    for (k, e) in (1..=6).zip(expect) {
        let r = check_y_term(k).unwrap();
        assert_eq!(r.coefficient, int(e), "k = {k}");
        assert_eq!(r.recurrence, int(e), "k = {k}");
    }
}

#[test]
fn degeneration_limits() {
    let cases: [(usize, &[i64], i64); 3] =
        [(1, &[-2], 18), (2, &[-3, -72], 4014), (3, &[-4, -200, -23598], 3597880)];
    for (k, cs, c) in cases {
        let d = degenerate_phi_power(k).unwrap();
        assert_eq!(d.corrections, cs.iter().map(|&c| int(c)).collect::<Vec<_>>());
        assert_eq!(d.coefficient, int(c));
    }
    assert_eq!(degenerate_phi_power(1).unwrap().limit.to_string(), "(18*y^5 + x, y)");
}

#[test]
fn phi_powers_have_nonnegative_integer_coefficients() {
    for k in 1..=3 {
        assert!(has_nonnegative_integer_coeffs(&phi_power(k)));
    }
    for k in 4..=6 {
        assert!(has_nonnegative_integer_coeffs(&phi_power_truncated(k, 40)));
    }
}

#[test]
fn partial_basis_brackets() {
    let d = |i, j| partial_basis_field(i, j).unwrap();
    assert_eq!(d(-1, 2).bracket(&d(2, -1)).unwrap(), d(1, 1).scale(&int(9)));
    assert_eq!(d(-1, 2).bracket(&d(0, 0)).unwrap(), d(-1, 2).scale(&int(3)));
}

#[test]
fn sl2_bracket_and_closure() {
    let e = VectorField::parse("[y, 0]").unwrap();
    let f = VectorField::parse("[0, x]").unwrap();
    assert_eq!(e.bracket(&f).unwrap(), VectorField::parse("[-x, y]").unwrap());
    let report = lie_closure(&[e, f], 10, 5).unwrap();
    assert!(report.is_closed());
    assert_eq!(report.span.dim(), 3);
}

#[test]
fn commutator_of_generators() {
    let w = parse_word("u v U V").unwrap();
    let g = free_word_eval(&w);
    assert_eq!(g.degree(), 16);
    assert_eq!(syllable_length(&w), 4);
    assert_eq!(s_normal_form(&g).unwrap().len(), 4);
}
