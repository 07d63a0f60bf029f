//! Algebraic identities checked on random inputs.

use indkit::exactpoly::text::format_polynomial;
use indkit::exactpoly::{int, parse_polynomial, Monomial, Polynomial, Rational, UPoly};
use indkit::liealg::LieSpan;
use indkit::plane::{
    jvk_factorize, s_normal_form, AffineMap, AmalgamWord, Factor, JonqFactor, SFactor, SKind, SWord,
};
use indkit::spectral::{exp_lnd, jordan_decompose, log_unipotent};
use indkit::{Automorphism, PolyMap, VectorField};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Rational> {
    prop_oneof![
        4 => (-5i64..=5).prop_map(int),
        1 => ((-5i64..=5), (1i64..=4)).prop_map(|(n, d)| Rational::new(n.into(), d.into())),
    ]
}

fn poly_in(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), coeff()), 0..=max_terms).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg);
        Polynomial::from_terms(n, terms.map(|(e, c)| (Monomial::from_exponents(&e), c)))
    })
}

fn poly2() -> impl Strategy<Value = Polynomial> {
    poly_in(2, 4, 5)
}

fn field2() -> impl Strategy<Value = VectorField> {
    (poly_in(2, 3, 4), poly_in(2, 3, 4)).prop_map(|(a, b)| VectorField::new(vec![a, b]).unwrap())
}

fn map2() -> impl Strategy<Value = PolyMap> {
    (poly_in(2, 2, 4), poly_in(2, 2, 4)).prop_map(|(a, b)| PolyMap::new(vec![a, b]).unwrap())
}

/// Elementary automorphism `x_i -> c x_i + p(other)` in two variables.
fn elementary2() -> impl Strategy<Value = Automorphism> {
    (0usize..2, prop_oneof![Just(int(1)), Just(int(-1)), Just(int(2))], poly_in(1, 2, 3)).prop_map(|(i, c, p)| {
        let other = 1 - i;
        let shift = p.remap_vars(2, &[other]);
        Automorphism::elementary(2, i, c, &shift).unwrap()
    })
}

fn automorphism2() -> impl Strategy<Value = Automorphism> {
    prop::collection::vec(elementary2(), 1..=2).prop_map(|fs| Automorphism::from_factors(&fs, 2).unwrap())
}

/// Triangular LND `[p(y), c]`.
fn lnd2() -> impl Strategy<Value = VectorField> {
    (poly_in(1, 4, 3), coeff()).prop_map(|(p, c)| {
        VectorField::new(vec![p.remap_vars(2, &[1]), Polynomial::constant(2, c)]).unwrap()
    })
}

fn upoly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-3i64..=3, 1..=max_deg + 1).prop_map(|c| UPoly::from_ints(&c))
}

fn jonq() -> impl Strategy<Value = JonqFactor> {
    (upoly(4), prop_oneof![Just(int(1)), Just(int(-2))], -1i64..=1).prop_map(|(h, a, d)| JonqFactor {
        a,
        h,
        c: int(1),
        d: int(d),
    })
}

fn affine() -> impl Strategy<Value = AffineMap> {
    (prop::array::uniform4(-2i64..=2), -1i64..=1)
        .prop_filter_map("singular", |(m, b)| {
            AffineMap::new([[int(m[0]), int(m[1])], [int(m[2]), int(m[3])]], [int(b), int(0)]).ok()
        })
}

fn amalgam() -> impl Strategy<Value = AmalgamWord> {
    prop::collection::vec(prop_oneof![jonq().prop_map(Factor::Jonq), affine().prop_map(Factor::Affine)], 1..=4)
        .prop_map(|factors| AmalgamWord { factors })
}

fn sword() -> impl Strategy<Value = SWord> {
    (any::<bool>(), prop::collection::vec(upoly(1), 0..=3)).prop_map(|(start, fs)| {
        let mut kind = if start { SKind::J } else { SKind::Jminus };
        let mut factors = Vec::new();
        for f in fs {
            factors.push(SFactor::new(kind, f));
            kind = if kind == SKind::J { SKind::Jminus } else { SKind::J };
        }
        let mut w = SWord { factors };
        w.reduce();
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly2(), q in poly2(), r in poly2()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &Polynomial::one(2), p.clone());
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn truncated_products_agree(p in poly2(), q in poly2(), d in 0u32..6) {
        prop_assert_eq!(p.mul_truncated(&q, d), (&p * &q).truncate(d));
        prop_assert_eq!(p.pow_truncated(3, d), p.pow(3).truncate(d));
    }

    #[test]
    fn text_round_trip(p in poly_in(3, 4, 6)) {
        let s = format_polynomial(&p);
        prop_assert_eq!(parse_polynomial(&s, 3).unwrap(), p);
    }

    #[test]
    fn map_and_field_round_trip(g in map2(), d in field2()) {
        prop_assert_eq!(PolyMap::parse(&g.to_string()).unwrap(), g);
        prop_assert_eq!(VectorField::parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn substitution_is_associative(p in poly2(), g in map2(), h in map2()) {
        let gh = g.compose(&h).unwrap();
        let lhs = p.substitute(gh.components()).unwrap();
        let rhs = p.substitute(g.components()).unwrap().substitute(h.components()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivations_obey_leibniz(d in field2(), p in poly2(), q in poly2()) {
        let lhs = d.apply(&(&p * &q)).unwrap();
        let rhs = &(&d.apply(&p).unwrap() * &q) + &(&p * &d.apply(&q).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_a_lie_bracket(a in field2(), b in field2(), c in field2()) {
        let ab = a.bracket(&b).unwrap();
        prop_assert_eq!(ab.clone(), b.bracket(&a).unwrap().scale(&int(-1)));
        let jacobi = a.bracket(&b.bracket(&c).unwrap()).unwrap()
            .add(&b.bracket(&c.bracket(&a).unwrap()).unwrap())
            .add(&c.bracket(&a.bracket(&b).unwrap()).unwrap());
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn bracket_is_the_commutator(a in field2(), b in field2(), p in poly2()) {
        let ab = a.bracket(&b).unwrap().apply(&p).unwrap();
        let comm = &a.apply(&b.apply(&p).unwrap()).unwrap() - &b.apply(&a.apply(&p).unwrap()).unwrap();
        prop_assert_eq!(ab, comm);
    }

    #[test]
    fn pushforward_is_a_group_action(d in field2(), g in automorphism2(), h in automorphism2()) {
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(d.pushforward(&gh).unwrap(), d.pushforward(&h).unwrap().pushforward(&g).unwrap());
        prop_assert_eq!(d.pushforward(&Automorphism::identity(2)).unwrap(), d);
    }

    #[test]
    fn pushforward_preserves_brackets(a in field2(), b in field2(), g in elementary2()) {
        let lhs = a.bracket(&b).unwrap().pushforward(&g).unwrap();
        let rhs = a.pushforward(&g).unwrap().bracket(&b.pushforward(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn automorphisms_invert(g in automorphism2()) {
        prop_assert!(g.forward().compose(g.inverse()).unwrap().is_identity());
        prop_assert!(g.inverse().compose(g.forward()).unwrap().is_identity());
        prop_assert!(g.forward().jacobian().1.is_constant());
    }

    #[test]
    fn exp_log_round_trip(d in lnd2()) {
        let g = exp_lnd(&d, 16).unwrap();
        prop_assert!(g.forward().compose(g.inverse()).unwrap().is_identity());
        prop_assert_eq!(log_unipotent(&g, 16).unwrap(), d);
    }

    #[test]
    fn jordan_parts_commute(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2, e in -1i64..=1) {
        let d = VectorField::parse(&format!("[{a}*x + {c}*y^2 + {e}*y, {b}*y]")).unwrap();
        let pair = jordan_decompose(&d, 4).unwrap();
        prop_assert_eq!(pair.semisimple.add(&pair.nilpotent), d);
        prop_assert!(pair.semisimple.bracket(&pair.nilpotent).unwrap().is_zero());
        prop_assert!(pair.nilpotent_matrix.is_nilpotent());
        prop_assert!(pair.semisimple_matrix.is_semisimple());
    }

    #[test]
    fn lie_span_membership(a in field2(), b in field2(), s in coeff(), t in coeff()) {
        let span = LieSpan::from_fields(2, &[a.clone(), b.clone()]).unwrap();
        prop_assert!(span.contains(&a.scale(&s).add(&b.scale(&t))));
    }

    #[test]
    fn jvk_recomposes(w in amalgam()) {
        let g = w.recompose();
        let f = jvk_factorize(&g).unwrap();
        prop_assert_eq!(f.recompose(), g.clone());
        prop_assert!(f.len() <= w.len());
        let again = jvk_factorize(&f.recompose()).unwrap();
        prop_assert_eq!(again.jonq_degrees(), f.jonq_degrees());
        prop_assert!(f.inverse().apply_left(&g).is_identity());
    }

    #[test]
    fn s_normal_form_is_unique(w in sword()) {
        let g = w.recompose();
        let nf = s_normal_form(&g).unwrap();
        prop_assert_eq!(&nf, &w);
        prop_assert!(nf.inverse().apply_left(&g).is_identity());
    }
}
