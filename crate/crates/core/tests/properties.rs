use std::collections::BTreeMap;

use proptest::prelude::*;

use dko::adams::{adams_coefficient, adams_newton_recursion, adams_root_model, FormalBundle, RecursionVariant};
use dko::ahss::FormSlot;
use dko::exact::{invert_unit, q, GeneratorScheme, GradedPolynomial, Rational};
use dko::integrality::{d4k_survival, phi};
use dko::ko::{KoBasis, KoElement};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..13).prop_map(|(n, d)| q(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..200, 1i64..13).prop_map(|(n, d)| q(n, d))
}

fn nonzero_r() -> impl Strategy<Value = i64> {
    prop_oneof![-7i64..=-1, 1i64..=7]
}

fn ko_element() -> impl Strategy<Value = KoElement> {
    prop::collection::vec((0usize..4, -2i64..=2, -9i64..=9), 0..6).prop_map(|terms| {
        let mut e = KoElement::zero();
        for (kind, k, c) in terms {
            let b = [KoBasis::Beta(k), KoBasis::AlphaBeta(k), KoBasis::EtaBeta(k), KoBasis::Eta2Beta(k)][kind];
            e.add_term(b, Rational::from(c));
        }
        e
    })
}

/// Bundles over two formal variables with small integral roots.
fn bundle() -> impl Strategy<Value = FormalBundle> {
    prop::collection::vec((-2i64..=2, -2i64..=2), 1..4).prop_map(|roots| {
        let mut map = BTreeMap::new();
        for (a, b) in roots {
            *map.entry(vec![a, b]).or_insert(0) += 1;
        }
        FormalBundle::from_roots(vec!["x".into(), "y".into()], map).unwrap()
    })
}

fn direct_sum(a: &FormalBundle, b: &FormalBundle) -> FormalBundle {
    let mut roots = a.roots.clone().unwrap();
    for (r, m) in b.roots.as_ref().unwrap() {
        *roots.entry(r.clone()).or_insert(0) += m;
    }
    FormalBundle::from_roots(a.vars.clone(), roots).unwrap()
}

proptest! {
    #[test]
    fn d4k_ignores_lattice_shifts(
        k in 1u32..=4,
        periods in prop::collection::vec(rational(), 1..4),
        shifts in prop::collection::vec(-5i64..=5, 3),
    ) {
        // degree 8m tolerates integral shifts, degree 8m+4 only even ones
        let unit = if k % 2 == 0 { 1 } else { 2 };
        let moved: Vec<Rational> = periods.iter().zip(shifts.iter().cycle()).map(|(w, s)| w + Rational::from(s * unit)).collect();
        let a = d4k_survival(&FormSlot::new(0).with(4 * k, periods), k, None).unwrap();
        let b = d4k_survival(&FormSlot::new(0).with(4 * k, moved), k, None).unwrap();
        prop_assert_eq!(a.survives, b.survives);
        prop_assert_eq!(a.value.values, b.value.values);
    }

    #[test]
    fn odd_degree_forms_die_on_odd_integers(n in -20i64..20) {
        let s = d4k_survival(&FormSlot::new(0).with(4, vec![Rational::from(2 * n + 1)]), 1, None).unwrap();
        prop_assert!(!s.survives);
        prop_assert_eq!(s.witness, Some(q(1, 2)));
    }

    #[test]
    fn phi_is_monotone(x in positive_rational(), y in positive_rational()) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let (a, b) = (phi(&lo).unwrap(), phi(&hi).unwrap());
        prop_assert!(a <= b);
        prop_assert!(hi > a);
    }

    #[test]
    fn coefficient_adams_operations_compose(r in nonzero_r(), s in nonzero_r(), x in ko_element()) {
        let lhs = adams_coefficient(r, &adams_coefficient(s, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, adams_coefficient(r * s, &x).unwrap());
    }

    #[test]
    fn coefficient_adams_operations_are_additive(r in nonzero_r(), x in ko_element(), y in ko_element()) {
        let lhs = adams_coefficient(r, &x.add(&y)).unwrap();
        prop_assert_eq!(lhs, adams_coefficient(r, &x).unwrap().add(&adams_coefficient(r, &y).unwrap()));
    }

    #[test]
    fn root_model_composes(r in 1i64..=4, s in 1i64..=4, b in bundle()) {
        let lhs = adams_root_model(r, &adams_root_model(s, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs.class(), adams_root_model(r * s, &b).unwrap().class());
        prop_assert_eq!(lhs.class().unwrap(), b.class().unwrap().psi(r * s));
    }

    #[test]
    fn root_model_is_additive(r in 1i64..=5, a in bundle(), b in bundle()) {
        let whole = adams_root_model(r, &direct_sum(&a, &b)).unwrap().class().unwrap();
        let parts = adams_root_model(r, &a).unwrap().class().unwrap().add(&adams_root_model(r, &b).unwrap().class().unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn newton_recursion_matches_roots(r in 1i64..=5, b in bundle()) {
        let newton = adams_newton_recursion(r, &b, RecursionVariant::Newton).unwrap();
        prop_assert_eq!(newton, adams_root_model(r, &b).unwrap().class().unwrap());
    }

    #[test]
    fn unit_inverse_is_two_sided(coeffs in prop::collection::vec(rational(), 5)) {
        let p = GeneratorScheme::pontrjagin();
        let names = ["p1", "p2", "p1^2", "p1*p2", "p1^3"];
        let mut a = GradedPolynomial::one(&p);
        for (c, m) in coeffs.iter().zip(names) {
            a = &a + &GradedPolynomial::parse(&p, m).unwrap().scale(c);
        }
        let inv = invert_unit(&a, 16).unwrap();
        prop_assert_eq!(inv.mul_trunc(&a, 16).unwrap(), GradedPolynomial::one(&p));
        prop_assert_eq!(a.mul_trunc(&inv, 16).unwrap(), GradedPolynomial::one(&p));
    }
}
