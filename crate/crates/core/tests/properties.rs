use std::sync::OnceLock;

use proptest::prelude::*;

use reflquot::cyclotomic::euler_phi;
use reflquot::poly::TruncSeries;
use reflquot::theorems::fix_polynomial;
use reflquot::{Cyclotomic, GroupSpec, Rational, ReflectionGroup};

const CONDUCTORS: [u32; 8] = [1, 2, 3, 4, 6, 8, 12, 24];

fn cyclotomic(n: u32) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((-9i64..=9, 1i64..=5), euler_phi(n)).prop_map(move |v| {
        Cyclotomic::from_coeffs(n, v.into_iter().map(|(a, b)| Rational::new(a, b)).collect())
    })
}

fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| (cyclotomic(n), cyclotomic(n), cyclotomic(n)))
}

fn units(n: u32) -> Vec<i64> {
    (1..=n as i64).filter(|&k| num_integer::Integer::gcd(&k, &(n as i64)) == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn galois_is_a_field_automorphism((a, b, _c) in triple(), pick in 0usize..16) {
        let n = a.conductor();
        let u = units(n);
        let k = u[pick % u.len()];
        let s = |x: &Cyclotomic| x.galois(k).unwrap();
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
        // k has an inverse unit; composing gives back a
        let inv = u.iter().copied().find(|&j| (j * k).rem_euclid(n as i64) == 1 % n as i64).unwrap();
        prop_assert_eq!(s(&a).galois(inv).unwrap(), a.clone());
    }
}

fn series() -> impl Strategy<Value = TruncSeries<Rational>> {
    (1i64..=4, prop::collection::vec(((0u32..=4, 0u32..=3), -5i64..=5, 1i64..=3), 0..8)).prop_map(|(c0, terms)| {
        let mut s = TruncSeries::zero(&["x", "y"], &[4, 3]);
        s.add_term(vec![0, 0], Rational::from_int(c0));
        for ((i, j), a, b) in terms {
            if i + j > 0 {
                s.add_term(vec![i, j], Rational::new(a, b));
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn series_inverse_is_an_involution(s in series()) {
        let inv = s.invert(&[4, 3]).unwrap();
        prop_assert_eq!(inv.invert(&[4, 3]).unwrap().render(), s.render());
        prop_assert_eq!(s.mul(&inv).render(), TruncSeries::<Rational>::one(&["x", "y"], &[4, 3]).render());
    }
}

fn groups() -> &'static [ReflectionGroup] {
    static G: OnceLock<Vec<ReflectionGroup>> = OnceLock::new();
    G.get_or_init(|| {
        ["ST4", "ST8", "G(4,2,3)", "G(6,3,2)", "ST25"]
            .iter()
            .map(|s| ReflectionGroup::build(&s.parse::<GroupSpec>().unwrap()).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_table_matches_matrices(which in 0usize..5, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let g = &groups()[which];
        let (a, b) = (a.index(g.order()), b.index(g.order()));
        let ab = g.element(a).mul(g.element(b));
        prop_assert_eq!(g.index_of(&ab), Some(g.mul(a, b)));
        prop_assert_eq!(g.mul(a, g.inverse(a)), g.identity());
        prop_assert_eq!(g.class_of(g.conj(b, a)), g.class_of(a));
        prop_assert_eq!(g.fix(a), g.element(a).fixed_space_dim());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn galois_twists_preserve_the_combinatorics(which in 0usize..5, pick in 0usize..16, x in any::<prop::sample::Index>()) {
        let g = &groups()[which];
        let u = units(g.conductor());
        let k = u[pick % u.len()];
        let t = g.twist(k).unwrap();
        let x = x.index(g.order());
        prop_assert_eq!(t.element(x), &g.element(x).galois(k).unwrap());
        prop_assert_eq!(fix_polynomial(&t).render(), fix_polynomial(g).render());
        prop_assert_eq!(t.reflections(), g.reflections());
        prop_assert_eq!(t.fix(x), t.element(x).fixed_space_dim());
        let back = u.iter().copied().find(|&j| (j * k).rem_euclid(g.conductor() as i64) == 1 % g.conductor() as i64).unwrap();
        let tt = t.twist(back).unwrap();
        prop_assert_eq!(tt.element(x), g.element(x));
    }
}
