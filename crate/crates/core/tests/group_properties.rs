use amenable_entropy::group::{Enumeration, FiniteSubset, GroupElement, GroupSpec};
use proptest::prelude::*;

fn heis() -> impl Strategy<Value = GroupElement> {
    (-20i64..20, -20i64..20, -50i64..50).prop_map(|(a, b, c)| GroupElement::new(&[a, b, c]))
}

fn z2_set() -> impl Strategy<Value = FiniteSubset> {
    prop::collection::vec((-6i64..6, -6i64..6), 1..12)
        .prop_map(|v| FiniteSubset::from_vec(v.into_iter().map(|(a, b)| GroupElement::new(&[a, b])).collect()))
}

fn heis_set() -> impl Strategy<Value = FiniteSubset> {
    prop::collection::vec(heis(), 1..10).prop_map(FiniteSubset::from_vec)
}

proptest! {
    #[test]
    fn heisenberg_is_a_group(g in heis(), h in heis(), k in heis()) {
        let grp = GroupSpec::heisenberg();
        prop_assert_eq!(grp.mul(&grp.mul(&g, &h), &k), grp.mul(&g, &grp.mul(&h, &k)));
        prop_assert_eq!(grp.mul(&g, &grp.inv(&g)), grp.identity());
        prop_assert_eq!(grp.mul(&grp.inv(&g), &g), grp.identity());
        prop_assert_eq!(grp.mul(&g, &grp.identity()), g);
    }

    #[test]
    fn product_and_inverse_sets(a in z2_set(), b in z2_set(), c in heis_set(), d in heis_set()) {
        let z2 = GroupSpec::zd(2).unwrap();
        prop_assert!(z2.product_set(&a, &b).len() <= a.len() * b.len());
        prop_assert_eq!(z2.inverse_set(&a).len(), a.len());
        let h = GroupSpec::heisenberg();
        prop_assert!(h.product_set(&c, &d).len() <= c.len() * d.len());
        prop_assert_eq!(h.inverse_set(&c).len(), c.len());
        prop_assert_eq!(h.inverse_set(&h.inverse_set(&c)), c);
    }

    #[test]
    fn enumeration_prefixes_nest(m in 1usize..40, which in 0usize..4) {
        let g = match which {
            0 => GroupSpec::z(),
            1 => GroupSpec::zd(2).unwrap(),
            2 => GroupSpec::zd(3).unwrap(),
            _ => GroupSpec::heisenberg(),
        };
        let e = Enumeration::new(g);
        let short = e.prefix(m);
        let long = e.prefix(m + 1);
        prop_assert_eq!(&long[..m], &short[..]);
        prop_assert_eq!(long.len(), m + 1);
    }

    #[test]
    fn folner_defect_is_symmetric_under_inverse(n in 1i64..12, a in -3i64..3, b in -3i64..3) {
        let z2 = GroupSpec::zd(2).unwrap();
        let f = FiniteSubset::box_set(&[(0, n), (0, n)]);
        let g = GroupElement::new(&[a, b]);
        prop_assert_eq!(z2.folner_defect(&f, &g), z2.folner_defect(&f, &z2.inv(&g)));
    }
}
