use amenable_entropy::group::{FiniteSubset, FolnerSequence, GroupElement, GroupSpec};
use amenable_entropy::measures::{local_entropy_profile, smb_estimate, ProductMeasure};
use amenable_entropy::numeric::frac;
use amenable_entropy::shift_space::{eps, Cylinder, MetricSpec, Pattern, ShiftSpace};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn measure() -> impl Strategy<Value = ProductMeasure> {
    prop_oneof![
        (1i64..10).prop_map(|p| ProductMeasure::bernoulli_frac(GroupSpec::z(), &[(p, 10), (10 - p, 10)]).unwrap()),
        (1i64..5, 1i64..5).prop_map(|(a, b)| {
            let t = a + b + 1;
            ProductMeasure::bernoulli_frac(GroupSpec::z(), &[(a, t), (b, t), (1, t)]).unwrap()
        }),
        (3usize..12).prop_map(ProductMeasure::parry_golden_mean),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cylinder_masses_sum_to_one(mu in measure(), len in 1i64..9, lo in -5i64..5) {
        let k = mu.alphabet_size();
        let w = FiniteSubset::interval(lo, lo + len);
        let all = ShiftSpace::full(GroupSpec::z(), k).unwrap().admissible_patterns(&w).unwrap();
        let total: BigRational = all.into_iter().map(|p| mu.cylinder_mass(&Cylinder::new(p)).unwrap()).sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn cylinder_masses_are_shift_invariant(mu in measure(), syms in prop::collection::vec(0u8..2, 1..10), t in -20i64..20) {
        let n = syms.len() as i64;
        let a = Pattern::new(FiniteSubset::interval(0, n), syms.clone()).unwrap();
        let b = Pattern::new(FiniteSubset::interval(t, t + n), syms).unwrap();
        prop_assert_eq!(mu.cylinder_mass(&Cylinder::new(a)).unwrap(), mu.cylinder_mass(&Cylinder::new(b)).unwrap());
    }

    #[test]
    fn z2_masses_sum_to_one(p in 1i64..10, h in 1i64..4, w in 1i64..4) {
        let mu = ProductMeasure::bernoulli_frac(GroupSpec::zd(2).unwrap(), &[(p, 10), (10 - p, 10)]).unwrap();
        let win = FiniteSubset::box_set(&[(0, h), (0, w)]);
        let all = ShiftSpace::full(GroupSpec::zd(2).unwrap(), 2).unwrap().admissible_patterns(&win).unwrap();
        let total: BigRational = all.into_iter().map(|q| mu.cylinder_mass(&Cylinder::new(q)).unwrap()).sum();
        prop_assert!(total.is_one());
    }

    #[test]
    fn bowen_ball_mass_is_monotone(mu in measure(), seed in 0u64..1000) {
        let metric = MetricSpec::new(GroupSpec::z());
        let x = mu.sample(&FiniteSubset::interval(-4, 20), seed).unwrap();
        let epsilons = [eps(1, 2), eps(1, 4), eps(1, 8), eps(1, 16)];
        for e in epsilons {
            let mut last = BigRational::one();
            for n in 1..=12 {
                let m = mu.bowen_ball_mass(&x, &FiniteSubset::interval(0, n), e, &metric).unwrap();
                prop_assert!(m <= last);
                last = m;
            }
        }
        for n in [1i64, 5, 12] {
            let f = FiniteSubset::interval(0, n);
            let masses: Vec<BigRational> = epsilons.iter().map(|&e| mu.bowen_ball_mass(&x, &f, e, &metric).unwrap()).collect();
            prop_assert!(masses.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn smb_equals_local_entropy_at_half(mu in measure(), seed in 0u64..1000) {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let metric = MetricSpec::new(GroupSpec::z());
        let x = mu.sample(&FiniteSubset::interval(0, 40), seed).unwrap();
        let ns: Vec<usize> = (1..=40).collect();
        let local = local_entropy_profile(&mu, &x, eps(1, 2), &seq, &ns, &metric).unwrap();
        let smb = smb_estimate(&mu, &x, &seq, &ns).unwrap();
        for (a, b) in local.points.iter().zip(&smb) {
            prop_assert_eq!(&a.monomial, &b.monomial);
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }
}

#[test]
fn heisenberg_cylinder_masses_sum_to_one() {
    let g = GroupSpec::heisenberg();
    let mu = ProductMeasure::bernoulli_frac(g.clone(), &[(1, 3), (2, 3)]).unwrap();
    let w = FiniteSubset::from_vec(vec![
        GroupElement::new(&[0, 0, 0]),
        GroupElement::new(&[1, 0, 0]),
        GroupElement::new(&[0, 1, 0]),
        GroupElement::new(&[0, 0, 1]),
    ]);
    let all = ShiftSpace::full(g, 2).unwrap().admissible_patterns(&w).unwrap();
    let total: BigRational = all
        .into_iter()
        .map(|p| mu.cylinder_mass(&Cylinder::new(p)).unwrap())
        .sum();
    assert!(total.is_one());
    assert_eq!(
        mu.cylinder_mass(&Cylinder::new(Pattern::new(w, vec![1, 1, 1, 1]).unwrap()))
            .unwrap(),
        frac(16, 81)
    );
}
