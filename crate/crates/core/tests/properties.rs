use kummer_perverse::decomp::{kummer_pp, kummer_product, kummer_quotient_pp, KummerClass};
use kummer_perverse::orbifold::{NuClass, SymmetricOrbifold};
use kummer_perverse::surfaces::{SurfaceCase, SurfaceModel, TorsionElement};
use num_bigint::BigUint;
use proptest::prelude::*;
use std::sync::LazyLock;

static ORB3: LazyLock<SymmetricOrbifold> = LazyLock::new(|| SymmetricOrbifold::abelian(3).unwrap());

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divisibility_under_torsion_overrides(case in 0usize..3, rank in 0usize..6, n in 1usize..6) {
        let model = SurfaceModel::new(SurfaceCase::ALL[case]).with_torsion_rank(rank);
        let q = kummer_quotient_pp(&model, n).unwrap();
        prop_assert_eq!(q.multiply(&model.cohomology_pp()), kummer_pp(&model, n).unwrap());
    }

    #[test]
    fn kummer_perversity_ignores_the_label(i in 0usize..960, nums in proptest::collection::vec(0u32..3, 4)) {
        let basis = &ORB3.invariant_basis()[i];
        let torsion = SurfaceModel::abelian().torsion;
        let g = basis.nu.gcd() as u32;
        let sigma = TorsionElement::new(3, nums.iter().map(|x| if g == 3 { *x } else { 0 }).collect());
        let payload = NuClass::monomial(basis.nu.clone(), &basis.labels);
        let class = KummerClass::new(&torsion, sigma, payload.clone()).unwrap();
        let zero = KummerClass::new(&torsion, TorsionElement::zero(4), payload).unwrap();
        prop_assert_eq!(class.perversity(&ORB3), zero.perversity(&ORB3));
        prop_assert_eq!(class.perversity(&ORB3), basis.perversity);
        prop_assert!(class.perversity(&ORB3) <= 6);
    }

    #[test]
    fn product_labels_obey_the_gcd_rule(
        i in 0usize..960,
        j in 0usize..960,
        a in proptest::collection::vec(0u32..3, 4),
        b in proptest::collection::vec(0u32..3, 4),
    ) {
        let torsion = SurfaceModel::abelian().torsion;
        let make = |k: usize, nums: &[u32]| {
            let basis = &ORB3.invariant_basis()[k];
            let three = basis.nu.gcd() == 3;
            let sigma = TorsionElement::new(3, nums.iter().map(|x| if three { *x } else { 0 }).collect());
            KummerClass::new(&torsion, sigma, NuClass::monomial(basis.nu.clone(), &basis.labels)).unwrap()
        };
        let (x, y) = (make(i, &a), make(j, &b));
        let product = kummer_product(&ORB3, &torsion, &x, &y).unwrap();
        let sum = x.sigma.add(&y.sigma).unwrap();
        for ((lambda, label), component) in &product {
            prop_assert_eq!(label, &sum);
            prop_assert!(label.is_m_torsion(lambda.gcd() as u32));
            prop_assert!(!component.is_zero());
            let p = ORB3.perversity(component).unwrap();
            prop_assert_eq!(p, x.perversity(&ORB3) + y.perversity(&ORB3));
        }
    }
}

#[test]
fn total_dimension_matches_label_count() {
    let model = SurfaceModel::abelian();
    let orb = &*ORB3;
    let labeled: u64 =
        orb.invariant_basis().iter().map(|b| model.torsion.elements(b.nu.gcd() as u32).unwrap().len() as u64).sum();
    assert_eq!(kummer_pp(&model, 3).unwrap().total(), BigUint::from(labeled));
}
