use fibergroup::monodromy::{
    disjoint_product, is_identity_mod, mod_n_action, pairing, random_disjoint_classes,
    standard_twists, transvection, HomologyClass,
};
use fibergroup::words::Word;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn class(g: usize) -> impl Strategy<Value = HomologyClass> {
    proptest::collection::vec(-5i64..=5, 2 * g).prop_map(|c| HomologyClass::new(c).unwrap())
}

proptest! {
    #[test]
    fn pairing_is_bilinear_and_alternating(x in class(3), y in class(3), z in class(3), k in -4i64..4) {
        let sum = HomologyClass::new(y.coords.iter().zip(&z.coords).map(|(a, b)| k * a + b).collect()).unwrap();
        prop_assert_eq!(pairing(&x, &sum).unwrap(), k * pairing(&x, &y).unwrap() + pairing(&x, &z).unwrap());
        prop_assert_eq!(pairing(&x, &y).unwrap(), -pairing(&y, &x).unwrap());
        prop_assert_eq!(pairing(&x, &x).unwrap(), 0);
    }

    #[test]
    fn transvection_formula(s in class(4), x in class(4)) {
        let d = transvection(&s);
        let p = pairing(&x, &s).unwrap();
        let expected: Vec<i64> = x.coords.iter().zip(&s.coords).map(|(a, b)| a - p * b).collect();
        prop_assert_eq!(d.apply(&x).coords, expected);
        prop_assert!(d.is_symplectic());
        prop_assert!(d.is_unipotent_of_step_two());
        // image of 1 - D is spanned by s
        prop_assert!(d.one_minus().rank() <= 1);
        if !s.is_zero() {
            prop_assert_eq!(d.one_minus().rank(), 1);
        }
    }
}

#[test]
fn disjoint_sets_satisfy_monodromy_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..1000 {
        let g = 1 + trial % 4;
        let cycles = random_disjoint_classes(g, &mut rng);
        let t = disjoint_product(&cycles).unwrap();
        assert!(t.is_symplectic());
        assert!(t.is_unipotent_of_step_two());
        let mut reversed = cycles.clone();
        reversed.reverse();
        assert_eq!(disjoint_product(&reversed).unwrap(), t);
        for n in [2u32, 3, 4, 5, 7] {
            assert!(is_identity_mod(
                &mod_n_action(&t.power(n), n as u64).unwrap()
            ));
        }
    }
}

#[test]
fn twists_commute_with_abelianization() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in 1..=3 {
        for t in standard_twists(g) {
            let curve = HomologyClass::standard(g, &t.curve).unwrap();
            let d = transvection(&curve);
            assert_eq!(t.abelianized_matrix(), d);
            for _ in 0..100 {
                let w = Word::random(2 * g, 16, &mut rng);
                let lhs = HomologyClass::of_word(&t.apply(&w).unwrap()).unwrap();
                let rhs = d.apply(&HomologyClass::of_word(&w).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}
