use fibergroup::group::{closure, Group};
use fibergroup::monodromy::standard_twists;
use fibergroup::nilpotent::{uc_order, TreeComponent, TreeExtension, UCGroup};
use fibergroup::words::{surface_relator, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((0..rank, prop_oneof![Just(1i64), Just(-1i64)]), 0..max_len)
        .prop_map(move |letters| Word::from_letters(rank, letters).unwrap())
}

proptest! {
    #[test]
    fn uc_from_word_is_a_homomorphism(u in word(6, 30), v in word(6, 30)) {
        let g = UCGroup::new(3, 5).unwrap();
        let lhs = g.uc_from_word(&u.mul(&v)).unwrap();
        let rhs = g.multiply(&g.uc_from_word(&u).unwrap(), &g.uc_from_word(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponent_and_order_formula(u in word(4, 30)) {
        let g = UCGroup::new(2, 3).unwrap();
        let x = g.uc_from_word(&u).unwrap();
        prop_assert!(g.is_identity(&g.power(&x, 3)));
        prop_assert_eq!(g.element_order(&x, 10), Some(g.uc_element_order(&x)));
        if x.v.iter().any(|&c| c != 0) {
            prop_assert_eq!(g.uc_element_order(&x), 3);
        }
    }
}

#[test]
fn closure_orders() {
    for (genus, expected) in [(1usize, 9u128), (2, 19683)] {
        let g = UCGroup::new(genus, 3).unwrap();
        let gens: Vec<_> = (0..2 * genus).map(|i| g.generator(i)).collect();
        let all = closure(&g, &gens, 1 << 20).unwrap();
        assert_eq!(all.len() as u128, expected);
        assert_eq!(uc_order(genus, 3).unwrap(), expected);
    }
}

/// Twists preserve the kernel of the quotient map and act surjectively.
#[test]
fn twists_act_by_automorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for genus in 1..=2 {
        let g = UCGroup::new(genus, 3).unwrap();
        let rank = 2 * genus;
        let rel = surface_relator(genus).unwrap();
        for t in standard_twists(genus) {
            for _ in 0..200 {
                let u = Word::random(rank, 12, &mut rng);
                // u' has the same image: insert a conjugated relator, a cube and a triple commutator
                let c = Word::random(rank, 4, &mut rng);
                let x = Word::random(rank, 3, &mut rng);
                let y = Word::random(rank, 3, &mut rng);
                let z = Word::random(rank, 3, &mut rng);
                let cut = rng.gen_range(0..=u.len());
                let letters: Vec<_> = u.letters().collect();
                let head = Word::from_letters(rank, letters[..cut].iter().copied()).unwrap();
                let tail = Word::from_letters(rank, letters[cut..].iter().copied()).unwrap();
                let noise = rel
                    .conjugate_by(&c)
                    .unwrap()
                    .mul(&x.pow(3))
                    .mul(&x.commutator(&y).unwrap().commutator(&z).unwrap());
                let u2 = head.mul(&noise).mul(&tail);
                assert_eq!(g.uc_from_word(&u).unwrap(), g.uc_from_word(&u2).unwrap());
                assert_eq!(
                    g.uc_from_word(&t.apply(&u).unwrap()).unwrap(),
                    g.uc_from_word(&t.apply(&u2).unwrap()).unwrap()
                );
            }
            let images: Vec<_> = t
                .images
                .iter()
                .map(|w| g.uc_from_word(w).unwrap())
                .collect();
            assert_eq!(
                closure(&g, &images, 1 << 20).unwrap().len() as u128,
                g.order()
            );
        }
    }
}

#[test]
fn tree_extension_two_tori() {
    let comps = vec![
        TreeComponent {
            genus: 1,
            nz_cycles: vec![vec![1, 0]],
        },
        TreeComponent {
            genus: 1,
            nz_cycles: vec![vec![1, 1]],
        },
    ];
    let t = TreeExtension::build(comps, vec![(0, 1)]).unwrap();
    assert_eq!(t.order(), 32);
    let gens: Vec<_> = (0..4).map(|i| t.generator(i)).collect();
    let all = closure(&t, &gens, 1000).unwrap();
    assert_eq!(all.len(), 32);
    // the centre of the glued group is the single shared Z/2
    let centre: Vec<_> = all
        .iter()
        .filter(|x| all.iter().all(|y| t.multiply(x, y) == t.multiply(y, x)))
        .collect();
    assert_eq!(centre.len(), 2);
    assert!(centre.contains(&&t.z_cycle_image()));
    for j in 0..2 {
        for s in t.nz_cycle_images(j) {
            assert_eq!(t.element_order(&s, 10), Some(2));
        }
    }
}
