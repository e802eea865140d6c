use fibergroup::words::{surface_relator, Alphabet, Syllable, Word};
use proptest::prelude::*;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((0..rank, prop_oneof![Just(1i64), Just(-1i64)]), 0..max_len)
        .prop_map(move |letters| Word::from_letters(rank, letters).unwrap())
}

proptest! {
    #[test]
    fn reduced_words_have_no_cancelling_neighbours(w in word(3, 40)) {
        for pair in w.syllables().windows(2) {
            prop_assert_ne!(pair[0].gen, pair[1].gen);
        }
        prop_assert!(w.syllables().iter().all(|s| s.exp != 0));
    }

    #[test]
    fn free_reduce_is_idempotent(w in word(3, 40)) {
        let again = Word::free_reduce(3, w.syllables().iter().copied()).unwrap();
        prop_assert_eq!(again, w);
    }

    #[test]
    fn group_laws(u in word(3, 20), v in word(3, 20), x in word(3, 20)) {
        prop_assert_eq!(u.mul(&v).mul(&x), u.mul(&v.mul(&x)));
        prop_assert!(u.mul(&u.inverse()).is_identity());
        prop_assert_eq!(u.mul(&Word::identity(3)), u.clone());
    }

    #[test]
    fn cyclic_form_is_conjugacy_invariant(u in word(3, 20), g in word(3, 10)) {
        let c = u.conjugate_by(&g).unwrap();
        prop_assert_eq!(u.cyclic_normal_form(false), c.cyclic_normal_form(false));
        prop_assert_eq!(u.cyclic_normal_form(true), u.inverse().cyclic_normal_form(true));
    }

    #[test]
    fn display_parse_round_trip(u in word(3, 30)) {
        let l = Alphabet::letters(3);
        prop_assert_eq!(l.parse(&u.display(&l)).unwrap(), u);
    }

    #[test]
    fn abelianization_is_additive(u in word(4, 20), v in word(4, 20)) {
        let sum: Vec<i64> = u.abelianize_vector().iter().zip(v.abelianize_vector()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(u.mul(&v).abelianize_vector(), sum);
    }
}

#[test]
fn surface_relators() {
    for g in 1..=5 {
        let r = surface_relator(g).unwrap();
        assert_eq!(r.len(), 4 * g);
        assert!(r.abelianize_vector().iter().all(|&x| x == 0));
    }
    assert!(surface_relator(0).is_err());
    assert_eq!(Syllable::new(0, 2).exp, 2);
}
